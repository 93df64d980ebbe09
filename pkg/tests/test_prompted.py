import itertools

import pytest

from genlimit import collection as coll
from genlimit.core import SampleSet
from genlimit.game import (Referee, StreamAdversary, canonical_enumeration, constant_prompt,
                           cycle_prompts, run_game)
from genlimit.generators import LimitGenerator
from genlimit.prompted import (NontrivialPromptGenerator, PromptError, RobustPromptGenerator,
                               classify_prompt, prefix_dfa, prompted_generate_nontrivial,
                               prompted_generate_robust)
from genlimit.scenario import trace_csv
from genlimit.universe import strings

AB = strings("ab")


def test_prefix_automaton():
    d = prefix_dfa("a", "ab")
    assert d.accepts("a") and d.accepts("aa") and d.accepts("ab")
    assert not d.accepts("") and not d.accepts("b")
    assert all(prefix_dfa("", "ab").accepts(w) for w in ["", "a", "bab"])
    minus = prefix_dfa("ab", "ab", ["ab"])
    assert not minus.accepts("ab") and minus.accepts("aba")


def continuations(dfa, p, n):
    return [w for k in range(n + 1) for w in map("".join, itertools.product("ab", repeat=k))
            if w.startswith(p) and dfa.accepts(w)]


def test_classify_robust_and_not():
    c = coll.dfa_collection([coll.dfa_star("ab"), coll.dfa_star("a")])
    cls = classify_prompt(c, 2, "a")
    assert cls.robust
    for i in (1, 2):
        # continuations keep appearing at the longest lengths checked
        assert any(len(w) >= 9 for w in continuations(c.language(i).dfa, "a", 10))
    cls = classify_prompt(c, 2, "b")
    assert not cls.robust
    assert not cls.nontrivial_for(2)


def test_parity_pair_prompt_b_is_robust():
    c = coll.parity_prefix_pair()
    s = SampleSet([AB.index_of(x) for x in ("a", "aa", "ab")])
    cls = classify_prompt(c, 2, "b", s)
    assert cls.robust and cls.t_valid() == [1, 2]


def test_prompts_need_string_universe():
    with pytest.raises(PromptError):
        classify_prompt(coll.arith_progressions(), 1, "a")


def test_robust_generator_examples():
    c = coll.dfa_collection([coll.dfa_all()])
    s = SampleSet([AB.index_of("")])
    out, _ = prompted_generate_robust(c, s, 1, "a")
    assert out == AB.index_of("a")
    plain = LimitGenerator()
    plain.reset(c)
    assert prompted_generate_robust(c, s, 1, "")[0] == plain.step(1, s).output


def test_nontrivial_generator_example():
    c = coll.dfa_collection([coll.dfa_a_star_b_star(), coll.dfa_star("a")])
    s = SampleSet([AB.index_of("a"), AB.index_of("aa")])
    out, _ = prompted_generate_nontrivial(c, s, 2, "ab")
    assert AB.element_at(out) == "ab"


def test_parity_outputs_refuted_by_one_language():
    c = coll.parity_prefix_pair()
    s = SampleSet([AB.index_of("a")])
    odd_lang, even_lang = Referee(c, 1), Referee(c, 2)
    assert not odd_lang.valid(AB.index_of("ba"), s, "b")
    assert even_lang.valid(AB.index_of("ba"), s, "b")
    assert not even_lang.valid(AB.index_of("bbb"), s, "b")


def test_empty_prompts_reduce_to_plain_generation():
    c = coll.dfa_collection([coll.dfa_all(), coll.dfa_even_length(), coll.dfa_star("ab")])
    def run(gen, prompts):
        return trace_csv(run_game(c, 2, StreamAdversary(canonical_enumeration(c, 2)), gen, 30,
                                  prompts))
    plain = run(LimitGenerator(), lambda t, s: None)
    assert run(RobustPromptGenerator(), constant_prompt("")) == plain
    assert run(NontrivialPromptGenerator(), constant_prompt("")) == plain


def test_prompted_outputs_carry_prefix():
    c = coll.dfa_collection([coll.dfa_all(), coll.dfa_even_length()])
    trace = run_game(c, 2, StreamAdversary(canonical_enumeration(c, 2)), RobustPromptGenerator(),
                     60, cycle_prompts(["a", "bb", "ab"]))
    assert all(r.a_elem.startswith(r.p) for r in trace.records)
    assert trace.t_hat is not None
