"""Prompted generation over string universes.

At step t the adversary also hands over a prompt ``p_t`` and the output
must extend it. Two generators are provided:

* ``prompted-robust`` runs the limit algorithm with the stopping rule
  tightened to prompt-prefixed strings. It needs only membership queries
  but assumes every candidate language has arbitrarily long continuations
  of each prompt.
* ``prompted-nontrivial`` first finds which languages still hold an
  unseen continuation of the prompt (regular queries against the
  automaton for ``p_t·Σ* - S_t``) and follows the highest index that is
  both (t, m)-critical and t-valid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .automata import Dfa
from .collection import REGULAR, LanguageCollection, parity_prefix_pair
from .core import Generator, SampleSet, StepResult
from .game import Referee, StreamAdversary, run_game, scripted_enumeration
from .generators import (STRING_UNIVERSE, GeneratorState, LimitGenerator,
                         limit_step)


class PromptError(ValueError):
    pass


def check_prompt(collection: LanguageCollection, p: str) -> str:
    if not collection.universe.is_strings:
        raise PromptError("prompts need a string universe")
    collection.universe.validate(p)
    return p


def prefix_dfa(p: str, alphabet, exclude=()) -> Dfa:
    """Automaton for ``{p·c}`` minus the finite set ``exclude``."""
    d = Dfa.with_prefix(tuple(alphabet), p)
    exclude = list(exclude)
    if exclude:
        d = d - Dfa.finite(tuple(alphabet), exclude)
    return d


def acceptable_outputs(collection: LanguageCollection, p: str, sample) -> Dfa:
    """``R_t - S_t``: strings with prefix ``p`` that are not in the sample."""
    u = collection.universe
    return prefix_dfa(p, u.alphabet, [u.element_at(w) for w in sorted(sample)])


@dataclass
class PromptVerdict:
    long_continuations: bool
    t_valid: bool
    witness: int | None = None


@dataclass
class PromptClass:
    prompt: str
    verdicts: dict[int, PromptVerdict] = field(default_factory=dict)

    @property
    def robust(self) -> bool:
        return all(v.long_continuations for v in self.verdicts.values())

    def t_valid(self) -> list[int]:
        return [i for i, v in self.verdicts.items() if v.t_valid]

    def nontrivial_for(self, i: int) -> bool:
        return self.verdicts[i].t_valid


def classify_prompt(collection: LanguageCollection, scope: int, p: str, sample=()) -> PromptClass:
    """Exact per-language verdicts for the first ``scope`` languages.

    Robustness asks whether ``L_i ∩ p·Σ*`` is infinite; t-validity whether
    ``L_i ∩ (p·Σ* - S)`` is non-empty.
    """
    check_prompt(collection, p)
    collection.require(REGULAR)
    alphabet = collection.universe.alphabet
    ids = sorted(sample.distinct if isinstance(sample, SampleSet) else set(sample))
    rest = acceptable_outputs(collection, p, ids)
    pref = prefix_dfa(p, alphabet)
    out = PromptClass(p)
    for i in range(1, collection.limit(scope) + 1):
        lang_dfa = collection._dfa(i)
        collection.counts.regular += 1
        infinite = (lang_dfa & pref).is_infinite()
        witness = collection.regular_nonempty_intersection(i, rest)
        out.verdicts[i] = PromptVerdict(infinite, witness is not None, witness)
    return out


def prompted_generate_robust(collection, sample, t, prompt, state=None, **kw):
    state = state or GeneratorState()
    p = check_prompt(collection, prompt) if prompt else None
    res = limit_step(collection, sample, t, state, prompt=p, **kw)
    return res.output, state


def t_valid_indices(collection: LanguageCollection, sample: SampleSet, t: int, prompt: str,
                    candidates=None) -> set[int]:
    rest = acceptable_outputs(collection, prompt or "", sample.distinct)
    idx = candidates if candidates is not None else range(1, collection.limit(t) + 1)
    return {i for i in idx if collection.regular_nonempty_intersection(i, rest) is not None}


def prompted_generate_nontrivial(collection, sample, t, prompt, state=None, **kw):
    state = state or GeneratorState()
    p = check_prompt(collection, prompt) if prompt else ""
    valid = t_valid_indices(collection, sample, t, p)
    res = limit_step(collection, sample, t, state, prompt=p or None, valid=valid, **kw)
    return res.output, state


class RobustPromptGenerator(LimitGenerator):
    name = "prompted-robust"
    requires = frozenset({STRING_UNIVERSE})

    def __init__(self, **kw):
        super().__init__(**kw)
        self.name = "prompted-robust"

    def use_prompt(self, prompt):
        return check_prompt(self.collection, prompt) if prompt else None


class NontrivialPromptGenerator(LimitGenerator):
    name = "prompted-nontrivial"
    requires = frozenset({STRING_UNIVERSE, REGULAR})

    def __init__(self, **kw):
        super().__init__(**kw)
        self.name = "prompted-nontrivial"

    def use_prompt(self, prompt):
        return check_prompt(self.collection, prompt) if prompt else None

    def t_valid(self, t, sample, prompt):
        # recomputed every step: S_t changes even when the prompt repeats
        return t_valid_indices(self.collection, sample, t, prompt or "")


# -- uniform-bound impossibility -------------------------------------------------


@dataclass
class ParityOutcome:
    generator: str
    order: str
    t0: int
    output: str
    parity: str
    invalid_for: list[str]
    valid_for: list[str]
    recovery: dict[str, int | None]


def a_strings(universe, count: int) -> list[int]:
    out = []
    w = 1
    while len(out) < count:
        x = universe.element_at(w)
        if x.startswith("a"):
            out.append(w)
        w += 1
    return out


def impossibility_round(make_generator, t0: int, swap: bool = False,
                        horizon: int = 50) -> ParityOutcome:
    """Feed ``t0`` distinct a-strings, prompt ``b``, and score the answer
    against both candidate languages.

    Then, for each candidate K, replay the same opening, let the adversary
    continue enumerating K (which soon shows a b-string), keep prompting
    ``b`` and record how many steps after the first b-string the generator
    needs to be valid for the rest of the ``horizon``.
    """
    coll = parity_prefix_pair(swap)
    u = coll.universe
    opening = a_strings(u, t0)
    gen = make_generator()
    gen.reset(coll)
    sample = SampleSet()
    res = None
    for t, w in enumerate(opening, 1):
        sample.add(w)
        res = gen.step(t, sample, "b" if t == t0 else "")
    x = u.element_at(res.output)
    parity = "even" if len(x) % 2 == 0 else "odd"
    names = {1: coll.language(1).name, 2: coll.language(2).name}
    invalid, valid = [], []
    for z in (1, 2):
        ok = Referee(coll, z).valid(res.output, sample, "b")
        (valid if ok else invalid).append(names[z])

    recovery: dict[str, int | None] = {}
    for z in (1, 2):
        trace = run_game(coll, z, StreamAdversary(scripted_enumeration(coll, z, opening)),
                         make_generator(), steps=t0 + horizon,
                         prompts=lambda t, s, t0=t0: "b" if t >= t0 else "")
        first_b = next((r.t for r in trace.records if r.w_elem.startswith("b")), None)
        if first_b is None:
            recovery[names[z]] = None
            continue
        th = trace.t_hat
        recovery[names[z]] = None if th is None else max(0, th - first_b)
    return ParityOutcome(make_generator().name, "swapped" if swap else "standard",
                         t0, x, parity, invalid, valid, recovery)


def prompted_impossibility_harness(t0: int = 5, generators=None, horizon: int = 50):
    """Run :func:`impossibility_round` for each generator and both language
    orders; every deterministic answer is refuted by one of the two K."""
    generators = generators or [RobustPromptGenerator, NontrivialPromptGenerator]
    return [impossibility_round(g, t0, swap, horizon)
            for g in generators for swap in (False, True)]
