import itertools

import pytest

from genlimit import collection as coll
from genlimit.collection import P, Q, obscured
from genlimit.core import SampleSet
from genlimit.game import (CapabilityMismatch, GameError, GoldAdversary, Referee,
                           RepeatingAdversary, StreamAdversary, canonical_enumeration,
                           delayed_cover_enumeration, independent_recheck, run_game,
                           scripted_enumeration)
from genlimit.generators import (BaselineIdentifier, ClosureGenerator, ConstantIdentifier,
                                 LimitGenerator, SubsetQueryGenerator)
from genlimit.universe import INTEGERS

ids = INTEGERS.index_of
el = INTEGERS.element_at


def first(stream, n):
    return [el(w) for w in itertools.islice(stream, n)]


def test_canonical_enumerations():
    c = coll.progression_list([P(0, 2), Q(0, 1), obscured(0, 7, {1})])
    assert first(canonical_enumeration(c, 1), 5) == [0, 2, 4, 6, 8]
    assert list(itertools.islice(canonical_enumeration(c, 2), 6)) == [1, 2, 3, 4, 5, 6]
    got = first(canonical_enumeration(c, 3), 5)
    assert got == sorted([0, 1, 7, 14, 21], key=ids)


def test_delayed_cover_enumeration():
    c = coll.progression_list([P(3, 5), obscured(0, 7, {100})])
    assert first(delayed_cover_enumeration(c, 1, [ids(3)], 5), 6) == [8, 13, 18, 23, 3, 28]
    stream = first(delayed_cover_enumeration(c, 2, [ids(100)], 10), 40)
    assert stream.index(100) + 1 >= 10
    assert first(delayed_cover_enumeration(c, 1, [], 5), 20) == first(canonical_enumeration(c, 1), 20)
    with pytest.raises(GameError):
        list(itertools.islice(delayed_cover_enumeration(c, 1, [ids(4)], 5), 1))


def test_scripted_enumeration_skips_repeats():
    c = coll.progression_list([P(0, 1)])
    assert first(scripted_enumeration(c, 1, [ids(5), ids(2)]), 5) == [5, 2, 0, 1, 3]


def test_repeating_adversary_is_seeded():
    c = coll.progression_list([P(0, 1)])
    def run(seed):
        adv = RepeatingAdversary(StreamAdversary(canonical_enumeration(c, 1)), 0.5, seed)
        return [adv.next() for _ in range(40)]
    assert run(3) == run(3)
    assert len(set(run(3))) < 40


def gold(steps=60, generator=None, cap=1000):
    c = coll.gold_ladder(50)
    z = c.index_of_language(Q(0, 1))
    adv = GoldAdversary(c, stage_cap=cap)
    trace = run_game(c, z, adv, generator or BaselineIdentifier(), steps)
    return c, adv, trace


def test_gold_stages_cover_interval():
    c, adv, trace = gold()
    done = adv.stages[:3]
    cut = sum(s.steps for s in done)
    shown = sorted(el(w) for w in trace.stream()[:cut])
    assert shown == list(range(-2, done[-1].high + 1))


def test_gold_guess_changes_every_stage():
    c, adv, trace = gold()
    guesses = [s.guess for s in adv.stages[1:]]
    assert len(set(guesses)) == len(guesses)
    assert all(c.language(g) == P(-s.stage, 1) for g, s in zip(guesses, adv.stages[1:]))


def test_gold_stage_cap_stops_stream():
    _, adv, trace = gold(steps=100, generator=ConstantIdentifier(1), cap=10)
    assert adv.capped == 1
    assert trace.aborted and len(trace.records) < 100


def test_referee_rules():
    c = coll.progression_list([P(0, 2)])
    ref = Referee(c, 1)
    s = SampleSet([ids(0)])
    assert ref.valid(ids(2), s)
    assert not ref.valid(ids(0), s)
    assert not ref.valid(ids(3), s)


@pytest.mark.parametrize("gen", [LimitGenerator, SubsetQueryGenerator, BaselineIdentifier])
def test_referee_agrees_with_recheck(gen):
    ap = coll.arith_progressions()
    z = ap.index_of_language(P(3, 5))
    trace = run_game(ap, z, StreamAdversary(canonical_enumeration(ap, z)), gen(), 120)
    assert independent_recheck(ap, trace) == []


def test_runs_are_deterministic():
    ap = coll.arith_progressions()
    z = ap.index_of_language(P(0, 3))
    def run():
        adv = RepeatingAdversary(StreamAdversary(canonical_enumeration(ap, z)), 0.3, 9)
        return run_game(ap, z, adv, LimitGenerator(), 80).records
    assert run() == run()


def test_game_rejects_bad_setup():
    ap = coll.arith_progressions()
    with pytest.raises(CapabilityMismatch):
        run_game(ap, 1, StreamAdversary(canonical_enumeration(ap, 1)), ClosureGenerator(), 5)
    with pytest.raises(GameError):
        run_game(ap, 1, StreamAdversary(canonical_enumeration(ap, 1)), LimitGenerator(), 0)
    with pytest.raises(GameError):
        run_game(ap, 1, StreamAdversary(iter([ids(-50)])), LimitGenerator(), 1)
