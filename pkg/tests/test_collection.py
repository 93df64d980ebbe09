import itertools

import pytest
from hypothesis import given, settings, strategies as st

from genlimit import collection as coll
from genlimit.automata import Dfa
from genlimit.collection import (CollectionError, LanguagePrefix, P, Q, UnsupportedCapability,
                                 obscured, prefix_subset, progression_subset)
from genlimit.universe import INTEGERS

ids = INTEGERS.index_of


def test_membership_examples():
    ap = coll.arith_progressions()
    i = ap.index_of_language(P(3, 5))
    assert ap.is_member(i, ids(13))
    assert not ap.is_member(i, ids(4))
    ob = coll.obscured_progressions()
    assert ob.is_member(ob.index_of_language(obscured(0, 7, {1, 2, 3})), ids(2))


def test_prefix_examples():
    c = coll.progression_list([P(0, 2), Q(0, 1), P(5, 1)])
    assert c.prefix(1, 5).members == (1, 4)
    assert c.prefix(2, 3).members == (1, 2, 3)
    assert c.prefix(3, 4).members == ()


def test_prefix_subset():
    def pre(*m):
        return LanguagePrefix(1, 9, m)
    assert prefix_subset(pre(1, 4), pre(1, 2, 4))
    assert not prefix_subset(pre(1, 4), pre(4))
    assert prefix_subset(pre(), pre(3))


def test_dovetail_ranks_round_trip():
    ap = coll.arith_progressions()
    assert ap.language(2) == Q(0, 1)
    assert ap.index_of_language(P(3, 5)) == 99
    for i in range(1, 400):
        assert ap.index_of_language(ap.language(i)) == i
    ob = coll.obscured_progressions()
    for i in range(1, 400):
        assert ob.index_of_language(ob.language(i)) == i


def test_progression_subset_examples():
    assert progression_subset(P(0, 6), P(0, 2))
    assert not progression_subset(P(0, 2), P(0, 6))
    assert progression_subset(P(3, 5), P(3, 5))


progs = st.builds(
    lambda a, b, both, v: coll.Progression(a, b, both=both, extra=frozenset(v)),
    st.integers(-8, 8), st.integers(1, 6), st.booleans(),
    st.sets(st.integers(-8, 8), max_size=3))


@settings(max_examples=300)
@given(progs, progs)
def test_progression_subset_matches_brute_force(x, y):
    brute = all(y.contains(INTEGERS.element_at(w)) for w in range(1, 501)
                if x.contains(INTEGERS.element_at(w)))
    assert progression_subset(x, y) == brute


@settings(max_examples=200)
@given(st.lists(progs, min_size=1, max_size=3))
def test_intersection_size_matches_brute_force(langs):
    c = coll.progression_list(langs)
    size = c.intersection_size(range(1, len(langs) + 1))
    members = [x for x in range(-300, 301) if all(l.contains(x) for l in langs)]
    if size is None:
        # periods are at most lcm(1..6) = 60, so a far window must hit
        assert any(all(l.contains(x) for l in langs) for x in range(2000, 2061))
    else:
        assert size == len(members)


def automata(*dfas):
    return coll.dfa_collection(list(dfas))


def test_regular_subset_examples():
    c = automata(coll.dfa_star("ab"), coll.dfa_star("a"))
    assert c.regular_subset_query(1, coll.dfa_even_length())
    assert not c.regular_subset_query(2, coll.dfa_prefix("a"))
    assert c.regular_subset_query(1, coll.dfa_star("ab"))


def test_regular_nonempty_examples():
    c = automata(coll.dfa_star("a"), coll.dfa_star("b"), coll.dfa_all())
    u = c.universe
    r = Dfa.with_prefix(("a", "b"), "a") - Dfa.finite(("a", "b"), ["a"])
    assert c.regular_nonempty_intersection(1, r) == u.index_of("aa")
    assert c.regular_nonempty_intersection(2, Dfa.with_prefix(("a", "b"), "a")) is None
    assert c.regular_nonempty_intersection(3, Dfa.with_prefix(("a", "b"), "ab")) == u.index_of("ab")


def test_capabilities_are_enforced():
    ap = coll.arith_progressions()
    with pytest.raises(UnsupportedCapability):
        ap.regular_subset_query(1, coll.dfa_all())
    table = coll.walkthrough()
    with pytest.raises(CollectionError):
        table.subset_query(1, 2)
    with pytest.raises(CollectionError):
        ap.language(0)


def test_finite_automaton_languages_rejected():
    with pytest.raises(CollectionError):
        coll.dfa_collection([Dfa.finite(("a", "b"), ["ab"])])


def test_query_counters():
    ap = coll.arith_progressions()
    ap.reset_counts()
    ap.prefix(5, 10)
    ap.subset_query(1, 2)
    assert (ap.counts.membership, ap.counts.subset) == (10, 1)


@pytest.mark.parametrize("make", [coll.arith_progressions, coll.obscured_progressions])
def test_languages_are_infinite(make):
    c = make()
    for i in (1, 7, 50):
        lang = c.language(i)
        for M in (10, 100, 1000):
            assert any(lang.contains(INTEGERS.element_at(w)) for w in range(M + 1, 10 * M + 1))
