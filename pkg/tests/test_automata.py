import itertools

import pytest
from hypothesis import given, settings, strategies as st

from genlimit import collection as coll
from genlimit.automata import AutomatonError, Dfa


def words(alphabet, n):
    for k in range(n + 1):
        for tup in itertools.product(alphabet, repeat=k):
            yield "".join(tup)


def raw_accepts(d, w):
    q = d.start
    for ch in w:
        q = d.transitions[q][d.alphabet.index(ch)]
    return q in d.accepting


@st.composite
def dfas(draw, alphabet=("a", "b")):
    n = draw(st.integers(1, 4))
    rows = tuple(tuple(draw(st.integers(0, n - 1)) for _ in alphabet) for _ in range(n))
    acc = frozenset(q for q in range(n) if draw(st.booleans()))
    return Dfa(alphabet, rows, 0, acc)


@given(dfas())
def test_text_round_trip(d):
    assert Dfa.from_text(d.to_text()) == d


@settings(max_examples=60)
@given(dfas(), dfas())
def test_products_match_brute_force(x, y):
    for w in words("ab", 7):
        a, b = raw_accepts(x, w), raw_accepts(y, w)
        assert (x & y).accepts(w) == (a and b)
        assert (x | y).accepts(w) == (a or b)
        assert (x - y).accepts(w) == (a and not b)
        assert x.complement().accepts(w) == (not a)


@settings(max_examples=100)
@given(dfas())
def test_emptiness_count_and_least_word(d):
    accepted = [w for w in words("ab", 10) if raw_accepts(d, w)]
    assert d.is_empty() == (not accepted)
    n = d.count()
    if n is not None:
        # finite: every accepted word is shorter than the state count
        assert n == len([w for w in accepted if len(w) < d.n_states])
    else:
        assert d.is_infinite()
        assert any(len(w) >= d.n_states for w in accepted)
    least = d.least_accepted()
    assert least == (min(accepted, key=lambda w: (len(w), w)) if accepted else None)


def test_finite_and_prefix_constructors():
    f = Dfa.finite(("a", "b"), ["", "ab", "bba"])
    assert {w for w in words("ab", 5) if f.accepts(w)} == {"", "ab", "bba"}
    p = Dfa.with_prefix(("a", "b"), "ab")
    assert p.accepts("ab") and p.accepts("abba") and not p.accepts("a") and not p.accepts("ba")


def test_text_format_comments_and_errors():
    text = "# a*\nalphabet a b\nstates 2\nstart 0\naccept 0\n0 a 0\n0 b 1\n1 a 1\n1 b 1\n"
    d = Dfa.from_text(text)
    assert d.accepts("aaa") and not d.accepts("ab")
    with pytest.raises(AutomatonError):
        Dfa.from_text("alphabet a b\nstates 1\nstart 0\naccept 0\n0 a 0\n")


def test_star_library():
    abstar = coll.dfa_star("ab")
    assert [w for w in words("ab", 4) if abstar.accepts(w)] == ["", "ab", "abab"]
    assert not coll.dfa_a_star_b_star().accepts("ba")
