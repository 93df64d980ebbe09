import pytest
from hypothesis import given, strategies as st

from genlimit.universe import INTEGERS, Universe, UniverseError, strings


def test_integer_order_starts_zigzag():
    assert [INTEGERS.element_at(i) for i in range(1, 8)] == [0, 1, -1, 2, -2, 3, -3]
    assert INTEGERS.element_at(1) == 0
    assert INTEGERS.element_at(5) == -2
    assert INTEGERS.index_of(2) == 4


def test_shortlex_examples():
    ab = strings("ab")
    assert [ab.element_at(i) for i in range(1, 8)] == ["", "a", "b", "aa", "ab", "ba", "bb"]
    assert ab.index_of("b") == 3
    assert ab.index_of("ab") == 5


@pytest.mark.parametrize("u", [INTEGERS, strings("ab"), strings("abc"), strings("a")])
def test_round_trip_first_ten_thousand(u):
    seen = set()
    for i in range(1, 10_001):
        x = u.element_at(i)
        assert u.index_of(x) == i
        seen.add(x)
    assert len(seen) == 10_000


def test_shortlex_is_length_then_lexicographic():
    ab = strings("ab")
    xs = [ab.element_at(i) for i in range(1, 2000)]
    assert xs == sorted(xs, key=lambda s: (len(s), s))


@given(st.integers(min_value=-10**30, max_value=10**30))
def test_integer_index_round_trip(x):
    assert INTEGERS.element_at(INTEGERS.index_of(x)) == x


@given(st.text(alphabet="abc", max_size=40))
def test_string_index_round_trip(s):
    u = strings("abc")
    assert u.element_at(u.index_of(s)) == s


def test_rejects_bad_input():
    ab = strings("ab")
    with pytest.raises(UniverseError):
        ab.index_of("abc")
    with pytest.raises(UniverseError):
        ab.element_at(0)
    with pytest.raises(UniverseError):
        INTEGERS.index_of("3")
    with pytest.raises(UniverseError):
        Universe(("a", "a"))


def test_format_and_parse():
    ab = strings("ab")
    assert ab.format("") == "ε"
    assert ab.parse("ε") == ""
    assert INTEGERS.parse("-4") == -4
