"""Countable language collections behind a membership oracle.

A collection is an indexed family ``L_1, L_2, ...`` of infinite languages
over a :class:`~genlimit.universe.Universe`. Algorithms reach it through
:meth:`LanguageCollection.is_member` (and, when the family supports them,
:meth:`~LanguageCollection.subset_query` and the regular queries), each of
which bumps a per-run counter. The referee and the adversaries read the
``Language`` objects directly so their lookups are never counted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .automata import Dfa
from .universe import INTEGERS, Element, Universe, _zigzag_element, _zigzag_index

SUBSET = "subset"
REGULAR = "regular"


class CollectionError(ValueError):
    pass


class UnsupportedCapability(CollectionError):
    pass


# -- languages ---------------------------------------------------------------


class Language:
    name = "L"

    def contains(self, x: Element) -> bool:
        raise NotImplementedError

    def __repr__(self):
        return self.name


@dataclass(frozen=True, eq=False)
class Progression(Language):
    """``{a + b*i : i >= 0}`` (or all integers ``i`` when ``both``) union
    the finite set ``extra``.

    Covers the one-directional progressions P_{a,b}, the bidirectional
    Q_{a,b} and the obscured progressions L(a, b, V).
    """

    a: int
    b: int
    both: bool = False
    extra: frozenset[int] = frozenset()

    def __post_init__(self):
        if self.b < 1:
            raise CollectionError(f"progression step must be positive, got {self.b}")
        object.__setattr__(self, "extra", frozenset(self.extra))

    def in_base(self, x: int) -> bool:
        if (x - self.a) % self.b:
            return False
        return self.both or x >= self.a

    def contains(self, x: Element) -> bool:
        return self.in_base(x) or x in self.extra

    @property
    def name(self) -> str:
        if self.extra:
            inner = ",".join(map(str, sorted(self.extra)))
            kind = "LQ" if self.both else "L"
            return f"{kind}({self.a},{self.b},{{{inner}}})"
        return f"{'Q' if self.both else 'P'}({self.a},{self.b})"

    def normal(self) -> tuple:
        a = self.a % self.b if self.both else self.a
        extra = frozenset(x for x in self.extra if not self.in_base(x))
        return (a, self.b, self.both, extra)

    def same(self, other: "Progression") -> bool:
        return self.normal() == other.normal()

    def __eq__(self, other):
        return isinstance(other, Progression) and self.same(other)

    def __hash__(self):
        return hash(self.normal())


def P(a: int, b: int) -> Progression:
    return Progression(a, b)


def Q(a: int, b: int) -> Progression:
    return Progression(a, b, both=True)


def obscured(a: int, b: int, V: Iterable[int]) -> Progression:
    return Progression(a, b, extra=frozenset(V))


def progression_subset(x: Progression, y: Progression) -> bool:
    """Exact decision of ``x ⊆ y`` for progressions with finite extras."""
    if not all(y.contains(v) for v in x.extra):
        return False
    if x.both and not y.both:
        return False
    # x's base lies in y's residue class only if y.b | x.b and residues agree
    if x.b % y.b or (x.a - y.a) % y.b:
        return False
    if y.both:
        return True
    # the finitely many base terms of x below y.a must be covered by extras
    v = x.a
    while v < y.a:
        if v not in y.extra:
            return False
        v += x.b
    return True


def _crt(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int] | None:
    g = math.gcd(m1, m2)
    if (r2 - r1) % g:
        return None
    lcm = m1 // g * m2
    k = ((r2 - r1) // g * pow(m1 // g, -1, m2 // g)) % (m2 // g) if m2 // g > 1 else 0
    return (r1 + m1 * k) % lcm, lcm


def progression_meet_size(langs: Sequence[Progression]) -> int | None:
    """Size of the intersection of the given languages, None when infinite.

    The intersection of the bases is a residue class bounded at most on one
    side, so it is infinite exactly when the congruences are solvable; when
    they are not, every common element lies in some finite extra set.
    """
    if not langs:
        raise CollectionError("empty intersection is the whole universe")
    r, m = 0, 1
    for lang in langs:
        res = _crt(r, m, lang.a % lang.b, lang.b)
        if res is None:
            break
        r, m = res
    else:
        return None
    candidates = set().union(*(lang.extra for lang in langs))
    return sum(1 for x in candidates if all(lang.contains(x) for lang in langs))


@dataclass(frozen=True, eq=False)
class Automaton(Language):
    dfa: Dfa
    label: str = ""

    def contains(self, x: Element) -> bool:
        return self.dfa.accepts(x)

    @property
    def name(self) -> str:
        return self.label or f"DFA[{self.dfa.n_states}]"


@dataclass(frozen=True, eq=False)
class Table(Language):
    """Membership given on universe indices: ``members`` plus every index
    at or beyond ``tail``."""

    universe: Universe
    members: frozenset[int]
    tail: int
    label: str = ""

    def contains_id(self, uid: int) -> bool:
        return uid >= self.tail or uid in self.members

    def contains(self, x: Element) -> bool:
        return self.contains_id(self.universe.index_of(x))

    @property
    def name(self) -> str:
        return self.label or "Table"


@dataclass(frozen=True, eq=False)
class Predicate(Language):
    fn: Callable[[Element], bool]
    label: str = "pred"

    def contains(self, x: Element) -> bool:
        return bool(self.fn(x))

    @property
    def name(self) -> str:
        return self.label


# -- collections -------------------------------------------------------------


@dataclass
class QueryCounts:
    membership: int = 0
    subset: int = 0
    regular: int = 0

    def as_dict(self) -> dict:
        return {"membership": self.membership, "subset": self.subset,
                "regular": self.regular}


@dataclass(frozen=True)
class LanguagePrefix:
    """``L_i[m]``: members of ``L_i`` among ``u_1 .. u_m``."""

    index: int
    bound: int
    members: tuple[int, ...]


class LanguageCollection:
    """Indexed language family with capability flags and query counters.

    Finite collections are given as a list of languages. Infinite ones
    supply ``unrank`` (index -> language) and optionally ``rank``.
    """

    def __init__(self, universe: Universe, languages: Sequence[Language] | None = None,
                 *, unrank: Callable[[int], Language] | None = None,
                 rank: Callable[[Language], int] | None = None,
                 capabilities: Iterable[str] | None = None, name: str = ""):
        if (languages is None) == (unrank is None):
            raise CollectionError("give exactly one of languages / unrank")
        self.universe = universe
        self.name = name
        self._list = list(languages) if languages is not None else None
        self._unrank = unrank
        self._rank = rank
        self._cache: dict[int, Language] = {}
        if capabilities is None:
            capabilities = _infer_capabilities(universe, self._list or [])
        self.capabilities = frozenset(capabilities)
        self.counts = QueryCounts()

    @property
    def size(self) -> int | None:
        return None if self._list is None else len(self._list)

    @property
    def is_finite(self) -> bool:
        return self._list is not None

    def __len__(self):
        if self._list is None:
            raise TypeError("collection is countably infinite")
        return len(self._list)

    def limit(self, n: int) -> int:
        """Number of languages in the restriction to the first ``n``."""
        return n if self._list is None else min(n, len(self._list))

    def check_index(self, i: int) -> None:
        if i < 1 or (self._list is not None and i > len(self._list)):
            raise CollectionError(f"language index {i} out of range")

    def language(self, i: int) -> Language:
        self.check_index(i)
        if self._list is not None:
            return self._list[i - 1]
        lang = self._cache.get(i)
        if lang is None:
            lang = self._unrank(i)
            if len(self._cache) < 100_000:
                self._cache[i] = lang
        return lang

    def index_of_language(self, lang: Language) -> int:
        """Least index whose language equals ``lang`` (exact when ranked)."""
        if self._list is not None:
            for i, other in enumerate(self._list, 1):
                if other is lang or other == lang:
                    return i
            raise CollectionError(f"{lang!r} is not in the collection")
        if self._rank is None:
            raise CollectionError("collection cannot rank languages")
        return self._rank(lang)

    def reset_counts(self) -> None:
        self.counts = QueryCounts()

    def require(self, capability: str) -> None:
        if capability not in self.capabilities:
            raise UnsupportedCapability(
                f"collection {self.name or '?'} lacks the {capability} capability")

    # -- oracle queries ---------------------------------------------------

    def is_member(self, i: int, w: int) -> bool:
        lang = self.language(i)
        self.counts.membership += 1
        return lang.contains(self.universe.element_at(w))

    def prefix(self, i: int, m: int) -> LanguagePrefix:
        if m < 1:
            raise CollectionError("prefix bound must be >= 1")
        members = tuple(w for w in range(1, m + 1) if self.is_member(i, w))
        return LanguagePrefix(i, m, members)

    def subset_query(self, i: int, j: int) -> bool:
        self.require(SUBSET)
        x, y = self.language(i), self.language(j)
        self.counts.subset += 1
        if isinstance(x, Progression) and isinstance(y, Progression):
            return progression_subset(x, y)
        if isinstance(x, Automaton) and isinstance(y, Automaton):
            return (x.dfa - y.dfa).is_empty()
        raise UnsupportedCapability(f"no subset decision for {x!r} vs {y!r}")

    def _dfa(self, i: int) -> Dfa:
        self.require(REGULAR)
        lang = self.language(i)
        if not isinstance(lang, Automaton):
            raise UnsupportedCapability(f"{lang!r} is not automaton-backed")
        return lang.dfa

    def regular_subset_query(self, i: int, r: Dfa) -> bool:
        d = self._dfa(i)
        self.counts.regular += 1
        return (d - r).is_empty()

    def regular_nonempty_intersection(self, i: int, r: Dfa) -> int | None:
        d = self._dfa(i)
        self.counts.regular += 1
        word = (d & r).least_accepted()
        return None if word is None else self.universe.index_of(word)

    def intersection_size(self, indices: Iterable[int]) -> int | None:
        """``|L_i1 ∩ ... ∩ L_ik|``, None when infinite (exact; needs SUBSET)."""
        self.require(SUBSET)
        langs = [self.language(i) for i in indices]
        if all(isinstance(x, Progression) for x in langs):
            return progression_meet_size(langs)
        if all(isinstance(x, Automaton) for x in langs):
            d = langs[0].dfa
            for x in langs[1:]:
                d = d & x.dfa
            return d.count()
        raise UnsupportedCapability("mixed language kinds")

    def __repr__(self):
        size = "∞" if self.size is None else self.size
        return f"<LanguageCollection {self.name or '?'} size={size}>"


def prefix_subset(p: LanguagePrefix, q: LanguagePrefix) -> bool:
    if p.bound != q.bound:
        raise CollectionError(f"prefix bounds differ: {p.bound} vs {q.bound}")
    return set(p.members) <= set(q.members)


def _infer_capabilities(universe: Universe, langs: Sequence[Language]) -> set[str]:
    if not langs:
        return set()
    if all(isinstance(x, Progression) for x in langs) and not universe.is_strings:
        return {SUBSET}
    if all(isinstance(x, Automaton) for x in langs) and universe.is_strings:
        if all(x.dfa.alphabet == universe.alphabet for x in langs):
            return {SUBSET, REGULAR}
    return set()


# -- built-in families -------------------------------------------------------


def _block_of(i: int, cumulative: Callable[[int], int], lo: int) -> int:
    """Largest ``w >= lo`` with ``cumulative(w) < i`` (cumulative increasing)."""
    hi = lo
    while cumulative(hi + 1) < i:
        hi = hi * 2 + 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if cumulative(mid) < i:
            lo = mid
        else:
            hi = mid - 1
    return lo


def _arith_unrank(i: int) -> Progression:
    # weight w = zigzag_id(a) + b >= 2; a block holds 2(w-1) languages,
    # ordered by b ascending, P before Q
    w = _block_of(i, lambda v: (v - 1) * (v - 2), 2)
    pos = i - (w - 1) * (w - 2) - 1
    b, kind = divmod(pos, 2)
    b += 1
    return Progression(_zigzag_element(w - b), b, both=bool(kind))


def _arith_rank(lang: Language) -> int:
    if not isinstance(lang, Progression) or lang.extra:
        raise CollectionError(f"{lang!r} is not a plain progression")
    w = _zigzag_index(lang.a) + lang.b
    return (w - 1) * (w - 2) + 2 * (lang.b - 1) + int(lang.both) + 1


def arith_progressions() -> LanguageCollection:
    """All P_{a,b} and Q_{a,b}, dovetailed by ``zigzag_id(a) + b``."""
    return LanguageCollection(INTEGERS, unrank=_arith_unrank, rank=_arith_rank,
                              capabilities={SUBSET}, name="arith_progressions")


def vset_code(V: Iterable[int]) -> int:
    return sum(1 << (_zigzag_index(v) - 1) for v in set(V))


def vset_decode(code: int) -> frozenset[int]:
    out = []
    k = 1
    while code:
        if code & 1:
            out.append(_zigzag_element(k))
        code >>= 1
        k += 1
    return frozenset(out)


def _tri_cumulative(w: int) -> int:
    # triples (a_id >= 1, b >= 1, vcode >= 0) with weight <= w - 1
    return math.comb(w, 3)


def _obscured_unrank(i: int) -> Progression:
    w = _block_of(i, _tri_cumulative, 2)
    pos = i - _tri_cumulative(w) - 1

    def before(z):  # entries in the block with vcode < z
        return z * (w - 1) - z * (z - 1) // 2

    lo, hi = 0, w - 2
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if before(mid) <= pos:
            lo = mid
        else:
            hi = mid - 1
    z = lo
    b = pos - before(z) + 1
    a_id = w - z - b
    return Progression(_zigzag_element(a_id), b, extra=vset_decode(z))


def _obscured_rank(lang: Language) -> int:
    if not isinstance(lang, Progression) or lang.both:
        raise CollectionError(f"{lang!r} is not an obscured progression")
    z = vset_code(lang.extra)
    w = _zigzag_index(lang.a) + lang.b + z
    return _tri_cumulative(w) + z * (w - 1) - z * (z - 1) // 2 + lang.b


def obscured_progressions() -> LanguageCollection:
    """All L(a, b, V) = P_{a,b} ∪ V for finite V.

    V is coded as a bitmask over zigzag indices; triples (a, b, code) are
    listed by weight ``zigzag_id(a) + b + code``, then by code, then by b.
    """
    return LanguageCollection(INTEGERS, unrank=_obscured_unrank, rank=_obscured_rank,
                              capabilities={SUBSET}, name="obscured_progressions")


def progression_list(langs: Sequence[Progression], name: str = "") -> LanguageCollection:
    return LanguageCollection(INTEGERS, list(langs), name=name)


def gold_ladder(depth: int = 1000) -> LanguageCollection:
    """P_{0,1}, P_{-1,1}, ..., P_{-(depth-1),1} followed by every progression.

    The staircase in front keeps an upward-scanning identifier moving one
    rung per stage; the dovetailed tail still lists Q_{0,1}.
    """
    head = [P(-k, 1) for k in range(depth)]

    def unrank(i):
        return head[i - 1] if i <= depth else _arith_unrank(i - depth)

    def rank(lang):
        for i, x in enumerate(head, 1):
            if x == lang:
                return i
        return depth + _arith_rank(lang)

    return LanguageCollection(INTEGERS, unrank=unrank, rank=rank,
                              capabilities={SUBSET}, name=f"gold_ladder({depth})")


def dfa_collection(dfas: Sequence[Dfa | Automaton], universe: Universe | None = None,
                   name: str = "") -> LanguageCollection:
    langs = [d if isinstance(d, Automaton) else Automaton(d) for d in dfas]
    if not langs:
        raise CollectionError("need at least one automaton")
    alphabet = langs[0].dfa.alphabet
    universe = universe or Universe(alphabet)
    for lang in langs:
        if lang.dfa.alphabet != universe.alphabet:
            raise CollectionError(f"{lang!r}: alphabet differs from the universe")
        if not lang.dfa.is_infinite():
            raise CollectionError(f"{lang!r} accepts a finite language")
    return LanguageCollection(universe, langs, name=name or "dfa_collection")


# small library of automata over a two-letter alphabet, used by fixtures

def _dfa(table, accepting, alphabet="ab", start=0) -> Dfa:
    return Dfa.build(tuple(alphabet), table, start, accepting)


def dfa_all(alphabet="ab") -> Dfa:
    return Dfa.universal(tuple(alphabet))


def dfa_even_length(alphabet="ab") -> Dfa:
    k = len(alphabet)
    return _dfa([(1,) * k, (0,) * k], {0}, alphabet)


def dfa_star(word: str, alphabet="ab") -> Dfa:
    """``word*`` for a non-empty word."""
    k = len(alphabet)
    n = len(word)
    dead = n
    rows = []
    for i, ch in enumerate(word):
        nxt = (i + 1) % n
        rows.append(tuple(nxt if s == ch else dead for s in alphabet))
    rows.append((dead,) * k)
    return _dfa(rows, {0}, alphabet)


def dfa_a_star_b_star(alphabet="ab") -> Dfa:
    # 0: in a*, 1: in b+, 2: dead
    return _dfa([{"a": 0, "b": 1}, {"a": 2, "b": 1}, {"a": 2, "b": 2}], {0, 1}, alphabet)


def dfa_prefix(p: str, alphabet="ab") -> Dfa:
    return Dfa.with_prefix(tuple(alphabet), p)


def dfa_parity_branch(odd: bool) -> Dfa:
    """Strings starting with ``a``, plus ``b``-strings of odd (or even) length."""
    # 0 start, 1 a-branch (accept all), 2 b-branch odd length, 3 b-branch even
    acc = {1, 2} if odd else {1, 3}
    return _dfa([{"a": 1, "b": 2}, {"a": 1, "b": 1}, {"a": 3, "b": 3},
                 {"a": 2, "b": 2}], acc)


def parity_prefix_pair(swap: bool = False) -> LanguageCollection:
    """The two-language family where ``b``-strings split by length parity.

    L_1 has odd-length ``b``-strings, L_2 even-length; ``swap`` reverses
    the order.
    """
    langs = [Automaton(dfa_parity_branch(True), "a·Σ* ∪ b-odd"),
             Automaton(dfa_parity_branch(False), "a·Σ* ∪ b-even")]
    if swap:
        langs.reverse()
    return dfa_collection(langs, name="parity_prefix_pair" + ("_swapped" if swap else ""))


def evens_vs_all() -> LanguageCollection:
    """L_1 = every string, L_2 = strings of even length."""
    return dfa_collection([Automaton(dfa_all(), "Σ*"),
                           Automaton(dfa_even_length(), "even length")],
                          name="evens_vs_all")


def two_parity_sets() -> LanguageCollection:
    """{evens ∪ {1,3,5}, odds ∪ {2,4,6}} over the positive integers."""
    return progression_list([obscured(2, 2, {1, 3, 5}), obscured(1, 2, {2, 4, 6})],
                            name="two_parity_sets")


def walkthrough() -> LanguageCollection:
    """Five languages reproducing the worked example of the limit algorithm.

    Rows u_1..u_15 are spelled out; every index from 16 on belongs to all
    five languages. Enumerating L_3 canonically gives u_2, u_5, u_8, u_10,
    u_12, and the algorithm then outputs u_1 (fallback), u_7, u_10, u_12
    and u_15 at steps 1-5.
    """
    rows = {
        1: set(range(1, 16)) - {2},
        2: {2, 5, 7, 8, 10, 12, 15},
        3: {2, 5, 8, 10, 12, 15},
        4: {2, 5, 7, 8, 10},
        5: {2, 5, 8, 10, 12, 14},
    }
    langs = [Table(INTEGERS, frozenset(rows[i]), 16, f"L{i}") for i in range(1, 6)]
    return LanguageCollection(INTEGERS, langs, name="walkthrough")
