"""Generation algorithms and the baseline identifier.

* :class:`LimitGenerator` -- membership queries only, driven by
  (t, m)-critical languages over growing prefixes ``L_i[m]``.
* :class:`SubsetQueryGenerator` -- the exact-criticality function, which
  needs ``L_i ⊆ L_j`` queries.
* :class:`ClosureGenerator` / :func:`closure_stream` -- closure of the
  sample in a finite collection; :func:`finite_bound` gives the uniform
  sample bound.
* :class:`HeuristicGenerator` -- "two largest elements" rule for obscured
  progressions.
* :class:`BaselineIdentifier` -- hypothesis enumeration, the failing
  strategy for identification.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .collection import SUBSET, CollectionError, LanguageCollection, obscured
from .core import (CriticalRecord, Generator, SampleSet, StepResult, as_ids,
                   least_outside)

FINITE = "finite"
INTEGER_UNIVERSE = "integers"
STRING_UNIVERSE = "strings"


class AlgorithmError(RuntimeError):
    """An internal guarantee of an algorithm failed to hold."""


class IterationCeilingExceeded(AlgorithmError):
    pass


class InsufficientSample(ValueError):
    pass


# -- consistency and criticality ---------------------------------------------


def consistent_indices(collection: LanguageCollection, sample, n: int) -> list[int]:
    if n < 1:
        raise CollectionError("index bound must be >= 1")
    ids = sorted(as_ids(sample))
    return [i for i in range(1, collection.limit(n) + 1)
            if all(collection.is_member(i, w) for w in ids)]


def critical_indices_exact(collection: LanguageCollection, sample, n: int) -> CriticalRecord:
    """Consistent ``L_k`` (k <= n) contained in every consistent ``L_i``, i < k."""
    collection.require(SUBSET)
    cons = consistent_indices(collection, sample, n)
    crit = [k for k in cons
            if all(collection.subset_query(k, i) for i in cons if i < k)]
    return CriticalRecord(t=n, m=None, consistent=cons, critical=crit)


def critical_indices_finite(collection: LanguageCollection, sample, t: int, m: int) -> CriticalRecord:
    """(t, m)-critical indices among the first ``t`` languages, from scratch.

    Uses :meth:`LanguageCollection.prefix` and set comparisons only; the
    incremental bitmask search in :class:`LimitGenerator` is checked
    against this.
    """
    cons = consistent_indices(collection, sample, t)
    prefixes = {i: set(collection.prefix(i, m).members) for i in cons}
    crit = [k for k in cons if all(prefixes[k] <= prefixes[i] for i in cons if i < k)]
    return CriticalRecord(t=t, m=m, consistent=cons, critical=crit)


def f_C(collection: LanguageCollection, sample, t: int) -> int:
    """Least new element of the highest critical language among the first t.

    With no consistent language the least index outside the sample is
    returned.
    """
    ids = as_ids(sample)
    rec = critical_indices_exact(collection, ids, t)
    if not rec.critical:
        return least_outside(ids)
    n = rec.top
    u = 1
    while u in ids or not collection.is_member(n, u):
        u += 1
    return u


# -- membership-only limit algorithm ------------------------------------------


@dataclass
class GeneratorState:
    """Per-run state of the limit algorithm.

    ``pref[i]`` holds ``L_i[known[i]]`` as a bitmask (bit h-1 <-> u_h).
    """

    m_prev: int = 0
    m0: int = 0
    pref: dict[int, int] = field(default_factory=dict)
    known: dict[int, int] = field(default_factory=dict)
    elements: list = field(default_factory=list)
    prompt_masks: dict[str, tuple[int, int]] = field(default_factory=dict)
    outputs: set[int] = field(default_factory=set)
    out_mask: int = 0

    def element(self, universe, w: int):
        els = self.elements
        while len(els) < w:
            els.append(universe.element_at(len(els) + 1))
        return els[w - 1]

    def extend(self, collection: LanguageCollection, i: int, m: int) -> int:
        k = self.known.get(i, 0)
        if k < m:
            lang = collection.language(i)
            self.element(collection.universe, m)
            els = self.elements
            chunk = 0
            for w in range(k + 1, m + 1):
                if lang.contains(els[w - 1]):
                    chunk |= 1 << (w - 1 - k)
            collection.counts.membership += m - k
            self.pref[i] = self.pref.get(i, 0) | (chunk << k)
            self.known[i] = m
        return self.pref[i]

    def prompt_mask(self, universe, prompt: str | None, m: int) -> int:
        if not prompt:
            return (1 << m) - 1
        mask, upto = self.prompt_masks.get(prompt, (0, 0))
        if upto < m:
            self.element(universe, m)
            for w in range(upto + 1, m + 1):
                if self.elements[w - 1].startswith(prompt):
                    mask |= 1 << (w - 1)
            self.prompt_masks[prompt] = (mask, m)
        return mask & ((1 << m) - 1)

    def record_output(self, u: int) -> None:
        if u not in self.outputs:
            self.outputs.add(u)
            self.out_mask |= 1 << (u - 1)


def _critical(state: GeneratorState, consistent: list[int], m: int) -> list[int]:
    # L_k is (t,m)-critical iff L_k[m] lies inside the running intersection
    # of all earlier consistent prefixes
    full = (1 << m) - 1
    running = None
    out = []
    for i in consistent:
        p = state.pref[i] & full
        if running is None or not p & ~running:
            out.append(i)
        running = p if running is None else running & p
    return out


def _lowest_bit(x: int) -> int:
    return (x & -x).bit_length()


def limit_step(collection: LanguageCollection, sample: SampleSet, t: int,
               state: GeneratorState, *, prompt: str | None = None,
               valid: set[int] | None = None, norepeat: bool = False,
               ceiling: int = 100_000, fallback_ceiling: int = 100_000,
               keep_records: bool = False,
               on_record: Callable[[CriticalRecord], None] | None = None) -> StepResult:
    """One step of the limit algorithm.

    ``prompt`` restricts outputs to strings with that prefix. ``valid``,
    when given, is the set of t-valid indices and the search follows the
    highest index that is both (t, m)-critical and t-valid.
    """
    universe = collection.universe
    m0 = max(state.m_prev, sample.latest)
    state.m0 = m0
    langs = range(1, collection.limit(t) + 1)
    for i in langs:
        state.extend(collection, i, m0)
    smask = sample.mask
    consistent = [i for i in langs if not smask & ~state.pref[i]]
    excl = smask | (state.out_mask if norepeat else 0)
    records: list[CriticalRecord] = []

    def note(m, crit):
        rec = CriticalRecord(t=t, m=m, consistent=consistent, critical=crit)
        if keep_records:
            records.append(rec)
        if on_record is not None:
            on_record(rec)

    def choose(crit):
        if valid is None:
            return crit[-1] if crit else None
        good = [i for i in crit if i in valid]
        return good[-1] if good else None

    def fallback(m, iterations=0, disruptive=0):
        state.m_prev = m
        u = None
        if prompt:
            u = next((w for w in range(1, fallback_ceiling + 1)
                      if not excl >> (w - 1) & 1
                      and state.element(universe, w).startswith(prompt)), None)
        if u is None:
            u = least_outside(sample.distinct | (state.outputs if norepeat else set()))
        state.record_output(u)
        return StepResult(output=u, m=m, fallback=True, iterations=iterations,
                          disruptive=disruptive, records=records)

    crit = _critical(state, consistent, m0) if consistent else []
    note(m0, crit)
    top = choose(crit)
    if top is None:
        return fallback(m0)

    m = m0
    iterations = disruptive = 0
    while True:
        m += 1
        iterations += 1
        if iterations > ceiling:
            raise IterationCeilingExceeded(
                f"step {t}: no output after {ceiling} iterations (m={m})")
        for i in langs:
            state.extend(collection, i, m)
        crit = _critical(state, consistent, m)
        note(m, crit)
        n = choose(crit)
        if n is None:
            return fallback(m, iterations, disruptive)
        if n != top:
            disruptive += 1
            if n > top or disruptive > t - 1:
                raise AlgorithmError(
                    f"step {t}: disruptive iteration {disruptive} moved {top} -> {n}")
            top = n
        cand = state.pref[n] & ((1 << m) - 1) & ~excl
        cand &= state.prompt_mask(universe, prompt, m)
        if cand:
            u = _lowest_bit(cand)
            state.m_prev = m
            state.record_output(u)
            return StepResult(output=u, n=n, m=m, iterations=iterations,
                              disruptive=disruptive, records=records)


def limit_generate_step(collection, sample, t, state=None, **kw):
    """Functional form of one limit-algorithm step; returns (output, state)."""
    state = state or GeneratorState()
    res = limit_step(collection, sample, t, state, **kw)
    return res.output, state


class LimitGenerator(Generator):
    name = "limit"

    def __init__(self, norepeat: bool = False, ceiling: int = 100_000,
                 keep_records: bool = False, on_record=None):
        self.norepeat = norepeat
        self.ceiling = ceiling
        self.keep_records = keep_records
        self.on_record = on_record
        if norepeat:
            self.name = "limit-norepeat"

    def reset(self, collection):
        super().reset(collection)
        self.state = GeneratorState()

    def t_valid(self, t, sample, prompt):
        return None

    def use_prompt(self, prompt):
        return None

    def step(self, t, sample, prompt=None):
        res = limit_step(self.collection, sample, t, self.state,
                         prompt=self.use_prompt(prompt),
                         valid=self.t_valid(t, sample, prompt),
                         norepeat=self.norepeat, ceiling=self.ceiling,
                         keep_records=self.keep_records, on_record=self.on_record)
        return self._emit(res)


# -- exact criticality with subset queries ------------------------------------


class SubsetQueryGenerator(Generator):
    """Outputs the least new element of the highest critical language.

    Consistency is maintained incrementally and subset answers are
    memoised, so each distinct pair is queried once per run.
    """

    name = "f_c"
    requires = frozenset({SUBSET})

    def __init__(self, norepeat: bool = False):
        self.norepeat = norepeat

    def reset(self, collection):
        super().reset(collection)
        self.consistent: dict[int, bool] = {}
        self.seen = 0
        self.memo: dict[tuple[int, int], bool] = {}
        self.cursor: dict[int, int] = {}

    def _subset(self, i, j):
        key = (i, j)
        if key not in self.memo:
            self.memo[key] = self.collection.subset_query(i, j)
        return self.memo[key]

    def step(self, t, sample, prompt=None):
        c = self.collection
        new = sample.arrivals[self.seen:]
        self.seen = len(sample.arrivals)
        for i, ok in self.consistent.items():
            if ok:
                self.consistent[i] = all(c.is_member(i, w) for w in new)
        for i in range(len(self.consistent) + 1, c.limit(t) + 1):
            self.consistent[i] = all(c.is_member(i, w) for w in sorted(sample.distinct))
        cons = [i for i, ok in sorted(self.consistent.items()) if ok]
        crit = [k for k in cons if all(self._subset(k, i) for i in cons if i < k)]
        excluded = sample.distinct | (self.outputs if self.norepeat else set())
        if not crit:
            return self._emit(StepResult(output=least_outside(excluded), fallback=True))
        n = crit[-1]
        u = self.cursor.get(n, 1)
        while u in excluded or not c.is_member(n, u):
            u += 1
        self.cursor[n] = u
        return self._emit(StepResult(output=u, n=n))


# -- closure -----------------------------------------------------------------


def closure_stream(collection: LanguageCollection, sample, ceiling: int = 10**6,
                   indices: Iterable[int] | None = None) -> Iterator[int]:
    """Ascending indices of ``⟨S⟩ - S``, stopping at ``ceiling``.

    ``indices`` selects the family to close over (default: the whole,
    finite, collection).
    """
    ids = as_ids(sample)
    if indices is None:
        if not collection.is_finite:
            raise CollectionError("closure over an infinite collection needs explicit indices")
        indices = range(1, len(collection) + 1)
    members = sorted(ids)
    cons = [j for j in indices if all(collection.is_member(j, w) for w in members)]
    for u in range(1, ceiling + 1):
        if u in ids:
            continue
        if all(collection.is_member(j, u) for j in cons):
            yield u


@dataclass
class ClosureReport:
    sample: list[int]
    consistent: list[int]
    closure_size: int | None
    m_star: int | None = None
    t_bound: int | None = None

    @property
    def closure_infinite(self) -> bool:
        return self.closure_size is None

    def stream(self, collection, ceiling=10**6):
        return closure_stream(collection, self.sample, ceiling, self.consistent)


def finite_bound(collection: LanguageCollection, max_size: int = 20) -> tuple[int, int]:
    """``(m*, t(C))``: largest finite intersection size over sub-collections
    and the resulting uniform sample bound ``m* + 1``."""
    collection.require(SUBSET)
    if not collection.is_finite:
        raise CollectionError("finite_bound needs a finite collection")
    n = len(collection)
    if n > max_size:
        raise CollectionError(f"collection has {n} > {max_size} languages")
    m_star = 0
    for k in range(1, n + 1):
        for combo in itertools.combinations(range(1, n + 1), k):
            size = collection.intersection_size(combo)
            if size is not None:
                m_star = max(m_star, size)
    return m_star, m_star + 1


def closure_report(collection: LanguageCollection, sample) -> ClosureReport:
    ids = sorted(as_ids(sample))
    cons = consistent_indices(collection, ids, len(collection))
    size = collection.intersection_size(cons) if cons and SUBSET in collection.capabilities else None
    m_star = t_bound = None
    if SUBSET in collection.capabilities and len(collection) <= 20:
        m_star, t_bound = finite_bound(collection)
    return ClosureReport(ids, cons, size, m_star, t_bound)


class ClosureGenerator(Generator):
    """Least unseen element of the closure; falls back to the least index
    outside the sample when nothing turns up below ``ceiling``."""

    name = "closure"
    requires = frozenset({FINITE})

    def __init__(self, ceiling: int = 10**6, norepeat: bool = True):
        self.ceiling = ceiling
        self.norepeat = norepeat

    def step(self, t, sample, prompt=None):
        excluded = sample.distinct | (self.outputs if self.norepeat else set())
        for u in closure_stream(self.collection, sample, self.ceiling):
            if u not in excluded:
                return self._emit(StepResult(output=u))
        return self._emit(StepResult(output=least_outside(excluded), fallback=True))


def collapse_witness(sample_elements: Iterable[int], ceiling: int):
    """Obscured progression ``L(j+1, 1, S)`` that contains the sample and
    misses every non-sample element among the first ``ceiling`` integers
    of the zigzag order."""
    j = ceiling // 2
    return obscured(j + 1, 1, sample_elements)


# -- obscured-progression heuristic -------------------------------------------


def obscured_heuristic(sample, universe) -> int:
    """With i < j the two largest sample elements, output i + 2(j - i)."""
    xs = sorted({universe.element_at(w) for w in as_ids(sample)})
    if len(xs) < 2:
        raise InsufficientSample("need at least two distinct integers")
    i, j = xs[-2], xs[-1]
    return universe.index_of(i + 2 * (j - i))


class HeuristicGenerator(Generator):
    name = "heuristic-i2b"
    requires = frozenset({INTEGER_UNIVERSE})

    def step(self, t, sample, prompt=None):
        if len(sample.distinct) < 2:
            return self._emit(StepResult(output=least_outside(sample.distinct), fallback=True))
        return self._emit(StepResult(output=obscured_heuristic(sample, self.collection.universe)))


# -- identification baseline ---------------------------------------------------


def baseline_identifier(collection: LanguageCollection, sample, t: int, previous: int = 1) -> int | None:
    """Least index >= ``previous`` (within the first t) whose language holds
    the whole sample; None when there is none."""
    ids = sorted(as_ids(sample))
    for i in range(max(previous, 1), collection.limit(t) + 1):
        if all(collection.is_member(i, w) for w in ids):
            return i
    return None


class BaselineIdentifier(Generator):
    """Keeps the current hypothesis until the sample refutes it, then
    moves forward; as a generator it emits the least new element of the
    hypothesis."""

    name = "identify-baseline"

    def reset(self, collection):
        super().reset(collection)
        self.current = 1
        self.cursor: dict[int, int] = {}
        self.guesses: list[int | None] = []

    def step(self, t, sample, prompt=None):
        c = self.collection
        g = baseline_identifier(c, sample, t, self.current)
        self.guesses.append(g)
        if g is None:
            return self._emit(StepResult(output=least_outside(sample.distinct), fallback=True))
        self.current = g
        u = self.cursor.get(g, 1)
        while u in sample.distinct or not c.is_member(g, u):
            u += 1
        self.cursor[g] = u
        return self._emit(StepResult(output=u, guess=g))


class ConstantIdentifier(Generator):
    """Always guesses the same index; used to exercise the stage cap."""

    name = "identify-constant"

    def __init__(self, guess: int = 1):
        self.guess = guess

    def step(self, t, sample, prompt=None):
        return self._emit(StepResult(output=least_outside(sample.distinct), guess=self.guess))


def without_repetition(generator: Generator) -> Generator:
    """Same generator, but the least element is taken over strings it has
    not output before."""
    if not hasattr(generator, "norepeat") or isinstance(generator, (HeuristicGenerator, BaselineIdentifier)):
        raise TypeError(f"{generator.name} has no designated language to draw from")
    clone = type(generator).__new__(type(generator))
    clone.__dict__.update(generator.__dict__)
    clone.norepeat = True
    if isinstance(clone, LimitGenerator) and clone.name == "limit":
        clone.name = "limit-norepeat"
    return clone
