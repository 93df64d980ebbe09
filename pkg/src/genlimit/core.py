"""Types shared by the game loop and the generators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable


class SampleSet:
    """Strings enumerated so far, kept as universe indices in arrival order."""

    def __init__(self, arrivals: Iterable[int] = ()):
        self.arrivals: list[int] = []
        self.distinct: set[int] = set()
        self.mask = 0
        for w in arrivals:
            self.add(w)

    def add(self, w: int) -> None:
        if w < 1:
            raise ValueError(f"universe index must be >= 1, got {w}")
        self.arrivals.append(w)
        if w not in self.distinct:
            self.distinct.add(w)
            self.mask |= 1 << (w - 1)

    @property
    def latest(self) -> int:
        return self.arrivals[-1] if self.arrivals else 0

    def __contains__(self, w: int) -> bool:
        return w in self.distinct

    def __len__(self):
        return len(self.arrivals)

    def __iter__(self):
        return iter(sorted(self.distinct))

    def copy(self) -> "SampleSet":
        return SampleSet(self.arrivals)


def as_ids(sample) -> set[int]:
    if isinstance(sample, SampleSet):
        return sample.distinct
    return set(sample)


@dataclass
class CriticalRecord:
    """Snapshot of criticality at step ``t`` and prefix bound ``m``.

    ``m`` is None for exact (subset-query) criticality.
    """

    t: int
    m: int | None
    consistent: list[int]
    critical: list[int]

    @property
    def top(self) -> int | None:
        return self.critical[-1] if self.critical else None


@dataclass
class StepResult:
    output: int
    n: int | None = None
    m: int | None = None
    guess: int | None = None
    fallback: bool = False
    iterations: int = 0
    disruptive: int = 0
    records: list[CriticalRecord] = field(default_factory=list)


class Generator:
    """Base class for anything that answers one string per step."""

    name = "generator"
    requires: frozenset[str] = frozenset()
    norepeat = False

    def reset(self, collection) -> None:
        self.collection = collection
        self.outputs: set[int] = set()

    def step(self, t: int, sample: SampleSet, prompt: str | None = None) -> StepResult:
        raise NotImplementedError

    def _emit(self, result: StepResult) -> StepResult:
        self.outputs.add(result.output)
        return result


def least_outside(excluded, start: int = 1) -> int:
    u = start
    while u in excluded:
        u += 1
    return u
