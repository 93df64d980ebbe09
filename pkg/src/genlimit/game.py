"""The adversary/generator game and its referee.

The adversary privately fixes the true language ``L_z`` and enumerates it.
At each step the generator sees the sample (and possibly a prompt) and
answers one element; the referee, who knows ``z``, scores the answer as
valid when it lies in ``L_z``, is not yet in the sample, and carries the
prompt as a prefix.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Iterator

from .collection import CollectionError, LanguageCollection, Progression, P
from .core import Generator, SampleSet, StepResult
from .generators import FINITE, INTEGER_UNIVERSE, STRING_UNIVERSE


class GameError(ValueError):
    pass


class CapabilityMismatch(GameError):
    pass


# -- adversaries ---------------------------------------------------------------


class Adversary:
    """Produces one universe index per step; ``None`` ends the game."""

    name = "adversary"

    def next(self) -> int | None:
        raise NotImplementedError

    def observe(self, result: StepResult) -> None:
        pass


def members_in_order(collection: LanguageCollection, z: int, start: int = 1) -> Iterator[int]:
    lang = collection.language(z)
    universe = collection.universe
    w = start
    while True:
        if lang.contains(universe.element_at(w)):
            yield w
        w += 1


class StreamAdversary(Adversary):
    def __init__(self, stream: Iterable[int], name: str = "stream"):
        self._it = iter(stream)
        self.name = name

    def next(self):
        return next(self._it, None)


def canonical_enumeration(collection: LanguageCollection, z: int) -> Iterator[int]:
    """Members of ``L_z`` in increasing universe index, each once."""
    return members_in_order(collection, z)


def delayed_cover_enumeration(collection: LanguageCollection, z: int,
                              holdback: Iterable[int], release: int) -> Iterator[int]:
    """Canonical order with ``holdback`` withheld until step ``release``.

    ``holdback`` is given as universe indices. From step ``release`` on
    the withheld members are emitted one per step (in index order), then
    the canonical order resumes.
    """
    lang = collection.language(z)
    held = sorted(set(holdback))
    for w in held:
        if not lang.contains(collection.universe.element_at(w)):
            raise GameError(f"holdback element u_{w} is not in L_{z}")
    held_set = set(held)
    rest = (w for w in members_in_order(collection, z) if w not in held_set)
    step = 1
    while step < release:
        yield next(rest)
        step += 1
    yield from held
    yield from rest


def scripted_enumeration(collection: LanguageCollection, z: int,
                         script: Iterable[int]) -> Iterator[int]:
    """The scripted indices first, then the rest of ``L_z`` canonically."""
    seen = set()
    for w in script:
        seen.add(w)
        yield w
    for w in members_in_order(collection, z):
        if w not in seen:
            yield w


class RepeatingAdversary(Adversary):
    """Wraps another adversary and, with probability ``rate``, repeats an
    earlier element instead of advancing."""

    def __init__(self, inner: Adversary, rate: float = 0.2, seed: int = 0):
        self.inner = inner
        self.rate = rate
        self.rng = random.Random(seed)
        self.history: list[int] = []
        self.name = f"repeat({inner.name})"

    def next(self):
        if self.history and self.rng.random() < self.rate:
            return self.rng.choice(self.history)
        w = self.inner.next()
        if w is not None:
            self.history.append(w)
        return w

    def observe(self, result):
        self.inner.observe(result)


@dataclass
class StageReport:
    stage: int
    low: int
    high: int
    steps: int
    guess: int | None


class GoldStageCap(Exception):
    pass


class GoldAdversary(Adversary):
    """Staged enumeration of the integers that defeats identification.

    Having shown the interval ``[-s, j(s)]``, stage s+1 shows ``-(s+1)``
    and ``j(s)+1``, then keeps counting upward until the identifier's
    guess is a language equal to P_{-(s+1),1}; the stage then ends. When
    a stage runs ``stage_cap`` steps without that guess the stream stops
    and ``capped`` records the stage.
    """

    name = "gold"

    def __init__(self, collection: LanguageCollection, stage_cap: int = 1000):
        if collection.universe.is_strings:
            raise GameError("the staged construction runs over the integers")
        self.collection = collection
        self.universe = collection.universe
        self.stage_cap = stage_cap
        self.stage = 0
        self.low = 0
        self.high = 0
        self.pending = [0]
        self.stage_steps = 0
        self.last_guess: int | None = None
        self.stages: list[StageReport] = []
        self.capped: int | None = None

    def _target(self) -> Progression:
        return P(-self.stage, 1)

    def _guessed_target(self) -> bool:
        g = self.last_guess
        if g is None:
            return False
        try:
            return self.collection.language(g) == self._target()
        except CollectionError:
            return False

    def next(self):
        if self.capped is not None:
            return None
        if not self.pending:
            if self.stage > 0 and not self._guessed_target():
                if self.stage_steps >= self.stage_cap:
                    self.capped = self.stage
                    return None
                self.high += 1
                self.pending.append(self.high)
            else:
                self.stages.append(StageReport(self.stage, self.low, self.high,
                                               self.stage_steps, self.last_guess))
                self.stage += 1
                self.stage_steps = 0
                self.low = -self.stage
                self.high += 1
                self.pending = [self.low, self.high]
        x = self.pending.pop(0)
        self.stage_steps += 1
        return self.universe.index_of(x)

    def observe(self, result):
        self.last_guess = result.guess


# -- prompts -------------------------------------------------------------------


PromptStrategy = Callable[[int, SampleSet], "str | None"]


def no_prompts(t, sample):
    return None


def constant_prompt(p: str) -> PromptStrategy:
    return lambda t, sample: p


def cycle_prompts(ps: list[str]) -> PromptStrategy:
    if not ps:
        raise GameError("cycle needs at least one prompt")
    return lambda t, sample: ps[(t - 1) % len(ps)]


def after_prompt(t0: int, p: str = "b", before: str = "") -> PromptStrategy:
    """``before`` for the first t0 steps, then ``p``."""
    return lambda t, sample: p if t > t0 else before


# -- game loop -------------------------------------------------------------------


@dataclass
class StepRecord:
    t: int
    w: int
    p: str | None
    a: int
    valid: bool
    n: int | None
    m: int | None
    guess: int | None
    fallback: bool
    mem_queries: int
    subset_queries: int
    regular_queries: int
    w_elem: str = ""
    a_elem: str = ""


@dataclass
class GameTrace:
    scenario_id: str
    generator: str
    z: int
    steps: int
    records: list[StepRecord] = field(default_factory=list)
    aborted: str | None = None

    @property
    def t_hat(self) -> int | None:
        """First step from which every observed step is valid."""
        if not self.records:
            return None
        last_bad = 0
        for r in self.records:
            if not r.valid:
                last_bad = r.t
        if last_bad == self.records[-1].t:
            return None
        return last_bad + 1

    @property
    def valid_steps(self) -> int:
        return sum(r.valid for r in self.records)

    @property
    def guess_changes(self) -> int:
        gs = [r.guess for r in self.records if r.guess is not None]
        return sum(1 for a, b in zip(gs, gs[1:]) if a != b)

    def longest_valid_run(self) -> int:
        best = cur = 0
        for r in self.records:
            cur = cur + 1 if r.valid else 0
            best = max(best, cur)
        return best

    def outputs(self) -> list[int]:
        return [r.a for r in self.records]

    def stream(self) -> list[int]:
        return [r.w for r in self.records]


class Referee:
    """Scores outputs with full knowledge of the true language."""

    def __init__(self, collection: LanguageCollection, z: int):
        self.universe = collection.universe
        self.lang = collection.language(z)

    def in_language(self, w: int) -> bool:
        return self.lang.contains(self.universe.element_at(w))

    def valid(self, a: int, sample: SampleSet, prompt: str | None = None) -> bool:
        if a in sample.distinct:
            return False
        x = self.universe.element_at(a)
        if prompt and not (isinstance(x, str) and x.startswith(prompt)):
            return False
        return self.lang.contains(x)


def check_compatible(collection: LanguageCollection, generator: Generator) -> None:
    for need in generator.requires:
        if need == FINITE:
            ok = collection.is_finite
        elif need == INTEGER_UNIVERSE:
            ok = not collection.universe.is_strings
        elif need == STRING_UNIVERSE:
            ok = collection.universe.is_strings
        else:
            ok = need in collection.capabilities
        if not ok:
            raise CapabilityMismatch(
                f"generator {generator.name} needs {need}, which {collection.name or 'the collection'} lacks")


def run_game(collection: LanguageCollection, z: int, adversary: Adversary,
             generator: Generator, steps: int, prompts: PromptStrategy = no_prompts,
             scenario_id: str = "", validate_samples: bool = True) -> GameTrace:
    """Play ``steps`` rounds; the trace is fully determined by the inputs."""
    if steps < 1:
        raise GameError("step budget must be >= 1")
    collection.check_index(z)
    check_compatible(collection, generator)
    collection.reset_counts()
    generator.reset(collection)
    referee = Referee(collection, z)
    universe = collection.universe
    sample = SampleSet()
    trace = GameTrace(scenario_id, generator.name, z, steps)
    for t in range(1, steps + 1):
        w = adversary.next()
        if w is None:
            trace.aborted = f"adversary stopped before step {t}"
            break
        if validate_samples and not referee.in_language(w):
            raise GameError(f"adversary emitted u_{w}, which is not in L_{z}")
        sample.add(w)
        p = prompts(t, sample)
        if p:
            universe.validate(p)
        res = generator.step(t, sample, p)
        adversary.observe(res)
        counts = collection.counts
        trace.records.append(StepRecord(
            t=t, w=w, p=p, a=res.output, valid=referee.valid(res.output, sample, p),
            n=res.n, m=res.m, guess=res.guess, fallback=res.fallback,
            mem_queries=counts.membership, subset_queries=counts.subset,
            regular_queries=counts.regular,
            w_elem=universe.format(universe.element_at(w)),
            a_elem=universe.format(universe.element_at(res.output)),
        ))
    return trace


def independent_recheck(collection: LanguageCollection, trace: GameTrace) -> list[int]:
    """Steps whose validity verdict disagrees with a direct recomputation.

    Rebuilds the sample from the trace and tests membership element by
    element, without the :class:`Referee`.
    """
    lang = collection.language(trace.z)
    seen: set = set()
    bad = []
    for r in trace.records:
        seen.add(collection.universe.element_at(r.w))
        x = collection.universe.element_at(r.a)
        ok = x not in seen and lang.contains(x)
        if r.p:
            ok = ok and x[: len(r.p)] == r.p
        if ok != r.valid:
            bad.append(r.t)
    return bad


def record_dict(r: StepRecord) -> dict:
    return asdict(r)
