"""Scenario files, registries and run-directory export.

A scenario is a JSON object; see ``docs/schema.md`` for the fields.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Callable

from . import collection as coll
from .automata import Dfa
from .collection import LanguageCollection, Progression
from .game import (Adversary, GameError, GameTrace, GoldAdversary, RepeatingAdversary,
                   StreamAdversary, after_prompt, canonical_enumeration, constant_prompt,
                   cycle_prompts, delayed_cover_enumeration, no_prompts, run_game,
                   scripted_enumeration)
from .generators import (BaselineIdentifier, ClosureGenerator, HeuristicGenerator,
                         LimitGenerator, SubsetQueryGenerator)
from .prompted import NontrivialPromptGenerator, RobustPromptGenerator

SCHEMA_VERSION = 1
CSV_COLUMNS = ["t", "w_t", "p_t", "a_t", "valid", "n_t", "m_t", "mem_queries_cum"]


class ScenarioError(ValueError):
    pass


FAMILIES: dict[str, Callable[..., LanguageCollection]] = {
    "arith_progressions": coll.arith_progressions,
    "obscured_progressions": coll.obscured_progressions,
    "gold_ladder": coll.gold_ladder,
    "walkthrough": coll.walkthrough,
    "two_parity_sets": coll.two_parity_sets,
    "evens_vs_all": coll.evens_vs_all,
    "parity_prefix_pair": coll.parity_prefix_pair,
    "progressions": None,
    "dfa": None,
}

GENERATORS: dict[str, Callable[..., Any]] = {
    "closure": lambda ceiling=None: ClosureGenerator(ceiling or 10**6),
    "f_c": lambda ceiling=None: SubsetQueryGenerator(),
    "limit": lambda ceiling=None: LimitGenerator(ceiling=ceiling or 100_000),
    "limit-norepeat": lambda ceiling=None: LimitGenerator(norepeat=True, ceiling=ceiling or 100_000),
    "heuristic-i2b": lambda ceiling=None: HeuristicGenerator(),
    "identify-baseline": lambda ceiling=None: BaselineIdentifier(),
    "prompted-robust": lambda ceiling=None: RobustPromptGenerator(ceiling=ceiling or 100_000),
    "prompted-nontrivial": lambda ceiling=None: NontrivialPromptGenerator(ceiling=ceiling or 100_000),
}

ADVERSARIES = ["canonical", "delayed", "scripted", "gold"]
PROMPT_STRATEGIES = ["none", "constant:<string>", "cycle:[s1,s2,...]", "adaptive-7.3"]


def make_generator(name: str, ceiling: int | None = None):
    try:
        return GENERATORS[name](ceiling)
    except KeyError:
        raise ScenarioError(f"unknown generator {name!r}") from None


def _progression(params: dict) -> Progression:
    kind = params.get("kind", "P")
    a, b = int(params["a"]), int(params["b"])
    V = [int(v) for v in params.get("V", [])]
    if kind == "P":
        return Progression(a, b, extra=frozenset(V))
    if kind == "Q":
        return Progression(a, b, both=True, extra=frozenset(V))
    if kind == "L":
        return coll.obscured(a, b, V)
    raise ScenarioError(f"unknown progression kind {kind!r}")


def build_collection(params: dict, base: Path | None = None) -> LanguageCollection:
    family = params.get("family")
    if family not in FAMILIES:
        raise ScenarioError(f"unknown collection family {family!r}")
    if family == "progressions":
        return coll.progression_list([_progression(x) for x in params["languages"]],
                                     name=params.get("name", "progressions"))
    if family == "dfa":
        dfas = []
        for item in params["automata"]:
            text = item
            if "\n" not in item:
                path = Path(item)
                if base is not None and not path.is_absolute():
                    path = base / path
                text = path.read_text()
            dfas.append(Dfa.from_text(text))
        return coll.dfa_collection(dfas, name=params.get("name", "dfa"))
    kwargs = {k: v for k, v in params.items() if k not in ("family", "name")}
    try:
        return FAMILIES[family](**kwargs)
    except TypeError as e:
        raise ScenarioError(f"bad parameters for {family}: {e}") from None


@dataclass
class Scenario:
    id: str
    collection: LanguageCollection
    z: int
    adversary: dict
    prompts: str
    generator: str
    steps: int
    seed: int = 0
    ceiling: int | None = None
    t0: int = 3

    def make_adversary(self) -> Adversary:
        c, z = self.collection, self.z
        params = self.adversary
        kind = params.get("kind", "canonical")
        u = c.universe
        if kind == "canonical":
            adv: Adversary = StreamAdversary(canonical_enumeration(c, z), "canonical")
        elif kind == "delayed":
            hold = [u.index_of(_elem(u, x)) for x in params.get("holdback", [])]
            adv = StreamAdversary(delayed_cover_enumeration(c, z, hold, int(params["release"])),
                                  "delayed")
        elif kind == "scripted":
            script = [u.index_of(_elem(u, x)) for x in params["elements"]]
            adv = StreamAdversary(scripted_enumeration(c, z, script), "scripted")
        elif kind == "gold":
            adv = GoldAdversary(c, stage_cap=int(params.get("stage_cap", 1000)))
        else:
            raise ScenarioError(f"unknown adversary {kind!r}")
        rep = params.get("repeat")
        if rep:
            adv = RepeatingAdversary(adv, float(rep.get("rate", 0.2)), self.seed)
        return adv

    def make_prompts(self):
        return parse_prompts(self.prompts, self.t0)

    def run(self) -> GameTrace:
        return run_game(self.collection, self.z, self.make_adversary(),
                        make_generator(self.generator, self.ceiling), self.steps,
                        self.make_prompts(), scenario_id=self.id)


def _elem(universe, x):
    return universe.parse(x) if isinstance(x, str) else x


def parse_prompts(text: str | None, t0: int = 3):
    if not text or text == "none":
        return no_prompts
    if text.startswith("constant:"):
        return constant_prompt(text[len("constant:"):])
    if text.startswith("cycle:"):
        body = text[len("cycle:"):].strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise ScenarioError(f"cycle prompts must look like cycle:[p1,p2]: {text!r}")
        return cycle_prompts([s.strip() for s in body[1:-1].split(",")])
    if text == "adaptive-7.3":
        return after_prompt(t0, "b")
    raise ScenarioError(f"unknown prompt strategy {text!r}")


def load_scenario(source: str | Path | dict, steps: int | None = None,
                  seed: int | None = None, ceiling: int | None = None) -> Scenario:
    base = None
    if isinstance(source, dict):
        data = source
    else:
        path = Path(source)
        base = path.parent
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as e:
            raise ScenarioError(f"{path}: invalid JSON ({e})") from None
    version = data.get("schema")
    if version != SCHEMA_VERSION:
        raise ScenarioError(f"unsupported schema version {version!r}; expected {SCHEMA_VERSION}")
    for key in ("collection", "target", "generator"):
        if key not in data:
            raise ScenarioError(f"missing field {key!r}")
    T = int(steps if steps is not None else data.get("steps", 100))
    if T < 1:
        raise ScenarioError("steps must be >= 1")
    c = build_collection(data["collection"], base)
    target = data["target"]
    if "index" in target:
        z = int(target["index"])
    elif "language" in target:
        z = c.index_of_language(_progression(target["language"]))
    else:
        raise ScenarioError("target needs an index or a language")
    try:
        c.check_index(z)
    except coll.CollectionError as e:
        raise ScenarioError(str(e)) from None
    gen = data["generator"]
    if gen not in GENERATORS:
        raise ScenarioError(f"unknown generator {gen!r}")
    return Scenario(
        id=str(data.get("id", "scenario")),
        collection=c, z=z,
        adversary=data.get("adversary", {"kind": "canonical"}),
        prompts=data.get("prompts", "none"),
        generator=gen, steps=T,
        seed=int(seed if seed is not None else data.get("seed", 0)),
        ceiling=ceiling if ceiling is not None else data.get("ceiling"),
        t0=int(data.get("t0", 3)),
    )


# -- export ----------------------------------------------------------------------


@dataclass
class RunSummary:
    scenario_id: str
    generator: str
    steps: int
    executed_steps: int
    t_hat: int | None
    valid_steps: int
    membership_queries: int
    subset_queries: int
    regular_queries: int
    max_m: int | None
    guess_changes: int
    aborted: str | None

    @classmethod
    def from_trace(cls, trace: GameTrace) -> "RunSummary":
        last = trace.records[-1] if trace.records else None
        ms = [r.m for r in trace.records if r.m is not None]
        return cls(
            scenario_id=trace.scenario_id, generator=trace.generator,
            steps=trace.steps, executed_steps=len(trace.records),
            t_hat=trace.t_hat, valid_steps=trace.valid_steps,
            membership_queries=last.mem_queries if last else 0,
            subset_queries=last.subset_queries if last else 0,
            regular_queries=last.regular_queries if last else 0,
            max_m=max(ms) if ms else None,
            guess_changes=trace.guess_changes, aborted=trace.aborted,
        )


def _cell(x):
    return "" if x is None else x


def trace_csv(trace: GameTrace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in trace.records:
        w.writerow([r.t, r.w, _cell(r.p), r.a, int(r.valid), _cell(r.n), _cell(r.m),
                    r.mem_queries])
    return buf.getvalue()


def write_run(trace: GameTrace, out: str | Path) -> RunSummary:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    summary = RunSummary.from_trace(trace)
    (out / "trace.csv").write_text(trace_csv(trace))
    doc = {
        "schema": SCHEMA_VERSION,
        "scenario_id": trace.scenario_id,
        "generator": trace.generator,
        "z": trace.z,
        "records": [asdict(r) for r in trace.records],
        "summary": asdict(summary),
    }
    (out / "trace.json").write_text(json.dumps(doc, indent=1, ensure_ascii=False) + "\n")
    (out / "summary.json").write_text(json.dumps(asdict(summary), indent=2) + "\n")
    return summary
