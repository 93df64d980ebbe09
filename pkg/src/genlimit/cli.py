"""Command-line entry point: ``genlimit run|suite|list``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .collection import CollectionError
from .game import Adversary, GameError
from .generators import AlgorithmError
from .scenario import (ADVERSARIES, FAMILIES, GENERATORS, PROMPT_STRATEGIES, Scenario,
                       ScenarioError, load_scenario, write_run)
from .universe import UniverseError

EXIT_SCHEMA = 2
EXIT_ALGORITHM = 3


class InteractiveAdversary(Adversary):
    """Reads one element per line; a blank line or EOF ends the game."""

    name = "interactive"

    def __init__(self, scenario: Scenario, stdin=None, stderr=None):
        self.universe = scenario.collection.universe
        self.lang = scenario.collection.language(scenario.z)
        self.stdin = stdin or sys.stdin
        self.stderr = stderr or sys.stderr
        self.t = 0

    def next(self):
        self.t += 1
        while True:
            self.stderr.write(f"w_{self.t}> ")
            self.stderr.flush()
            line = self.stdin.readline()
            if not line or not line.strip():
                return None
            try:
                x = self.universe.parse(line.strip())
            except UniverseError as e:
                self.stderr.write(f"{e}\n")
                continue
            if not self.lang.contains(x):
                self.stderr.write(f"{line.strip()} is not in the target language\n")
                continue
            return self.universe.index_of(x)

    def observe(self, result):
        self.stderr.write(f"  output: {self.universe.format(self.universe.element_at(result.output))}\n")


def cmd_run(args) -> int:
    scenario = load_scenario(args.scenario, steps=args.steps, seed=args.seed,
                             ceiling=args.ceiling)
    if args.interactive_adversary:
        from .game import run_game
        from .scenario import make_generator
        trace = run_game(scenario.collection, scenario.z, InteractiveAdversary(scenario),
                         make_generator(scenario.generator, scenario.ceiling),
                         scenario.steps, scenario.make_prompts(), scenario_id=scenario.id)
    else:
        trace = scenario.run()
    out = Path(args.out) if args.out else Path("runs") / scenario.id
    summary = write_run(trace, out)
    print(f"scenario {summary.scenario_id}  generator {summary.generator}")
    print(f"steps {summary.executed_steps}/{summary.steps}  valid {summary.valid_steps}  "
          f"t_hat {summary.t_hat if summary.t_hat is not None else '-'}")
    print(f"queries: membership {summary.membership_queries}  subset {summary.subset_queries}  "
          f"regular {summary.regular_queries}")
    if summary.aborted:
        print(f"note: {summary.aborted}")
    print(f"wrote {out}/trace.csv, trace.json, summary.json")
    return 0


def _table(results) -> None:
    width = max(len(r.name) for r in results)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.detail}")


def cmd_suite(args) -> int:
    from . import suites

    if args.name == "acceptance":
        results = []
        for check in suites.ACCEPTANCE:
            r = check()
            print(r.line(), flush=True)
            results.append(r)
    elif args.name == "invariants":
        results = suites.invariant_suite(args.instances)
        _table(results)
    else:
        results, lines = suites.impossibility_suite()
        print("\n".join(lines))
        print()
        _table(results)
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


def cmd_list(args) -> int:
    print("collection families:")
    for name in FAMILIES:
        print(f"  {name}")
    print("generators:")
    for name in GENERATORS:
        print(f"  {name}")
    print("adversaries:")
    for name in ADVERSARIES:
        print(f"  {name}")
    print("  interactive (run --interactive-adversary)")
    print("prompt strategies:")
    for name in PROMPT_STRATEGIES:
        print(f"  {name}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="genlimit",
                                     description="Language generation in the limit simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="play one scenario and export its trace")
    run.add_argument("scenario", help="scenario JSON file")
    run.add_argument("--out", help="output directory (default runs/<scenario id>)")
    run.add_argument("--steps", type=int, help="override the step budget T")
    run.add_argument("--seed", type=int, help="seed for randomised adversaries")
    run.add_argument("--ceiling", type=int, help="closure / iteration ceiling")
    run.add_argument("--interactive-adversary", action="store_true",
                     help="read the enumeration from stdin")
    run.set_defaults(func=cmd_run)

    suite = sub.add_parser("suite", help="run a batch of checks")
    suite.add_argument("name", choices=["invariants", "acceptance", "impossibility"])
    suite.add_argument("--instances", type=int, default=1000,
                       help="random instances for the invariant suite")
    suite.set_defaults(func=cmd_suite)

    lst = sub.add_parser("list", help="show registered families, generators and strategies")
    lst.set_defaults(func=cmd_list)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, GameError, CollectionError, UniverseError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    except AlgorithmError as e:
        print(f"algorithm error: {e}", file=sys.stderr)
        return EXIT_ALGORITHM


if __name__ == "__main__":
    sys.exit(main())
