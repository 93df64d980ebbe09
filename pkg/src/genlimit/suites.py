"""Batch checks run by ``genlimit suite`` and by the acceptance tests.

Each check returns a :class:`CheckResult`; nothing here raises on a
failed property, so the CLI can print a full table.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable

from . import collection as coll
from .automata import Dfa
from .collection import LanguageCollection, prefix_subset
from .core import SampleSet
from .game import (GoldAdversary, StreamAdversary, canonical_enumeration,
                   cycle_prompts, delayed_cover_enumeration, independent_recheck,
                   run_game)
from .generators import (AlgorithmError, BaselineIdentifier, HeuristicGenerator,
                         IterationCeilingExceeded, LimitGenerator, closure_stream,
                         collapse_witness, critical_indices_finite, finite_bound)
from .prompted import (NontrivialPromptGenerator, RobustPromptGenerator,
                       classify_prompt, prompted_impossibility_harness)
from .scenario import trace_csv
from .universe import INTEGERS, Universe


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


# -- brute-force helpers (independent of the automaton engine) ----------------


def simulate(dfa: Dfa, word: str) -> bool:
    q = dfa.start
    for ch in word:
        q = dfa.transitions[q][dfa.alphabet.index(ch)]
    return q in dfa.accepting


def words_up_to(alphabet, n: int):
    for k in range(n + 1):
        for tup in itertools.product(alphabet, repeat=k):
            yield "".join(tup)


def random_infinite_dfa(rng: random.Random, alphabet=("a", "b"), max_states: int = 4) -> Dfa:
    while True:
        n = rng.randint(1, max_states)
        rows = tuple(tuple(rng.randrange(n) for _ in alphabet) for _ in range(n))
        acc = frozenset(q for q in range(n) if rng.random() < 0.5)
        d = Dfa(tuple(alphabet), rows, 0, acc)
        if d.is_infinite():
            return d


def _canonical_run(c, z, gen, steps, prompts=None):
    kw = {} if prompts is None else {"prompts": prompts}
    return run_game(c, z, StreamAdversary(canonical_enumeration(c, z)), gen, steps, **kw)


# -- acceptance criteria ----------------------------------------------------------


def acc_walkthrough() -> CheckResult:
    c = coll.walkthrough()
    trace = _canonical_run(c, 3, LimitGenerator(keep_records=True), 5)
    stream = trace.stream()
    outs = trace.outputs()
    first = trace.records[0]
    ok = (stream == [2, 5, 8, 10, 12] and outs[1:] == [7, 10, 12, 15]
          and first.fallback and first.n is None)
    return CheckResult("1 worked example", ok,
                       f"stream={stream} outputs={outs} step1_fallback={first.fallback}")


def acc_arith(steps: int = 500) -> CheckResult:
    c = coll.arith_progressions()
    z = c.index_of_language(coll.P(3, 5))
    trace = _canonical_run(c, z, LimitGenerator(), steps)
    th = trace.t_hat
    run = 0 if th is None else steps - th + 1
    ok = th is not None and th <= 200 and run >= 300
    return CheckResult("2 limit generation, P(3,5)", ok,
                       f"z={z} t_hat={th} consecutive_valid={run} of T={steps}")


def acc_obscured(steps: int = 300, ceiling: int = 10_000) -> CheckResult:
    c = coll.obscured_progressions()
    V = [1, 2, 3, 100]
    K = coll.obscured(0, 7, V)
    z = c.index_of_language(K)
    u = c.universe
    adv = StreamAdversary(delayed_cover_enumeration(c, z, [u.index_of(v) for v in V], 27))
    trace = run_game(c, z, adv, HeuristicGenerator(), steps)
    th = trace.t_hat
    released = max(i for i, r in enumerate(trace.records, 1)
                   if u.element_at(r.w) in V)
    elements = [u.element_at(r.w) for r in trace.records]
    witness = collapse_witness(elements, ceiling)
    wi = c.index_of_language(witness)
    round_trip = c.language(wi) == witness and c.language(z) == K
    n = max(z, wi)
    emitted = list(closure_stream(c, trace.stream(), ceiling, indices=[z, wi]))
    ok = (th is not None and th <= 200 and released <= 30 and round_trip and not emitted)
    return CheckResult(
        "3 obscured progressions", ok,
        f"t_hat={th} V_released_by={released} closure_below_{ceiling}={len(emitted)} "
        f"witness={witness.name[:24]}... n_bits={n.bit_length()}")


def acc_finite_bound(trials: int = 200, seed: int = 7) -> CheckResult:
    c = coll.two_parity_sets()
    bound = finite_bound(c)
    rng = random.Random(seed)
    violations = 0
    checked = 0
    for z in (1, 2):
        lang = c.language(z)
        members = [w for w in range(1, 400) if lang.contains(INTEGERS.element_at(w))]
        samples = [list(s) for s in itertools.combinations(members[:10], 7)]
        samples += [rng.sample(members, 7) for _ in range(trials)]
        for S in samples:
            out = list(itertools.islice(closure_stream(c, S, 10**5), 100))
            checked += 1
            if len(set(out)) < 100:
                violations += 1
                continue
            violations += sum(1 for w in out
                              if w in S or not lang.contains(INTEGERS.element_at(w)))
    ok = bound == (6, 7) and violations == 0
    return CheckResult("4 finite-collection bound", ok,
                       f"(m*, t)={bound} samples={checked} violations={violations}")


def gold_demo(steps: int = 500, depth: int = 1000):
    c = coll.gold_ladder(depth)
    z = c.index_of_language(coll.Q(0, 1))
    adv = GoldAdversary(c, stage_cap=1000)
    ident = run_game(c, z, adv, BaselineIdentifier(), steps, scenario_id="gold")
    gen = run_game(c, z, StreamAdversary(ident.stream()), LimitGenerator(), steps,
                   scenario_id="gold-replay")
    return c, adv, ident, gen


def acc_gold() -> CheckResult:
    c, adv, ident, gen = gold_demo()
    first5 = adv.stages[:5]
    cut = sum(s.steps for s in first5)
    guesses = {r.guess for r in ident.records[:cut] if r.guess is not None}
    run = gen.longest_valid_run()
    ok = len(first5) == 5 and len(guesses) >= 5 and run >= 50
    return CheckResult("5 identification vs generation", ok,
                       f"distinct_guesses_in_5_stages={len(guesses)} stages_completed="
                       f"{len(adv.stages)} generator_longest_valid_run={run}")


def invariant_checks(instances: int = 1000, seed: int = 2024, m_max: int = 50) -> dict[str, int]:
    """Failure counts per invariant over fixtures and random automaton families."""
    fails = dict.fromkeys(
        ["monotonicity", "nestedness", "disruptive", "closure", "bijection", "records"], 0)

    skipped = 0

    def run_fixture(c: LanguageCollection, z: int, steps: int, mono_m: int,
                    ceiling: int = 100_000):
        nonlocal skipped
        def on_record(rec):
            pre = {i: c.prefix(i, rec.m) for i in rec.critical}
            for i, j in itertools.combinations(rec.critical, 2):
                if not prefix_subset(pre[j], pre[i]):
                    fails["nestedness"] += 1

        gen = LimitGenerator(on_record=on_record, ceiling=ceiling)
        try:
            trace = _canonical_run(c, z, gen, steps)
        except IterationCeilingExceeded:
            skipped += 1
            return None
        except AlgorithmError:
            fails["disruptive"] += 1
            return None
        sample = trace.stream()
        t = len(sample)
        crit = [set(critical_indices_finite(c, sample, t, m).critical)
                for m in range(1, mono_m + 1)]
        for m in range(1, mono_m):
            if not crit[m] <= crit[m - 1]:
                fails["monotonicity"] += 1
        return trace

    # fixtures
    run_fixture(coll.walkthrough(), 3, 5, m_max)
    ap = coll.arith_progressions()
    run_fixture(ap, ap.index_of_language(coll.P(0, 2)), 20, m_max)
    run_fixture(coll.two_parity_sets(), 1, 12, m_max)
    run_fixture(coll.parity_prefix_pair(), 2, 12, m_max)
    run_fixture(coll.evens_vs_all(), 2, 12, m_max)

    for alphabet in ("ab", "abc"):
        u = Universe(tuple(alphabet))
        for i in range(1, 10_001):
            if u.index_of(u.element_at(i)) != i:
                fails["bijection"] += 1
    for i in range(1, 10_001):
        if INTEGERS.index_of(INTEGERS.element_at(i)) != i:
            fails["bijection"] += 1

    rng = random.Random(seed)
    words = list(words_up_to("ab", 10))
    for _ in range(instances):
        k = rng.randint(1, 6)
        dfas = [random_infinite_dfa(rng) for _ in range(k)]
        c = coll.dfa_collection(dfas)
        z = rng.randint(1, k)
        # keep the sample inside the brute-force horizon
        short = sum(1 for w in words if len(w) <= 7 and simulate(dfas[z - 1], w))
        steps = min(rng.randint(1, 10), short)
        trace = run_fixture(c, z, steps, 30, ceiling=20_000)
        if trace is None:
            continue
        # in-loop records agree with the from-scratch computation
        sample = trace.stream()
        last = trace.records[-1]
        if last.n is not None:
            ref = critical_indices_finite(c, sample, steps, last.m)
            if ref.critical[-1] != last.n:
                fails["records"] += 1
        # closure safety and exactness against brute force to length 10
        S = {c.universe.element_at(w) for w in sample}
        cons = [d for d in dfas if all(simulate(d, s) for s in S)]
        brute = {w for w in words if w not in S and all(simulate(d, w) for d in cons)}
        got = {c.universe.element_at(w) for w in closure_stream(c, sample, len(words))}
        if got != brute:
            fails["closure"] += 1
    fails["ceiling_skips"] = skipped
    return fails


def acc_invariants(instances: int = 1000) -> CheckResult:
    fails = invariant_checks(instances)
    return CheckResult("6 invariant suite",
                       not any(v for k, v in fails.items() if k != "ceiling_skips"),
                       " ".join(f"{k}={v}" for k, v in fails.items()) + f" instances={instances}")


def robust_fixture():
    a = ("a", "b")
    no_bb = Dfa.build(a, [{"a": 0, "b": 1}, {"a": 0, "b": 2}, {"a": 2, "b": 2}], 0, {0, 1})
    even_end_a = Dfa.build(a, [{"a": 1, "b": 1}, {"a": 2, "b": 3}, {"a": 1, "b": 1},
                               {"a": 0, "b": 0}], 0, {2})
    langs = [coll.Automaton(coll.dfa_all(), "Σ*"),
             coll.Automaton(coll.dfa_even_length(), "even length"),
             coll.Automaton(no_bb, "no bb"),
             coll.Automaton(even_end_a, "even length, ends in a")]
    return coll.dfa_collection(langs, name="robust4"), 4, ["a", "b", "ab", "ba"]


def acc_prompted_robust(steps: int = 200) -> CheckResult:
    c, z, prompts = robust_fixture()
    robust = all(classify_prompt(c, len(c), p).robust for p in prompts)
    trace = _canonical_run(c, z, RobustPromptGenerator(), steps, cycle_prompts(prompts))
    prefixed = all(r.a_elem.startswith(r.p) for r in trace.records)
    th = trace.t_hat
    eps = _canonical_run(c, z, RobustPromptGenerator(), steps, cycle_prompts([""]))
    plain = _canonical_run(c, z, LimitGenerator(), steps)
    identical = trace_csv(eps) == trace_csv(plain)
    ok = robust and prefixed and th is not None and th <= steps // 2 and identical
    return CheckResult("7 prompted, robust prompts", ok,
                       f"robust={robust} all_prefixed={prefixed} t_hat={th} "
                       f"eps_trace_identical={identical}")


def nontrivial_fixture():
    langs = [coll.Automaton(coll.dfa_all(), "Σ*"),
             coll.Automaton(coll.dfa_prefix("a"), "a·Σ*"),
             coll.Automaton(coll.dfa_star("a"), "a*")]
    # "ab" has no continuation in a*, so it is non-trivial but not robust
    return coll.dfa_collection(langs, name="nontrivial3"), 2, ["ab", "a", "aab"]


def brute_t_valid(dfa: Dfa, prompt: str, sample_words: set[str], max_len: int = 8) -> bool:
    return any(w.startswith(prompt) and w not in sample_words and simulate(dfa, w)
               for w in words_up_to(dfa.alphabet, max_len))


def acc_prompted_nontrivial(steps: int = 200, check_steps: int = 20) -> CheckResult:
    c, z, prompts = nontrivial_fixture()
    cls = classify_prompt(c, len(c), "ab")
    not_robust = not cls.robust and cls.nontrivial_for(z)
    trace = _canonical_run(c, z, NontrivialPromptGenerator(), steps, cycle_prompts(prompts))
    th = trace.t_hat
    prefixed = all(r.a_elem.startswith(r.p) for r in trace.records)
    mismatches = 0
    checked = 0
    u = c.universe
    extra = ["", "a", "b", "aa", "ab", "ba", "bb"]
    for k in range(1, check_steps + 1):
        sample = [r.w for r in trace.records[:k]]
        words = {u.element_at(w) for w in sample}
        for p in sorted(set(prompts + extra)):
            verdicts = classify_prompt(c, len(c), p, sample).verdicts
            for i, v in verdicts.items():
                checked += 1
                if v.t_valid != brute_t_valid(c.language(i).dfa, p, words):
                    mismatches += 1
    ok = not_robust and prefixed and th is not None and th <= steps // 2 and mismatches == 0
    return CheckResult("8 prompted, non-trivial prompts", ok,
                       f"'ab' robust={cls.robust} t_hat={th} all_prefixed={prefixed} "
                       f"t_valid_checks={checked} mismatches={mismatches}")


def acc_impossibility(t0: int = 5, horizon: int = 50) -> CheckResult:
    rounds = prompted_impossibility_harness(t0, horizon=horizon)
    parities = {r.parity for r in rounds}
    ok = parities == {"odd", "even"}
    for r in rounds:
        expected = "b-even" if r.parity == "odd" else "b-odd"
        ok &= len(r.invalid_for) == 1 and r.invalid_for[0].endswith(expected)
        ok &= all(v is not None and v <= horizon for v in r.recovery.values())
    detail = "; ".join(f"{r.generator}/{r.order}: '{r.output}' {r.parity} -> invalid for "
                       f"{r.invalid_for}, recovery={list(r.recovery.values())}" for r in rounds)
    return CheckResult("9 prompted uniform-bound impossibility", ok, detail)


ACCEPTANCE: list[Callable[[], CheckResult]] = [
    acc_walkthrough, acc_arith, acc_obscured, acc_finite_bound, acc_gold,
    acc_invariants, acc_prompted_robust, acc_prompted_nontrivial, acc_impossibility,
]


# -- other suites -------------------------------------------------------------------


def referee_crosscheck() -> CheckResult:
    """Referee verdicts against an independent recomputation on short traces."""
    bad = 0
    traces = 0
    ap = coll.arith_progressions()
    for gen in (LimitGenerator(), BaselineIdentifier()):
        tr = _canonical_run(ap, ap.index_of_language(coll.P(3, 5)), gen, 100)
        bad += len(independent_recheck(ap, tr))
        traces += 1
    c, z, prompts = robust_fixture()
    tr = _canonical_run(c, z, RobustPromptGenerator(), 100, cycle_prompts(prompts))
    bad += len(independent_recheck(c, tr))
    traces += 1
    return CheckResult("referee soundness", bad == 0, f"traces={traces} disagreements={bad}")


def invariant_suite(instances: int = 1000) -> list[CheckResult]:
    fails = invariant_checks(instances)
    skips = fails.pop("ceiling_skips")
    out = [CheckResult(k, v == 0, f"failures={v}") for k, v in fails.items()]
    out.append(CheckResult("iteration ceiling", True, f"instances skipped={skips}"))
    out.append(referee_crosscheck())
    return out


def impossibility_suite() -> tuple[list[CheckResult], list[str]]:
    c, adv, ident, gen = gold_demo()
    lines = ["stage  interval           steps  guess"]
    for s in adv.stages[:10]:
        lang = c.language(s.guess).name if s.guess else "-"
        lines.append(f"{s.stage:>5}  [{s.low:>4}, {s.high:>4}]  {s.steps:>10}  {lang}")
    lines.append(f"identifier guess changes over {len(ident.records)} steps: {ident.guess_changes}")
    lines.append(f"limit generator on the same stream: t_hat={gen.t_hat}, "
                 f"longest valid run={gen.longest_valid_run()}")
    lines.append("")
    for r in prompted_impossibility_harness():
        lines.append(f"{r.generator:<20} {r.order:<9} output={r.output!r:<6} {r.parity:<5} "
                     f"invalid for {r.invalid_for[0] if r.invalid_for else '-'}; "
                     f"recovery after first b-string: {r.recovery}")
    return [acc_gold(), acc_impossibility()], lines
