"""Acceptance gate: each criterion runs at its stated size and prints one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
Each ``criterion_*`` function returns ``(passed, detail, fingerprint)``; the
fingerprint is what the determinism criterion compares across two runs.
"""

from __future__ import annotations

import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from certify import exhaustive_max, has_augmenting_path, is_matching  # noqa: E402
from conftest import cycle, path, petersen, random_graph, star  # noqa: E402
from pards.bounds import base_bound, multi_lp  # noqa: E402
from pards.config import Config  # noqa: E402
from pards.matching import max_matching  # noqa: E402
from pards.oracle import (CnfFormula, brute_force_kpds, brute_force_mds, brute_force_pds,  # noqa: E402
                          gen_gnm, random_3sat, random_pds, sat_to_pds, satisfiable, unsat_core)
from pards.reductions import apply_rule, matching_graph, reconstruct, rule7_solve  # noqa: E402
from pards.solver import Status, solve_mds, solve_pds, verify_solution  # noqa: E402
from rule_cases import degree_two_cover, reduction_cases  # noqa: E402

# G(120, 330) seeds whose search without the LP cascade selects >= 50 vertices,
# the first twenty found scanning seeds 0, 1, 2, ...
EFFECTIVENESS_SEEDS = [0, 1, 2, 6, 9, 10, 11, 12, 14, 19, 20, 21, 22, 23, 24, 27, 28, 29, 31, 33]
EFFECTIVENESS_SIZE = (120, 330)


def _fingerprint(result):
    return (result.status.value, result.size, tuple(sorted(result.solution or ())), result.stats.s_num)


def criterion_1():
    """MDS exactness on 200 random connected graphs."""
    start = time.perf_counter()
    rng = random.Random(1001)
    bad, prints = [], []
    for i in range(200):
        n = rng.randint(4, 18)
        m = rng.randint(n - 1, min(int(2.5 * n), n * (n - 1) // 2))
        g = gen_gnm(n, m, 10_000 + i)
        res = solve_mds(g, Config(seed=i))
        if res.status is not Status.OPTIMAL or res.size != len(brute_force_mds(g)) \
                or not verify_solution(g, res.solution):
            bad.append(i)
        prints.append(_fingerprint(res))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 600
    return ok, f"200 graphs, {len(bad)} mismatches, {elapsed:.1f}s (limit 600s)", prints


def criterion_2():
    """PDS exactness on 200 random cover instances."""
    rng = random.Random(2002)
    bad, prints, done, seed = [], [], 0, 0
    while done < 200:
        seed += 1
        h = random_pds(rng.randint(1, 14), rng.randint(1, 14), rng.uniform(0.15, 0.6), 20_000 + seed)
        if not h.adj_ud:
            continue
        done += 1
        res = solve_pds(h, Config(seed=seed))
        ref = brute_force_pds(h)
        if res.size != len(ref) or not verify_solution(h, res.solution):
            bad.append(seed)
        prints.append(_fingerprint(res))
    return not bad, f"200 instances, {len(bad)} mismatches", prints


def criterion_3():
    """Each rule preserves the optimum and reconstructs; rule 7 matches |UD| - matching."""
    problems, prints = [], []
    counts = {}
    for rule, cases in sorted(reduction_cases(per_rule=50).items()):
        counts[rule] = len(cases)
        if len(cases) < 50:
            problems.append(f"rule {rule}: only {len(cases)} firings")
        for h, match in cases:
            before = brute_force_pds(h)
            out, entry, delta = apply_rule(h, match)
            after = brute_force_pds(out)
            rebuilt = reconstruct([entry], after)
            if len(before) != len(after) + delta:
                problems.append(f"rule {rule}: optimum not preserved")
            if not verify_solution(h, rebuilt) or len(rebuilt) != len(before):
                problems.append(f"rule {rule}: reconstruction invalid")
            prints.append((rule, len(before), tuple(sorted(rebuilt))))
    for seed in range(100):
        h = degree_two_cover(seed)
        sol = rule7_solve(h)
        nu = len(max_matching(matching_graph(h)))
        if not verify_solution(h, sol) or not len(sol) == len(h.adj_ud) - nu == len(brute_force_pds(h)):
            problems.append(f"rule 7 seed {seed}")
        prints.append((7, tuple(sorted(sol))))
    counts[7] = 100
    detail = "firings " + " ".join(f"r{k}={v}" for k, v in sorted(counts.items()))
    if problems:
        detail += f"; {len(problems)} problems, first: {problems[0]}"
    return not problems, detail, prints


def criterion_4():
    """LP bound and the LP cascade never exceed the optimum, on 300 instances x 10 seeds."""
    rng = random.Random(4004)
    problems, prints, done, seed, tight = [], [], 0, 0, 0
    while done < 300:
        seed += 1
        h = random_pds(rng.randint(2, 12), rng.randint(2, 12), rng.uniform(0.15, 0.6), 40_000 + seed)
        if not h.adj_ud:
            continue
        done += 1
        opt = len(brute_force_pds(h))
        lb = base_bound(h).lb
        if lb > opt:
            problems.append(f"instance {seed}: LP bound {lb} > {opt}")
        results = tuple(multi_lp(h, lb, random.Random(s)) for s in range(10))
        for got in results:
            if got not in (lb, lb + 1) or got > opt or (opt == lb and got != lb):
                problems.append(f"instance {seed}: cascade gave {got}, lb {lb}, optimum {opt}")
        tight += any(got == lb + 1 for got in results)
        prints.append((lb, results))
    detail = f"300 instances x 10 seeds, lifted on {tight}, {len(problems)} violations"
    return not problems, detail, prints


def criterion_5():
    """LP cascade never costs vertex selections and saves some."""
    n, m = EFFECTIVENESS_SIZE
    problems, prints, strict = [], [], 0
    for seed in EFFECTIVENESS_SEEDS:
        g = gen_gnm(n, m, seed)
        on = solve_mds(g, Config(seed=seed))
        off = solve_mds(g, Config(seed=seed, multilp_enabled=False))
        if off.stats.s_num < 50:
            problems.append(f"seed {seed}: only {off.stats.s_num} selections without the cascade")
        if on.size != off.size:
            problems.append(f"seed {seed}: sizes differ {on.size} vs {off.size}")
        if on.stats.s_num > off.stats.s_num:
            problems.append(f"seed {seed}: s_num {on.stats.s_num} > {off.stats.s_num}")
        strict += on.stats.s_num < off.stats.s_num
        prints.append((_fingerprint(on), _fingerprint(off)))
    if strict == 0:
        problems.append("no instance improved")
    detail = f"{len(EFFECTIVENESS_SEEDS)} G({n},{m}) graphs, strictly fewer selections on {strict}"
    if problems:
        detail += f"; {problems[0]}"
    return not problems, detail, prints


def criterion_6():
    """3-SAT construction: satisfiable iff the k-part optimum equals the variable count."""
    rng = random.Random(6006)
    formulas = []
    for i in range(100):
        n = rng.randint(3, 8)
        formulas.append(random_3sat(n, rng.randint(1, 15), 60_000 + i))
    core = unsat_core()
    for n in range(3, 9):
        formulas.append(CnfFormula(n, core.clauses))
        extra = random_3sat(n, 15 - len(core.clauses), 61_000 + n).clauses
        formulas.append(CnfFormula(n, core.clauses + extra))
    bad, sat_count = 0, 0
    for f in formulas:
        sat = satisfiable(f)
        sat_count += sat
        if sat != (brute_force_kpds(sat_to_pds(f)) == f.num_vars):
            bad += 1
    unsat_count = len(formulas) - sat_count
    ok = bad == 0 and sat_count > 0 and unsat_count > 0
    return ok, f"{len(formulas)} formulas ({sat_count} sat, {unsat_count} unsat), {bad} mismatches", None


def criterion_7():
    """Fixed values, each first produced by the oracle."""
    cases = [("P10", path(10), 4), ("C9", cycle(9), 3), ("K1,5", star(5), 1), ("Petersen", petersen(), 3)]
    parts, ok = [], True
    for name, g, expected in cases:
        oracle = len(brute_force_mds(g))
        solved = solve_mds(g).size
        ok &= oracle == expected == solved
        parts.append(f"{name}={solved}")
    return ok, " ".join(parts), None


def criterion_9():
    """Matching is valid, has no augmenting path and is maximum on 100 graphs."""
    bad = 0
    for seed in range(100):
        rng = random.Random(90_000 + seed)
        g = random_graph(rng.randint(1, 12), rng.uniform(0.1, 0.8), 90_000 + seed)
        m = max_matching(g)
        if not is_matching(g, m) or has_augmenting_path(g, m) or len(m) != exhaustive_max(g):
            bad += 1
    return bad == 0, f"100 graphs, {bad} failures", None


DETERMINISM_SOURCES = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5}
_first_run: dict[int, object] = {}


def criterion_8():
    """Two runs of criteria 1-5 agree on sizes, solutions and selection counts."""
    differing = []
    for k, fn in DETERMINISM_SOURCES.items():
        if k not in _first_run:
            _first_run[k] = fn()[2]
        if fn()[2] != _first_run[k]:
            differing.append(k)
    detail = "criteria 1-5 rerun: " + ("identical" if not differing else f"differ on {differing}")
    return not differing, detail, None


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9}


def _report(k: int, ok: bool, detail: str, stream) -> None:
    stream.write(f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}\n")
    stream.flush()


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, capsys):
    ok, detail, prints = CRITERIA[k]()
    if k in DETERMINISM_SOURCES:
        _first_run[k] = prints
    with capsys.disabled():
        sys.stdout.write("\n")
        _report(k, ok, detail, sys.stdout)
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for k, fn in CRITERIA.items():
        ok, detail, prints = fn()
        if k in DETERMINISM_SOURCES:
            _first_run[k] = prints
        _report(k, ok, detail, sys.stdout)
        failures += not ok
    sys.exit(1 if failures else 0)
