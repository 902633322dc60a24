"""Acceptance criteria 1-9, one test each; every test records a PASS/FAIL line.

The lines are printed in the terminal summary of a pytest run, and directly
when the module is executed as a script.
"""

from __future__ import annotations

import itertools
import math
import random
import statistics
from functools import lru_cache

import pytest

from p3vc.generators import gen_random_graph
from p3vc.graph import Graph
from p3vc.kernel import decomposition_violations, kernelize, partition_violations
from p3vc.oracle import cycle_graph, min_p3vc_oracle, path_cycle_cover_size, path_graph
from p3vc.recurrence import branching_factor
from p3vc.solver import minimum_cover, solve, verify_cover

RESULTS: dict[int, str] = {}

GROWTH_BASE = 1.7485
EXACT_GAMMA_LIMIT = 14


def record(criterion: int, ok: bool, detail: str) -> None:
    RESULTS[criterion] = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
    print(RESULTS[criterion])
    assert ok, RESULTS[criterion]


# ---------------------------------------------------------------- criterion 1


def test_criterion_1_exhaustive_small_graphs():
    checked = mismatches = 0
    for n in range(6):
        pairs = list(itertools.combinations(range(n), 2))
        for mask in range(1 << len(pairs)):
            g = Graph.from_edges(n, [p for i, p in enumerate(pairs) if mask >> i & 1])
            size, _ = min_p3vc_oracle(g)
            for k in range(6):
                checked += 1
                out = solve(g, k)
                if out.answer != (size <= k) or (out.answer and not verify_cover(g, out.cover)):
                    mismatches += 1
    record(1, mismatches == 0, f"{checked} (graph, k) pairs on <= 5 vertices, {mismatches} mismatches")


# ---------------------------------------------------------------- criterion 2


def test_criterion_2_randomized_oracle():
    rng = random.Random(2)
    checked = mismatches = bad_certs = 0
    for n, p in itertools.product((8, 12, 16), (0.1, 0.25, 0.5)):
        for _ in range(200):
            g = gen_random_graph("gnp", n, p, rng.randrange(2**32))
            size, _ = min_p3vc_oracle(g)
            for k in range(n + 1):
                checked += 1
                out = solve(g, k)
                if out.answer != (size <= k):
                    mismatches += 1
                elif out.answer and (len(out.cover) > k or not verify_cover(g, out.cover)):
                    bad_certs += 1
    record(
        2,
        mismatches == 0 and bad_certs == 0,
        f"1800 G(n,p) instances, {checked} decisions, {mismatches} mismatches, {bad_certs} bad certificates",
    )


# ---------------------------------------------------------------- criterion 3


def test_criterion_3_branching_factors():
    table = [
        ([1, 2], 1.6181),
        ([1, 4, 4, 4, 4], 1.7485),
        ([1, 4, 5, 5, 5, 5], 1.6930),
        ([2, 3, 3, 3], 1.6717),
        ([3, 3, 3, 3, 3], 1.7100),
        ([2, 3, 3, 3, 4], 1.7456),
    ]
    errors = [abs(branching_factor(vec) - want) for vec, want in table]
    record(3, max(errors) <= 1e-4, f"6 factors, max abs error {max(errors):.2e}")


# ----------------------------------------------------------- criteria 4, 5, 6


class KernelSuite:
    def __init__(self) -> None:
        self.checked = 0
        self.mismatches = 0
        self.simple_fixed = 0
        self.simple_over = 0
        self.crucial_success = 0
        self.crucial_runs = 0
        self.crucial_fell_back = 0
        self.crucial_over = 0
        self.audit_failures: list[str] = []
        self.decompositions = 0
        self.partitions = 0
        self.gamma_checked = 0
        self.predicate_failures: list[str] = []
        self.max_ratio = 0.0

    def check_structures(self, res) -> None:
        for h, d in res.decompositions:
            self.decompositions += 1
            bad = decomposition_violations(h, d)
            if bad:
                self.predicate_failures.append(f"decomposition: {bad}")
        for h, p in res.partitions:
            self.partitions += 1
            exact = len(p.Z) <= EXACT_GAMMA_LIMIT
            self.gamma_checked += exact
            bad = partition_violations(h, p, exact_gamma=exact)
            if bad:
                self.predicate_failures.append(f"partition: {bad}")

    def check_bounds(self, res, k: int) -> None:
        if res.halted:
            return
        n = res.reduced_graph.n
        if res.mode == "simple":
            self.simple_fixed += 1
            self.simple_over += n > 12 * res.reduced_k
            return
        self.crucial_success += 1
        self.crucial_over += n > 5 * res.reduced_k
        if res.audit is None or not res.audit.ok:
            names = [e.name for e in res.audit.failures()] if res.audit else ["missing audit"]
            self.audit_failures.append(f"k={k}: {names}")
        if res.reduced_k:
            self.max_ratio = max(self.max_ratio, n / res.reduced_k)


def _kernel_answer(res) -> bool:
    if res.halted or res.reduced_k < 0:
        return False
    return min_p3vc_oracle(res.reduced_graph)[0] <= res.reduced_k


@lru_cache(maxsize=None)
def kernel_suite() -> KernelSuite:
    """Suite 4 (oracle-sized, every k, both modes) and suite 5's larger sparse instances."""
    suite = KernelSuite()
    rng = random.Random(4)
    for _ in range(300):
        n = rng.randint(5, 14)
        g = gen_random_graph("gnp", n, rng.choice([0.15, 0.25, 0.35, 0.5]), rng.randrange(2**32))
        size, _ = min_p3vc_oracle(g)
        for mode in ("simple", "crucial"):
            for k in range(n + 1):
                res = kernelize(g, k, mode, keep_history=True)
                suite.checked += 1
                suite.crucial_runs += mode == "crucial"
                suite.crucial_fell_back += res.crucial_fallbacks > 0
                if _kernel_answer(res) != (size <= k):
                    suite.mismatches += 1
                suite.check_structures(res)
                suite.check_bounds(res, k)
    # larger sparse graphs: answers checked against the exact solver instead of the oracle
    for _ in range(40):
        n = rng.choice([30, 40, 60])
        g = gen_random_graph("gnp", n, rng.choice([2.0, 3.0]) / n, rng.randrange(2**32))
        size = len(minimum_cover(g).cover)
        for mode in ("simple", "crucial"):
            for k in range(max(0, size - 3), size + 4):
                res = kernelize(g, k, mode, keep_history=True)
                suite.crucial_runs += mode == "crucial"
                suite.crucial_fell_back += res.crucial_fallbacks > 0
                answer = not res.halted and res.reduced_k >= 0 and solve(res.reduced_graph, res.reduced_k).answer
                suite.mismatches += answer != (size <= k)
                suite.check_structures(res)
                suite.check_bounds(res, k)
    return suite


def test_criterion_4_kernel_soundness():
    s = kernel_suite()
    record(4, s.mismatches == 0, f"{s.checked} oracle-checked kernelizations (300 graphs, both modes), {s.mismatches} wrong answers")


def test_criterion_5_kernel_bounds():
    s = kernel_suite()
    ok = s.simple_over == 0 and s.crucial_over == 0 and not s.audit_failures
    rate = 1 - s.crucial_fell_back / max(1, s.crucial_runs)
    record(
        5,
        ok,
        f"simple fixed points {s.simple_fixed} ({s.simple_over} over 12k); crucial successes "
        f"{s.crucial_success} ({s.crucial_over} over 5k, {len(s.audit_failures)} audit failures, "
        f"max n/k {s.max_ratio:.2f}); crucial convergence {rate:.1%} of {s.crucial_runs} runs "
        f"({s.crucial_fell_back} fell back to simple mode)",
    )


def test_criterion_6_decomposition_predicates():
    s = kernel_suite()
    record(
        6,
        not s.predicate_failures,
        f"{s.decompositions} decompositions, {s.partitions} partitions "
        f"({s.gamma_checked} with exact gamma), {len(s.predicate_failures)} violations",
    )


# ---------------------------------------------------------------- criterion 7


def test_criterion_7_bipartite_erratum():
    g = Graph.from_edges(5, [(i, j) for i in range(2) for j in range(2, 5)])
    oracle = min_p3vc_oracle(g)[0]
    yes, no = solve(g, 2), solve(g, 1)
    ok = oracle == 2 and yes.answer and not no.answer and verify_cover(g, yes.cover)
    record(7, ok, f"K2,3: oracle {oracle}, solve(k=2)={yes.answer}, solve(k=1)={no.answer}")


# ---------------------------------------------------------------- criterion 8


def growth_instances(count: int = 50, seed: int = 8):
    """Sparse random graphs whose optimum lies in [10, 25], with search-tree sizes."""
    rng = random.Random(seed)
    rows = []
    while len(rows) < count:
        n = rng.randint(25, 60)
        g = gen_random_graph("gnp", n, rng.choice([3.0, 3.5, 4.0]) / n, rng.randrange(2**32))
        k = len(minimum_cover(g).cover)
        if not 10 <= k <= 25:
            continue
        # the run at k - 1 explores a full tree; the run at k stops at the first cover
        nodes = max(solve(g, k).stats.nodes_total, solve(g, k - 1).stats.nodes_total)
        rows.append((k, nodes))
    return rows


def test_criterion_8_growth():
    rows = growth_instances()
    over = [(k, x) for k, x in rows if x > 100 * GROWTH_BASE**k]
    by_k: dict[int, list[float]] = {}
    for k, x in rows:
        by_k.setdefault(k, []).append(math.log(x))
    ks = sorted(by_k)
    slope, _ = statistics.linear_regression(ks, [statistics.median(by_k[k]) for k in ks])
    limit = math.log(GROWTH_BASE) + 0.05
    record(
        8,
        not over and slope <= limit,
        f"50 instances, k in [{ks[0]}, {ks[-1]}], max nodes {max(x for _, x in rows)}, "
        f"{len(over)} over 100*1.7485^k, median log-nodes slope {slope:.3f} (limit {limit:.3f})",
    )


# ---------------------------------------------------------------- criterion 9


def test_criterion_9_path_cycle_formulas():
    bad = []
    for n in range(1, 13):
        if path_cycle_cover_size("path", n)[0] != min_p3vc_oracle(path_graph(n))[0]:
            bad.append(f"P{n}")
        if n >= 3 and path_cycle_cover_size("cycle", n)[0] != min_p3vc_oracle(cycle_graph(n))[0]:
            bad.append(f"C{n}")
    record(9, not bad, f"paths n=1..12 and cycles n=3..12, mismatches: {bad or 'none'}")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
