"""The ten acceptance criteria, one test each.

Every criterion records a one-line PASS/FAIL verdict that is printed in
the pytest terminal summary.  Running this file as a script prints the
same lines without pytest.
"""
import random
import time
from fractions import Fraction
from itertools import combinations

import pytest

from pathpoly import families as fam
from pathpoly import undirected as und
from pathpoly.core import COMPLETE, Digraph, Instance
from pathpoly.enumeration import min_cost_path
from pathpoly.lab import (agrees, check_cycle_facet, check_facet, check_relaxed_facet, cycle_polytope_dimension,
                          expected_dimension, polytope_dimension, relaxed_dimension, verify_table1)
from pathpoly.lifting import clone_node_lift, lift_to_cycle, relax_lift
from pathpoly.linalg import basis_check_equivalence, is_unbalanced_1tree
from pathpoly.separation import _merged_capacities, max_flow, one_sided_min_cut_bruteforce, separate_one_sided_min_cut
from pathpoly.solver import SolverConfig, solve
from support import random_point, record

SOLVER_CASES = ((6, 4), (7, 4), (7, 5), (8, 4))
SOLVER_SEEDS = 50
SOLVE_LIMIT = 30.0

_solver_runs: dict = {}


def criterion_1():
    bad = []
    t0 = time.perf_counter()
    for n in (5, 6, 7):
        for p in range(4, n):
            got = polytope_dimension(Digraph(n), p)
            if got != n * n - 2 * n - 1:
                bad.append((n, p, got))
        for p, want in ((2, n - 2), (3, n * n - 3 * n + 1)):
            got = polytope_dimension(Digraph(n, COMPLETE), p)
            if got != want:
                bad.append((n, p, got))
    elapsed = time.perf_counter() - t0
    return not bad and elapsed < 60, f"mismatches {bad or 'none'}, {elapsed:.1f} s"


def criterion_2():
    failed = []
    for p in (1, 2, 3):
        for n, complete in ((4, True), (5, True), (6, False)):
            rep = verify_table1(n, p, completeness=complete)
            if not rep.passed:
                failed.append((n, p, [k for k, v in rep.checks.items() if not v]))
    return not failed, f"failed {failed or 'none'}"


def _sweep(d, p):
    yield from fam.iter_min_cuts(d)
    yield from fam.iter_one_sided_min_cuts(d)
    yield from fam.iter_gen_max_cuts(d, p, max_r=2)
    yield from fam.iter_card_paths(d, p)
    yield from fam.iter_nonneg(d)
    yield from fam.iter_degree(d)


def criterion_3():
    t0 = time.perf_counter()
    total, bad = 0, []
    for n, p in ((6, 4), (7, 4), (7, 5)):
        d = Digraph(n)
        for q in _sweep(d, p):
            rep = check_facet(q, d, p)
            total += 1
            if not (agrees(fam.predicted_validity(q, d, p), rep.valid)
                    and agrees(fam.predicted_facet(q, d, p), rep.is_facet)):
                bad.append((n, p, q.family, dict(q.params)))
    elapsed = time.perf_counter() - t0
    return not bad and elapsed < 600, f"{total} rows, {len(bad)} disagreements, {elapsed:.1f} s"


def criterion_4():
    d = Digraph(9)
    q = fam.gen_jump(d, [(0,)] + [(i, 4 + i) for i in range(1, 5)] + [(9,)])
    rep = check_facet(q, d, 4)
    pred = fam.predicted_facet(q, d, 4)
    ok = rep.is_facet and pred == fam.Verdict.SUFFICIENT
    return ok, f"facet {rep.is_facet}, predicate {pred}"


def criterion_5():
    parts, ok = [], True
    for n in (5, 6):
        rep = check_facet(fam.gen_extra_p4(Digraph(n), 4), Digraph(n), 4)
        ok &= rep.is_facet
        parts.append(f"n={n}: valid {rep.valid}, facet {rep.is_facet}")
    return ok, "; ".join(parts)


def criterion_6():
    d = Digraph(4)
    subsets = list(combinations(d.arcs, 5))
    mismatches = sum(basis_check_equivalence(d, s) != is_unbalanced_1tree(d, s) for s in subsets)
    return len(subsets) == 792 and mismatches == 0, f"{len(subsets)} subsets, {mismatches} mismatches"


def criterion_7():
    d, p = Digraph(6), 4
    notes, ok = [], True
    base = [fam.gen_nonneg(d, (1, 2)), fam.gen_degree(d, 1), fam.gen_min_cut(d, (0, 1, 6)),
            fam.gen_card_path(d, (1, 2, 3, 4))]
    lifted_ok = 0
    for q in base:
        big, dn = lift_to_cycle(q, d, p)
        lifted_ok += check_cycle_facet(big, dn, p).is_facet
    dim_ok = cycle_polytope_dimension(dn, p) == 6 * 6 - 2 * 6
    ok &= lifted_ok == len(base) and dim_ok
    notes.append(f"(a) {lifted_ok}/{len(base)} cycle facets, dim {cycle_polytope_dimension(dn, p)}")

    q, big = clone_node_lift(fam.gen_card_path(d, (1, 2, 3, 4)), d, p, 5)
    rep = check_facet(q, big, p)
    ok &= big.n == 7 and rep.is_facet
    notes.append(f"(b) clone facet {rep.is_facet}")

    S = (0, 1, 2, 6)
    low = relax_lift(fam.gen_min_cut(d, S), d, p, "lower")
    rest = [v for v in d.nodes if v not in S]
    cut = set(d.cut(S, rest))
    want = {a: (0 if a in cut else 1) for a in d.arcs}
    exact = all(low.coeff(a) == want[a] for a in d.arcs) and low.rhs == p - 1 and low.sense == "<="
    rrep = check_relaxed_facet(low, d, p, "lower")
    dim_up = relaxed_dimension(d, p, "lower") == polytope_dimension(d, p) + 1
    ok &= exact and rrep.is_facet and dim_up
    notes.append(f"(c) coefficients exact {exact}, facet {rrep.is_facet}, dim+1 {dim_up}")
    return ok, "; ".join(notes)


def criterion_8():
    dims = all(und.udimension(und.UGraph(n), p) == und.expected_udimension(n, p)
               for n in (5, 6) for p in range(1, n + 1))
    t100 = all(und.verify_T100(n).passed for n in (4, 5))
    g = und.UGraph(6)
    labels, failures = set(), 0
    for p in (4, 5):
        for label, q in und.iter_corollary_facets(g, p):
            labels.add(label)
            failures += not und.check_ufacet(q, g, p).is_facet
    covered = labels == {"degree", "min_cut", "one_sided_min_cut", "max_cut_odd", "max_cut_even"}
    ok = dims and t100 and failures == 0 and covered
    return ok, f"dims {dims}, T100 {t100}, facet-family failures {failures}, classes covered {covered}"


def solver_runs():
    if not _solver_runs:
        for n, p in SOLVER_CASES:
            d = Digraph(n)
            for seed in range(SOLVER_SEEDS):
                rng = random.Random(seed)
                inst = Instance(d, p, {a: rng.randint(-10, 10) for a in d.arcs})
                t0 = time.perf_counter()
                rep = solve(inst, SolverConfig(seed=seed, audit=True))
                _solver_runs[(n, p, seed)] = (inst, rep, time.perf_counter() - t0)
    return _solver_runs


def criterion_9():
    mismatches, worst = 0, 0.0
    for (n, p, seed), (inst, rep, dt) in solver_runs().items():
        opt = min_cost_path(inst.digraph, inst.costs, p)
        mismatches += rep.status != opt.status or rep.value != opt.value
        worst = max(worst, dt)
    ok = mismatches == 0 and worst < SOLVE_LIMIT
    return ok, f"{len(_solver_runs)} instances, {mismatches} mismatches, slowest {worst:.2f} s"


def criterion_10():
    rng = random.Random(2024)
    flow_bad = 0
    for trial in range(100):
        n = 6 + trial % 2
        d = Digraph(n)
        x = random_point(rng, d, rng.choice([4, n - 1]))
        found = {q.params["l"]: v for q, v in separate_one_sided_min_cut(x).found}
        cap, _ = _merged_capacities(x)
        for l in d.internal:
            best, _ = one_sided_min_cut_bruteforce(x, l)
            flow, _ = max_flow([u for u in d.nodes if u != n], cap, 0, l)
            gap = x.total(d.out_arcs(l)) - best
            flow_bad += flow != best or found.get(l, Fraction(0)) != max(gap, Fraction(0))
    cuts = unsound = unaudited = 0
    for inst, rep, _ in solver_runs().values():
        cuts += len(rep.cuts)
        unsound += sum(v <= 0 for _, _, v in rep.cuts)
        unaudited += len(rep.cuts) - rep.audited
    ok = flow_bad == 0 and unsound == 0 and unaudited == 0
    return ok, f"flow mismatches {flow_bad}; {cuts} cuts re-verified, {unsound} unsound, {unaudited} unaudited"


CRITERIA = {k: globals()[f"criterion_{k}"] for k in range(1, 11)}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_acceptance(number):
    ok, detail = CRITERIA[number]()
    record(number, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    for k, fn in CRITERIA.items():
        ok, detail = fn()
        print(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}", flush=True)
