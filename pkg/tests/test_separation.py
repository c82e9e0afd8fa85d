import random
from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from pathpoly import families as fam
from pathpoly.core import Digraph
from pathpoly.enumeration import path_sequences, seq_arcs
from pathpoly.separation import (FractionalPoint, separate_all, separate_card_path, separate_min_cut,
                                 separate_one_sided_min_cut, separate_partition_families, separate_trivial)
from support import random_point

HALF = F(1, 2)


def path_point(d, seq, w=1):
    return FractionalPoint.from_arcs(d, seq_arcs(seq), w)


def test_path_point_has_no_cuts():
    d = Digraph(6)
    x = path_point(d, (0, 2, 4, 1, 6))
    assert len(separate_all(x, 4)) == 0


def test_negative_entry_is_reported():
    d = Digraph(5)
    x = FractionalPoint(d, {**path_point(d, (0, 1, 2, 5)).values, (3, 4): -HALF})
    found = dict(separate_trivial(x, 3).found)
    assert found[fam.gen_nonneg(d, (3, 4))] == HALF


def test_degree_overflow():
    d = Digraph(6)
    x = path_point(d, (0, 1, 2, 3, 6)) + FractionalPoint.from_arcs(d, [(1, 4), (4, 1)], HALF)
    found = {q: v for q, v in separate_trivial(x, 4).found}
    assert found[fam.gen_degree(d, 1)] == HALF


def test_half_half_paths():
    d = Digraph(6)
    x = path_point(d, (0, 1, 2, 3, 6), HALF) + path_point(d, (0, 4, 5, 2, 6), HALF)
    assert len(separate_one_sided_min_cut(x)) == 0
    assert len(separate_all(x, 4)) == 0


def test_path_plus_two_cycle():
    d = Digraph(6)
    x = path_point(d, (0, 1, 6)) + FractionalPoint.from_arcs(d, [(2, 3), (3, 2)])
    assert x.violated_equations(4) == []
    found = {q.params["l"]: (q, v) for q, v in separate_one_sided_min_cut(x).found}
    q, v = found[2]
    assert q.params["S"] == (0, 1, 4, 5, 6) and v == 1


def test_min_cut_exhaustive_and_none_on_paths():
    d = Digraph(6)
    x = path_point(d, (0, 1, 2, 3, 6), HALF) + path_point(d, (0, 3, 2, 1, 6), HALF)
    res = separate_min_cut(x, 4)
    assert res.exhaustive["min_cut"] and len(res) == 0


def test_min_cut_trapped_weight():
    # all weight routed inside S = {0,1,2,6} via a 3-path, so its cut is 0
    d = Digraph(6)
    x = path_point(d, (0, 1, 2, 6))
    found = {q.params["S"]: v for q, v in separate_min_cut(x, 4).found}
    assert found[(0, 1, 2, 6)] == 1


def test_min_cut_budget_fallback():
    d = Digraph(30)
    x = path_point(d, (0, 1, 2, 30))
    res = separate_min_cut(x, 10)
    assert res.exhaustive["min_cut"] is False
    assert all(v > 0 for _, v in res.found)


def planted_max_cut():
    # walk 0,3,1,4,2,5 crosses S:T three times; mixing with 0,3,5 keeps 4 arcs on average
    d = Digraph(5)
    x = path_point(d, (0, 3, 1, 4, 2, 5), F(2, 3)) + path_point(d, (0, 3, 5), F(1, 3))
    return d, x


def test_planted_max_cut_by_direct_evaluation():
    d, x = planted_max_cut()
    assert x.violated_equations(4) == []
    q = fam.gen_gen_max_cut(d, (), (0, 1, 2), (3, 4, 5), 4)
    assert q.violation(x.values) == F(1, 3)


def test_planted_max_cut_found_by_local_search():
    d, x = planted_max_cut()
    hits = 0
    for seed in range(100):
        res = separate_partition_families(x, 4, seed=seed, exhaustive=False)
        assert res.exhaustive["gen_max_cut"] is False
        hits += any(q.family == "gen_max_cut" and v >= F(1, 4) for q, v in res.found)
    assert hits >= 90


def _best_max_cut(res):
    return max((v for q, v in res.found if q.family == "gen_max_cut"), default=F(0))


@pytest.mark.parametrize("seed", range(8))
def test_local_search_matches_sweep_at_n5(seed):
    rng = random.Random(seed)
    d = Digraph(5)
    x = random_point(rng, d, 4, cycle_weight=F(1, 2))
    full = separate_partition_families(x, 4, seed=seed, exhaustive=True)
    heur = separate_partition_families(x, 4, seed=seed, exhaustive=False)
    assert _best_max_cut(heur) == _best_max_cut(full)


def test_card_path_planted():
    d = Digraph(6)
    x = FractionalPoint(d, {(1, 2): HALF, (2, 3): HALF, (3, 4): HALF})
    res = separate_card_path(x, 4)
    assert res.exhaustive["card_path"]
    assert dict(res.found)[fam.gen_card_path(d, (1, 2, 3, 4))] == HALF
    assert res.best[1] == HALF
    assert separate_card_path(x, 4, exhaustive=False).best[1] == HALF


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_card_path_heuristic_is_subset(seed):
    rng = random.Random(seed)
    d = Digraph(6)
    x = random_point(rng, d, 4)
    full = dict(separate_card_path(x, 4).found)
    for q, v in separate_card_path(x, 4, exhaustive=False).found:
        assert full[q] == v


@settings(max_examples=40, deadline=None)
@given(st.integers(5, 7), st.integers(0, 10 ** 6))
def test_every_report_is_violated(n, seed):
    rng = random.Random(seed)
    d = Digraph(n)
    p = rng.choice(range(3, n))
    x = random_point(rng, d, p)
    res = separate_all(x, p, seed=seed)
    for q, v in res.found:
        assert v > 0 and q.violation(x.values) == v
    assert [v for _, v in res.found] == sorted((v for _, v in res.found), reverse=True)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_empty_exhaustive_min_cut_is_honest(seed):
    rng = random.Random(seed)
    d, p = Digraph(6), 4
    x = random_point(rng, d, p, cycle_weight=0)
    res = separate_min_cut(x, p)
    assert res.exhaustive["min_cut"]
    brute = [S for k in (1, 2) for S in combinations(d.internal, k)
             if x.total(d.cut((0, *S, 6), [v for v in d.nodes if v not in (0, *S, 6)])) < 1]
    assert bool(brute) == bool(len(res))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_convex_combinations_are_clean(seed):
    rng = random.Random(seed)
    d, p = Digraph(6), 4
    x = random_point(rng, d, p, cycle_weight=0)
    assert len(separate_all(x, p, seed=seed)) == 0


def test_determinism():
    rng = random.Random(5)
    d = Digraph(7)
    x = random_point(rng, d, 5)
    a = separate_partition_families(x, 5, seed=3, exhaustive=False).lines()
    b = separate_partition_families(x, 5, seed=3, exhaustive=False).lines()
    assert a == b


def test_point_rejects_foreign_arcs():
    with pytest.raises(ValueError):
        FractionalPoint(Digraph(4), {(4, 0): 1})
