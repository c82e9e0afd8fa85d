from fractions import Fraction

import pytest

from pathpoly import families as fam
from pathpoly import lab
from pathpoly import undirected as und
from pathpoly.core import Digraph, Inequality
from pathpoly.enumeration import cycle_sequences, path_sequences, seq_arcs
from pathpoly.lifting import (LiftError, clone_node_lift, contract_arc, delete_node, is_pseudo_symmetric,
                              lift_to_cycle, relax_lift, set_lift, symmetrize, to_undirected)


def test_cycle_lift_of_negative_arc():
    d, p = Digraph(6), 4
    q = Inequality({(1, 2): -1}, "<=", 0)
    big, dn = lift_to_cycle(q, d, p)
    assert big.params["gamma"] == "0/1"
    assert big.coeffs == {(1, 2): -1} and big.rhs == 0
    assert dn.n + 1 == 6


def test_cycle_lift_matches_original_on_paths():
    d, p = Digraph(6), 4
    q = fam.gen_card_path(d, (1, 2, 3, 4))
    big, dn = lift_to_cycle(q, d, p)
    leq = q.as_leq()
    for s in path_sequences(d, p):
        cyc = [contract_arc(d, a) for a in seq_arcs(s)]
        assert leq.rhs - leq.lhs_on(seq_arcs(s)) == big.rhs - big.lhs_on(cyc)
    # every p-cycle satisfies the lift, including those avoiding the merged node
    assert all(big.lhs_on(list(zip(c, c[1:] + c[:1]))) <= big.rhs for c in cycle_sequences(dn, p))


@pytest.mark.parametrize("make", [
    lambda d: fam.gen_nonneg(d, (2, 3)),
    lambda d: fam.gen_degree(d, 2),
    lambda d: fam.gen_min_cut(d, (0, 1, 2, 6)),
    lambda d: fam.gen_one_sided_min_cut(d, (0, 1, 2, 3, 6), 4),
])
def test_cycle_lift_keeps_facets(make):
    d, p = Digraph(6), 4
    big, dn = lift_to_cycle(make(d), d, p)
    rep = lab.check_cycle_facet(big, dn, p)
    assert rep.polytope_dim == 24 and rep.is_facet


def test_clone_card_path_off_path():
    d, p = Digraph(6), 4
    q, big = clone_node_lift(fam.gen_card_path(d, (1, 2, 3, 4)), d, p, 5)
    assert big.n == 7 and lab.check_facet(q, big, p).is_facet
    with pytest.raises(LiftError):
        clone_node_lift(fam.gen_card_path(d, (1, 2, 3, 4)), d, p, 1)


def test_clone_degree_row():
    d = Digraph(5)
    q, big = clone_node_lift(fam.gen_degree(d, 1), d, 4, 2)
    assert lab.check_facet(q, big, 4).is_facet


def test_clone_jump_grows_a_block():
    d = Digraph(9)
    jump = fam.gen_jump(d, [(0,)] + [(i, 4 + i) for i in range(1, 5)] + [(9,)])
    q, big = clone_node_lift(jump, d, 4, 1)
    assert lab.check_facet(q, big, 4).is_facet
    # the clone (label 9) behaves like node 1, so the lift is the jump row with block {1, 5, 9}
    bigger = fam.gen_jump(big, [(0,), (1, 5, 9), (2, 6), (3, 7), (4, 8), (10,)])
    assert q.as_leq().coeffs == bigger.as_leq().coeffs


def test_clone_then_delete_restores():
    d = Digraph(6)
    src = fam.gen_card_path(d, (1, 2, 3, 4))
    q, big = clone_node_lift(src, d, 4, 5)
    back, small = delete_node(q, big, 6)
    assert small == d and back.coeffs == src.as_leq().coeffs


def test_set_lift_odd_max_cut():
    d = Digraph(6)
    base = fam.gen_gen_max_cut(d, (), (0, 1, 2, 6), (3, 4, 5), 5)
    q, big = set_lift(base, d, 5, (1,))
    assert q.params["t"] == "1/1" and q.rhs == 3
    assert lab.check_facet(q, big, 6).is_facet
    target = fam.gen_gen_max_cut(big, (1,), (0, 2, 3, 7), (4, 5, 6), 6)
    assert q.coeffs == target.coeffs and q.rhs == target.rhs


def test_set_lift_even_max_cut():
    d = Digraph(5)
    base = fam.gen_gen_max_cut(d, (), (0, 1, 2), (3, 4, 5), 4)
    q, big = set_lift(base, d, 4, (1,))
    target = fam.gen_gen_max_cut(big, (1,), (0, 2, 3), (4, 5, 6), 5)
    assert q.coeffs == target.coeffs and q.rhs == target.rhs
    assert lab.check_facet(q, big, 5).is_facet


def test_set_lift_zero_row():
    d = Digraph(6)
    q, _ = set_lift(Inequality({}, "<=", 0), d, 4, (2,), check=False)
    assert q.params["t"] == "0/1"


def test_set_lift_rejects_negative_coefficients():
    d = Digraph(6)
    with pytest.raises(LiftError):
        set_lift(fam.gen_card_path(d, (1, 2, 3, 4)), d, 4, (1,))


def test_relax_lift_min_cut():
    d, p = Digraph(6), 4
    S = (0, 1, 2, 6)
    low = relax_lift(fam.gen_min_cut(d, S), d, p, "lower")
    assert low.params["mu"] == "1/1" and low.rhs == p - 1
    cut = set(d.cut(S, [3, 4, 5]))
    assert all(low.coeff(a) == (0 if a in cut else 1) for a in d.arcs)
    assert lab.check_relaxed_facet(low, d, p, "lower").is_facet
    up = relax_lift(fam.gen_min_cut(d, S), d, p, "upper")
    assert up.params["mu"] == "0/1" and lab.check_relaxed_facet(up, d, p, "upper").is_facet


def test_relax_lift_small_min_cut_needs_half():
    d = Digraph(6)
    low = relax_lift(fam.gen_min_cut(d, (0, 1, 6)), d, 4, "lower")
    assert low.params["mu"] == "1/2"


def test_relax_lift_degree_and_degenerate():
    d = Digraph(6)
    assert relax_lift(fam.gen_degree(d, 1), d, 4, "lower").params["mu"] == "0/1"
    with pytest.raises(LiftError):
        relax_lift(Inequality({}, "<=", 0), d, 4, "lower")
    with pytest.raises(ValueError):
        relax_lift(fam.gen_degree(d, 1), d, 4, "middle", check=False)


def test_undirected_degree_and_min_cut():
    d, p = Digraph(6), 4
    g = und.UGraph(6)
    deg = to_undirected(fam.gen_degree(d, 2), d, p)
    assert deg.coeffs == {e: 1 for e in g.delta(2)} and deg.rhs == 2
    assert und.check_ufacet(deg, g, p).is_facet
    mc = to_undirected(fam.gen_min_cut(d, (0, 1, 6)), d, p)
    assert mc.sense == ">=" and mc.rhs == 2
    assert und.check_ufacet(mc, g, p).is_facet


def test_undirected_refuses_jump():
    d = Digraph(9)
    jump = fam.gen_jump(d, [(0,)] + [(i, 4 + i) for i in range(1, 5)] + [(9,)])
    assert not is_pseudo_symmetric(jump, d)
    assert to_undirected(jump, d, 4) is None


def test_symmetrize_keeps_tight_paths():
    d, p = Digraph(6), 4
    q = fam.gen_min_cut(d, (0, 1, 6))
    sym = symmetrize(q, d)
    assert sym is not None and all(i < j for i, j in sym.coeffs)
    for s in path_sequences(d, p):
        arcs = seq_arcs(s)
        edges = [(min(a), max(a)) for a in arcs]
        assert (q.lhs_on(arcs) == q.rhs) == (sym.lhs_on(edges) == sym.rhs)


@pytest.mark.parametrize("p", [4, 5])
def test_mapped_facets_are_undirected_facets(p):
    d, g = Digraph(6), und.UGraph(6)
    rows = list(fam.iter_degree(d)) + list(fam.iter_min_cuts(d)) + list(fam.iter_one_sided_min_cuts(d))
    rows += list(fam.iter_gen_max_cuts(d, p, max_r=0))
    mapped = 0
    for q in rows:
        if not lab.check_facet(q, d, p).is_facet:
            continue
        u = to_undirected(q, d, p)
        if u is None:
            continue
        mapped += 1
        assert und.check_ufacet(u, g, p).is_facet, q.params
    assert mapped > 0
