from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from pathpoly import families as fam
from pathpoly import lab
from pathpoly.core import COMPLETE, Digraph, Inequality
from pathpoly.enumeration import path_sequences, seq_arcs
from pathpoly.linalg import determinant, solve
from pathpoly.polyhedron import enumerate_vertices


def test_validity_reports():
    d, p = Digraph(6), 4
    assert lab.check_validity(fam.gen_min_cut(d, (0, 1, 6)), d, p).valid
    rep = lab.check_validity(fam.gen_min_cut(d, (0, 1, 2, 3, 6)), d, p)
    assert not rep.valid
    assert set(rep.violator) <= {0, 1, 2, 3, 6}
    zero = lab.check_validity(Inequality({}, "<=", 0), d, p)
    assert zero.valid and zero.tight_count == zero.checked == len(path_sequences(d, p))


def test_facet_reports():
    d, p = Digraph(6), 4
    assert lab.check_facet(fam.gen_degree(d, 1), d, p).is_facet
    slack = lab.check_facet(Inequality({a: 1 for a in d.out_arcs(1)}, "<=", 2), d, p)
    assert slack.valid and slack.tight_count == 0 and not slack.is_facet
    os_small = fam.gen_one_sided_min_cut(d, (0, 1, 2, 6), 3)
    assert not lab.check_facet(os_small, d, p).is_facet


def test_facet_report_text_is_exact():
    d = Digraph(5)
    lines = lab.check_facet(fam.gen_extra_p4(d), d, 4).lines()
    assert "valid: false" in lines and "violation: 2/1" in lines


@pytest.mark.parametrize("n, p, mode, want", [(6, 4, "restricted", 23), (6, 3, COMPLETE, 19),
                                             (6, 2, COMPLETE, 4)])
def test_polytope_dimension(n, p, mode, want):
    assert lab.polytope_dimension(Digraph(n, mode), p) == want == lab.expected_dimension(n, p)


def test_listed_equations_hold():
    d = Digraph(5, COMPLETE)
    for p in (1, 2, 3):
        eqs, les = lab.table1_system(d, p)
        for s in path_sequences(d, p):
            arcs = seq_arcs(s)
            assert all(q.lhs_on(arcs) == q.rhs for q in eqs)
            assert all(q.satisfied({a: 1 for a in arcs}) for q in les)
    assert len(path_sequences(d, 1)) == 1


@pytest.mark.parametrize("p", [1, 2, 3])
def test_table1_small(p):
    rep = lab.verify_table1(4, p)
    assert rep.passed, rep.lines()


def test_regularity_verdicts():
    d6 = Digraph(6)
    odd = fam.gen_gen_max_cut(d6, (), (0, 1, 2, 6), (3, 4, 5), 5)
    assert lab.check_regularity(odd, d6, 5) == "regular"
    assert lab.check_regularity(fam.gen_nonneg(d6, (1, 2)), d6, 4) == "not-regular"
    assert lab.check_regularity(fam.gen_broom(d6, 1, 2, 2), d6, 4) == "not-regular"


def test_clone_preconditions():
    d6 = Digraph(6)
    odd = fam.gen_gen_max_cut(d6, (), (0, 1, 2, 6), (3, 4, 5), 5)
    assert all(lab.check_T8_preconditions(odd, d6, 5, k).bowties_ok for k in d6.internal)
    zero = lab.check_T8_preconditions(Inequality({}, "<=", 0), d6, 4, 2, need_facet=False)
    assert zero.ok and zero.delta_k == 0
    d9 = Digraph(9)
    jump = fam.gen_jump(d9, [(0,)] + [(i, 4 + i) for i in range(1, 5)] + [(9,)])
    assert all(lab.check_T8_preconditions(jump, d9, 4, k, need_facet=False).bowties_ok for k in d9.internal)
    bad = lab.check_T8_preconditions(fam.gen_card_path(d6, (1, 2, 3, 4)), d6, 4, 1)
    assert not bad.ok and bad.bowtie_violator is not None


def test_set_lift_preconditions():
    d6 = Digraph(6)
    odd = fam.gen_gen_max_cut(d6, (), (0, 1, 2, 6), (3, 4, 5), 5)
    rep = lab.check_T9_preconditions(odd, d6, 5)
    assert rep.ok and rep.gz_connected
    neg = lab.check_T9_preconditions(fam.gen_card_path(d6, (1, 2, 3, 4)), d6, 4)
    assert not neg.nonnegative and not neg.ok
    assert lab.auxiliary_graph_connected(d6, d6.arcs)
    zero = lab.check_T9_preconditions(Inequality({}, "<=", 0), d6, 4, need_facet=False)
    assert zero.gz_connected


def test_relaxed_dimensions():
    d = Digraph(6)
    assert lab.relaxed_dimension(d, 4, "lower") == 24
    assert lab.relaxed_dimension(d, 4, "upper") == 24
    with pytest.raises(ValueError):
        lab.relaxed_lengths(d, 4, "sideways")


def test_agreement_rules():
    V = fam.Verdict
    assert lab.agrees(V.UNKNOWN, False)
    assert lab.agrees(V.SUFFICIENT, True) and not lab.agrees(V.SUFFICIENT, False)
    assert not lab.agrees(V.TRUE, False) and lab.agrees(V.FALSE, False)


def brute_vertices(rows, rhs, dim):
    out = set()
    for idx in combinations(range(len(rows)), dim):
        m = [rows[i] for i in idx]
        if determinant(m) == 0:
            continue
        x = solve(m, [rhs[i] for i in idx])
        if all(sum(a * b for a, b in zip(r, x)) <= c for r, c in zip(rows, rhs)):
            out.add(tuple(x))
    return out


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3), st.lists(st.tuples(st.lists(st.integers(-3, 3), min_size=3, max_size=3),
                                             st.integers(0, 4)), max_size=4))
def test_vertex_enumeration_matches_brute_force(dim, cuts):
    rows, rhs = [], []
    for i in range(dim):
        e = [Fraction(int(i == j)) for j in range(dim)]
        rows += [e, [-v for v in e]]
        rhs += [Fraction(2), Fraction(0)]
    for coeffs, b in cuts:
        rows.append([Fraction(c) for c in coeffs[:dim]])
        rhs.append(Fraction(b))
    info = enumerate_vertices([], [], rows, rhs, dim)
    want = brute_vertices(rows, rhs, dim)
    if not want:
        assert info.empty or not info.vertices
    else:
        assert {tuple(v) for v in info.vertices} == want
