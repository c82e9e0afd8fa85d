from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pathpoly.core import (COMPLETE, Digraph, IncidenceVector, Inequality, Instance, NodePartition, arc_index,
                           as_fraction, is_cycle_arcs, is_path_arcs, split_bowtie)
from pathpoly.formats import (ParseError, dumps_inequalities, format_instance, format_point, loads_inequalities,
                              parse_instance, parse_point)


def brute_arcs(n, mode):
    arcs = []
    for i in range(n + 1):
        for j in range(n + 1):
            if i == j:
                continue
            if mode == "restricted" and (j == 0 or i == n or (i, j) == (0, n)):
                continue
            arcs.append((i, j))
    return arcs


@pytest.mark.parametrize("n", range(2, 9))
@pytest.mark.parametrize("mode", ["restricted", "complete"])
def test_arc_set_matches_construction(n, mode):
    d = Digraph(n, mode)
    assert list(d.arcs) == brute_arcs(n, mode)
    assert len(d) == (n * n - n if mode == "restricted" else (n + 1) * n)


def test_small_digraphs():
    assert len(Digraph(4)) == 12
    assert Digraph(2).arcs == ((0, 1), (1, 2))
    assert len(Digraph(4, COMPLETE)) == 20


def test_arc_index_lookup():
    d = Digraph(4)
    assert arc_index(d, 0, 4) is None
    assert arc_index(d, 1, 0) is None
    assert arc_index(d, 0, 1) == 0
    assert all(arc_index(d, *a) == k for k, a in enumerate(d.arcs))


def test_digraph_rejects_bad_input():
    with pytest.raises(ValueError):
        Digraph(1)
    with pytest.raises(ValueError):
        Digraph(4, "sparse")
    with pytest.raises(ValueError):
        Digraph(4, costs={(0, 4): 1})


def test_digraph_equality_ignores_costs():
    assert Digraph(5) == Digraph(5, costs={(0, 1): 3})
    assert hash(Digraph(5)) == hash(Digraph(5))
    assert Digraph(5) != Digraph(5, COMPLETE)


def test_floats_refused():
    with pytest.raises(TypeError):
        as_fraction(0.5)
    assert as_fraction("3/4") == Fraction(3, 4)


def test_incidence_vector_kinds():
    d = Digraph(4)
    v = IncidenceVector.from_nodes(d, (0, 2, 1, 4))
    assert v.arcs == [(0, 2), (1, 4), (2, 1)]
    assert v.bitstring().count("1") == 3
    with pytest.raises(ValueError):
        IncidenceVector.from_arcs(d, [(0, 1), (2, 4)], "path")
    bt = IncidenceVector.from_arcs(d, [(0, 1), (1, 4), (1, 2), (2, 1)], "bowtie")
    assert len(bt) == 4


def test_path_cycle_bowtie_predicates():
    assert is_path_arcs([(0, 1), (1, 3)], 0, 3)
    assert not is_path_arcs([(0, 1), (1, 2), (2, 1)], 0, 1)
    assert is_cycle_arcs([(1, 2), (2, 1)])
    assert not is_cycle_arcs([(1, 2), (2, 3)])
    split = split_bowtie([(0, 1), (1, 3), (1, 2), (2, 1)], 0, 3)
    assert split is not None and split[2] == 1
    assert split_bowtie([(0, 1), (1, 3), (2, 4), (4, 2)], 0, 3) is None


def test_inequality_normalisation():
    q = Inequality({(1, 2): 2, (0, 1): 0}, ">=", 1)
    assert q.coeffs == {(1, 2): Fraction(2)}
    assert q.as_leq().coeffs == {(1, 2): Fraction(-2)} and q.as_leq().rhs == -1
    assert q.scaled(Fraction(1, 2)) == Inequality({(1, 2): 1}, ">=", Fraction(1, 2))
    with pytest.raises(ValueError):
        q.scaled(-1)
    with pytest.raises(ValueError):
        Inequality({}, "<", 0)
    assert q.violation({(1, 2): Fraction(1, 4)}) == Fraction(1, 2)


def test_node_partition_rejects_overlap():
    with pytest.raises(ValueError):
        NodePartition({"S": {0, 1}, "T": {1, 2}})
    part = NodePartition({"S": {0, 1}, "T": {2, 3}})
    assert part.covers(range(4))


def test_instance_text_roundtrip():
    text = "5 4 restricted\n0 1 -3/2\n# comment\n2 5 7\n"
    inst = parse_instance(text)
    assert inst.cost((0, 1)) == Fraction(-3, 2) and inst.cost((1, 2)) == 0
    assert parse_instance(format_instance(inst)) == inst


@pytest.mark.parametrize("text, line, col", [
    ("", 1, 1),
    ("5 4\n", 1, 1),
    ("5 4 sparse\n", 1, 5),
    ("5 4 restricted\n0 5 1\n", 2, 1),
    ("5 4 restricted\n0 1 0.5\n", 2, 5),
    ("5 4 restricted\n0 1 1\n0  1 2\n", 3, 1),
    ("5 4 restricted\n0 x 1\n", 2, 3),
])
def test_instance_parse_errors_carry_position(text, line, col):
    with pytest.raises(ParseError) as info:
        parse_instance(text)
    if text:
        assert (info.value.line, info.value.col) == (line, col)


def test_point_roundtrip():
    d = Digraph(4)
    x = parse_point("0 1 1/2\n1 4 1/2\n", d)
    assert parse_point(format_point(x), d) == x


fractions = st.fractions(max_denominator=20).filter(lambda q: abs(q) < 50)


@st.composite
def inequalities(draw):
    d = Digraph(draw(st.integers(2, 6)))
    arcs = draw(st.lists(st.sampled_from(d.arcs), unique=True, max_size=8))
    coeffs = {a: draw(fractions) for a in arcs}
    return Inequality(coeffs, draw(st.sampled_from(["<=", ">=", "=="])), draw(fractions), "custom",
                      {"tag": draw(st.integers(0, 9))})


@given(st.lists(inequalities(), max_size=4))
def test_inequality_records_roundtrip(ineqs):
    back = loads_inequalities(dumps_inequalities(ineqs))
    assert [(q.coeffs, q.sense, q.rhs, q.family) for q in back] == \
           [(q.coeffs, q.sense, q.rhs, q.family) for q in ineqs]


def test_malformed_record_rejected():
    with pytest.raises(ValueError):
        loads_inequalities('[{"coeffs": [[0, 1, 1, 0]], "sense": "<=", "rhs_num": 1, "rhs_den": 1}]')
    with pytest.raises(ParseError):
        loads_inequalities("[{")


def test_instance_validates_arcs_and_p():
    with pytest.raises(ValueError):
        Instance(Digraph(4), 5, {})
    with pytest.raises(ValueError):
        Instance(Digraph(4), 3, {(4, 1): 1})
