import io
import json

import pytest

from pathpoly.cli import INPUT_ERROR, OK, VIOLATED, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_dim():
    assert call("dim", "--n", "6", "--p", "4") == (OK, "23\n", "")


def test_udim():
    code, out, _ = call("dim", "--n", "6", "--p", "4", "--undirected")
    assert code == OK and out == "17\n"


def test_enumerate_header_and_rows():
    code, out, _ = call("enumerate", "--n", "3", "--p", "2")
    lines = out.splitlines()
    assert code == OK and lines[0] == "# arcs: 0-1 0-2 1-2 1-3 2-1 2-3"
    assert sorted(lines[1:]) == ["010001", "100100"]


def test_enumerate_cycles():
    code, out, _ = call("enumerate", "--n", "4", "--p", "2", "--cycles")
    assert code == OK and len(out.splitlines()) == 1 + 6


def test_table1():
    code, out, _ = call("table1", "--n", "5", "--p", "3")
    assert code == OK and "FAIL" not in out


def test_verify_agreement():
    code, out, _ = call("verify", "--n", "6", "--p", "4", "mincut", "S=0,1,6")
    assert code == OK and out.rstrip().endswith("agreement: yes")


def test_verify_extra4_disagrees():
    code, out, _ = call("verify", "--n", "6", "--p", "4", "extra4")
    assert code == VIOLATED
    assert "valid: false" in out and "agreement: NO" in out


def test_verify_file(tmp_path):
    code, out, _ = call("lift", "--n", "6", "--p", "4", "--to", "cycle", "degree", "j=2")
    record = [l for l in out.splitlines() if l.startswith("record: ")][0][len("record: "):]
    f = tmp_path / "row.json"
    f.write_text("[" + record + "]")
    code, out, _ = call("verify", "--n", "6", "--p", "4", "--mode", "complete", "--file", str(f))
    assert "valid: true" in out


def test_unknown_family():
    code, _, err = call("verify", "--n", "6", "--p", "4", "bogus")
    assert code == INPUT_ERROR and "unknown family" in err


def test_bad_argument():
    code, _, err = call("dim", "--n", "six", "--p", "4")
    assert code == INPUT_ERROR


def test_uverify():
    code, out, _ = call("uverify", "--n", "6", "--p", "4", "udegree", "j=2")
    assert code == OK and "is_facet: true" in out


def test_sweep_is_stable():
    args = ("sweep", "--n", "6", "--p", "4", "--family", "mincut")
    first, second = call(*args), call(*args)
    assert first[0] == OK and first == second
    assert first[1].splitlines()[0] == "params | pred_valid | valid | pred_facet | facet | agree"
    assert first[1].rstrip().endswith("disagreements: 0")


def test_solve(tmp_path):
    f = tmp_path / "inst.txt"
    f.write_text("5 3 restricted\n0 1 2\n1 2 -1\n# comment\n")
    code, out, _ = call("solve", str(f), "--audit")
    assert code == OK
    assert "status: optimal" in out and "value: 0/1" in out


def test_solve_parse_error(tmp_path):
    f = tmp_path / "inst.txt"
    f.write_text("5 3 restricted\n0 1 x\n")
    code, _, err = call("solve", str(f))
    assert code == INPUT_ERROR and "line 2, column 5" in err


def test_separate(tmp_path):
    f = tmp_path / "pt.txt"
    f.write_text("0 1 1\n1 6 1\n2 3 1\n3 2 1\n")
    code, out, _ = call("separate", str(f), "--n", "6", "--p", "4")
    assert code == OK
    assert "one_sided_min_cut {'S': (0, 1, 4, 5, 6), 'l': 2} violation 1/1" in out


def test_lift_clone():
    code, out, _ = call("lift", "--n", "5", "--p", "4", "--to", "clone:2", "degree", "j=1")
    assert code == OK and "is_facet: true" in out
    rec = json.loads(out.split("record: ")[1].splitlines()[0])
    assert rec["family"] == "clone_lift"


def test_lift_refused_by_hypotheses():
    code, out, _ = call("lift", "--n", "6", "--p", "4", "--to", "clone:2", "degree", "j=2")
    assert code == INPUT_ERROR and "lift refused" in out and "bowties_ok: False" in out


def test_cycle_lift_of_non_facet_is_flagged():
    # S holds every node but one, so this is a flow row; its cycle image is invalid
    code, out, _ = call("lift", "--n", "6", "--p", "4", "--to", "cycle", "mincut", "S=0,1,2,3,4,6")
    assert code == VIOLATED and "valid: false" in out
