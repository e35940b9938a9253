import json

import pytest

from umps.arith import nth_root_of_minus_one
from umps.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out)


def test_eval_one_by_one(tmp_path, capsys):
    f = tmp_path / "t.json"
    f.write_text('{"matrices": [[["2"]], [["3"]]]}')
    code, rep = report(capsys, "eval", str(f), "3")
    assert code == 0
    assert rep["result"]["coords"] == {"000": "8", "001": "12", "011": "18", "111": "27"}
    assert rep["seed"] == 0 and rep["verdict"] == "PASS"


def test_eval_wstate_tuple_file(tmp_path, capsys):
    # the complex W-state family at lam = 1, written out as a tuple file
    z = nth_root_of_minus_one(4)
    mats = [[["1", "0"], ["0", repr(z)]], [["1", "0"], ["0", repr(-z)]]]
    f = tmp_path / "w.json"
    f.write_text(json.dumps({"matrices": mats}))
    code, rep = report(capsys, "eval", str(f), "4")
    assert code == 0
    assert abs(complex(rep["result"]["coords"]["0001"]) - 2) < 1e-12


def test_eval_family(capsys):
    code, rep = report(capsys, "eval", "--family", "wstate(4)", "--lam", "1")
    assert rep["result"]["coords"]["0001"] == "2.0"
    code, rep = report(capsys, "eval", "--family", "e012", "--lam", "1/2")
    assert rep["result"]["coords"]["000"] == "1/64" and rep["result"]["coords"]["012"] == "1"


def test_eval_malformed(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text('{"matrices": [[["2"]], [["3"]]')
    code, out, err = run(capsys, "eval", str(f), "3")
    assert code == 2 and out == ""
    assert "line 1, column" in err


def test_identical_runs_are_byte_identical(capsys):
    _, a, _ = run(capsys, "limits", "e012")
    _, b, _ = run(capsys, "limits", "e012")
    assert a == b
    _, c, _ = run(capsys, "limits", "e012", "--timing")
    assert "wall_time_s" in json.loads(c) and "wall_time_s" not in json.loads(a)


def test_limits_grid_and_exit_codes(capsys):
    code, rep = report(capsys, "limits", "e012", "--grid", "0.1,0.01,0.001")
    assert code == 0 and abs(rep["result"]["slope"] - 6) < 0.01
    code, out, err = run(capsys, "limits", "e012", "--grid", "0.1,0.2,0.3")
    assert code == 2


def test_certify(capsys):
    code, rep = report(capsys, "certify", "wstate", "5")
    assert code == 0 and rep["result"]["groebner_basis"] == [["1"], ["1"]]
    code, rep = report(capsys, "certify", "wstate", "3")
    assert code == 1 and rep["verdict"] == "FAIL"


def test_membership(capsys):
    code, rep = report(capsys, "membership", "--coords", "0011=1,0101=sqrt2", "--expect", "boundary")
    assert code == 0
    assert rep["result"]["in_closure"] is True and rep["result"]["in_set"] is False
    code, _ = report(capsys, "membership", "--coords", "0101=1", "--expect", "boundary")
    assert code == 1


def test_membership_point_file(tmp_path, capsys):
    f = tmp_path / "p.json"
    f.write_text('{"N": 4, "d": 2, "coords": {"0101": "1"}}')
    code, rep = report(capsys, "membership", "--point", str(f), "--expect", "member")
    assert code == 0


def test_fiber(capsys):
    code, out, err = run(capsys, "fiber", "5", "--format", "text")
    assert code == 0
    assert out.splitlines()[0] == "dim 0, degree 5, matches N: true"


def test_implicitize_text(capsys):
    code, out, _ = run(capsys, "implicitize", "2", "2", "4", "--bound", "6", "--format", "text")
    assert code == 0
    assert out.splitlines()[0] == "1 generator up to degree 6: 1 in degree 6, matches golden f224: true"


def test_implicitize_expect(capsys):
    code, _, _ = run(capsys, "implicitize", "2", "2", "6", "--bound", "1", "--expect", "1:1")
    assert code == 0
    code, _, _ = run(capsys, "implicitize", "2", "2", "6", "--bound", "1", "--expect", "1:2")
    assert code == 1


def test_bad_prime(capsys):
    code, _, err = run(capsys, "fiber", "5", "--prime", "1000")
    assert code == 2 and "prime" in err


def test_table_small(capsys):
    code, rep = report(capsys, "table", "--dmax", "2", "--nmax", "5")
    assert code == 0
    cells = {(c["D"], c["N"]): c for c in rep["result"]["cells"]}
    assert cells[(2, 5)]["computed"] == "N"
    assert cells[(1, 4)]["computed"] == "C"
    assert cells[(2, 3)]["computed"] == cells[(2, 3)]["published"] == "F"
    assert [cells[(1, N)]["ambient"] for N in range(1, 6)] == [2, 3, 4, 6, 8]


def test_table_csv_and_row_label_flag(capsys):
    code, out, _ = run(capsys, "table", "--dmax", "4", "--nmax", "4", "--format", "csv")
    lines = out.splitlines()
    assert lines[0].startswith("D,N,ambient")
    row = next(l for l in lines if l.startswith("4,4,"))
    assert ",27,True," in row


def test_csv_only_for_table(capsys):
    code, _, _ = run(capsys, "limits", "e012", "--format", "csv")
    assert code == 2


def test_out_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, stdout, _ = run(capsys, "span", "2", "2", "6", "--out", str(out))
    assert code == 0 and stdout == ""
    assert json.loads(out.read_text())["result"]["span_dim"] == 13


def test_identity_and_trivial(capsys):
    code, rep = report(capsys, "identity", "110010", "110100")
    assert code == 0 and rep["result"]["identity"] is True
    code, rep = report(capsys, "trivial", "5", "1", "7")
    assert rep["result"]["reason"] == "full space"


def test_surjectivity_needs_input(capsys):
    code, _, err = run(capsys, "surjectivity")
    assert code == 2
