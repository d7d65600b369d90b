import json
from pathlib import Path

import pytest

from orbimilnor.cli import main

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json", "--no-timing")
    return code, json.loads(out)


def test_analyze_report_shape(capsys):
    code, rep = run_json(capsys, "analyze", "-W", "x^2+y^6")
    assert code == 0 and rep["schema"] == 1 and rep["status"] == "ok"
    assert rep["command"] == {"name": "analyze", "args": {"W": "x^2+y^6"}}
    (poly,) = rep["result"]["polynomials"]
    assert poly["weights"] == ["1/2", "1/6"]
    assert poly["G_max"]["order"] == 12
    assert "timing" not in rep


def test_reports_are_deterministic(capsys):
    argv = ("bmodel", "-W", "x^2+y^6", "--group", "1/2,1/2", "--json", "--no-timing")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_milnor_report(capsys):
    code, rep = run_json(capsys, "milnor", "-W", "x^4+y^4")
    (poly,) = rep["result"]["polynomials"]
    assert code == 0 and poly["mu"] == 9 and poly["c_hat"] == "1"
    assert len(poly["basis"]) == 9


def test_bmodel_dimension(capsys):
    code, rep = run_json(capsys, "bmodel", "-W", "x^2+y^6", "--group", "1/2,1/2")
    assert code == 0
    assert rep["result"]["polynomials"][0]["dim"] == 4


def test_text_output_mentions_status(capsys):
    code, out, _ = run(capsys, "symmetry", "-W", "x^2+y^6", "--group", "1/2,1/2")
    assert code == 0 and "symmetry: ok" in out and "order: 2" in out


@pytest.mark.parametrize("argv, code, err", [
    (("bmodel", "-W", "x^2+y^6", "--group", "0,1/3"), 2, "not-in-sl"),
    (("milnor", "-W", "x^2*y"), 2, "infinite-dimensional"),
    (("milnor", "-W", "x^+y"), 2, None),
    (("analyze",), 2, None),
    (("extend-iso", "-W", "x^2*y+y^3", "-V", "x^2*y+y^3", "--group", "1/2,0", "--solve"), 1, "not-well-behaved"),
])
def test_exit_codes(capsys, argv, code, err):
    got, rep = run_json(capsys, *argv)
    assert got == code == rep["exit_code"]
    if err is not None:
        assert rep["error"]["code"] == err


def test_errors_go_to_stderr_in_text_mode(capsys):
    code, out, err = run(capsys, "milnor", "-W", "x^2*y")
    assert code == 2 and out == "" and "infinite-dimensional" in err


def test_missing_subcommand_is_an_input_error(capsys):
    code, _, err = run(capsys)
    assert code == 2 and "subcommand" in err


def test_extend_solves_family_file(capsys):
    code, rep = run_json(capsys, "extend-iso", str(PROBLEMS / "family_n3.txt"))
    assert code == 0
    assert rep["result"]["pairs"]


def test_extend_with_map_file(capsys):
    code, rep = run_json(capsys, "extend-iso", str(PROBLEMS / "map_n3.txt"))
    assert code == 0
    (pair,) = rep["result"]["pairs"]
    assert pair["phi_certificate"]["passed"]


def test_extend_tensor_file_splits_blocks(capsys):
    code, rep = run_json(capsys, "extend-iso", str(PROBLEMS / "tensor_g2.txt"))
    assert code == 0


def test_bad_map_file(tmp_path, capsys):
    (tmp_path / "bad.map").write_text("1 -> 1\ny -> y\n")
    (tmp_path / "p.txt").write_text("W: x^2+y^6\nV: x^2+x*y^3\ngroup: 1/2,1/2\nmap: bad.map\n")
    code, rep = run_json(capsys, "extend-iso", str(tmp_path / "p.txt"))
    assert code == 2 and rep["status"] == "input-error"


def test_wrong_map_is_a_finding(tmp_path, capsys):
    lines = ["1 -> 1"] + [f"y^{k} -> y^{k}" for k in range(1, 5)]
    (tmp_path / "id.map").write_text("\n".join(lines) + "\n")
    (tmp_path / "p.txt").write_text("W: x^2+y^6\nV: x^2+x*y^3\ngroup: 1/2,1/2\nmap: id.map\n")
    code, rep = run_json(capsys, "extend-iso", str(tmp_path / "p.txt"))
    assert code == 1 and rep["status"] == "finding"


def test_unknown_problem_key(tmp_path, capsys):
    (tmp_path / "p.txt").write_text("W: x^2\nfoo: 1\n")
    code, rep = run_json(capsys, "analyze", str(tmp_path / "p.txt"))
    assert code == 2 and "p.txt:2" in rep["error"]["message"]


def test_equiv_finds_witness_for_fermat_and_loop(capsys):
    code, rep = run_json(capsys, "equiv", str(PROBLEMS / "fermat_vs_loop.txt"))
    assert code == 0 and rep["result"]["comparisons"][0]["found"]


def test_equiv_unit_certificate_is_a_finding(capsys):
    code, rep = run_json(capsys, "equiv", "-W", "x^4+y^4", "-V", "x^4+x^2*y^2+y^4")
    assert code == 1 and not rep["result"]["comparisons"][0]["found"]


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and out.strip() == "0.1.0"
