import json

import pytest

from hhint.algebra import dump_spec, nakayama_algebra
from hhint.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return json.loads(out)


def test_envelope_keys(capsys):
    doc = run_json(capsys, "hh1", "--preset", "trunc-poly", "--p", "3")
    assert set(doc) == {"command", "algebra", "results", "provenance", "version"}
    assert doc["command"]["name"] == "hh1"
    assert doc["results"]["hh1_dim"] == 18


def test_hh1_presets(capsys):
    assert run_json(capsys, "hh1", "--preset", "group", "--sym", "3", "--p", "3")["results"]["hh1_dim"] == 1
    assert run_json(capsys, "hh1", "--preset", "nakayama", "--m", "2", "--n", "2", "--p", "3")["results"]["hh1_dim"] == 1


def test_spec_file_input(capsys, tmp_path):
    path = tmp_path / "nak.spec"
    path.write_text(dump_spec(nakayama_algebra(2, 2, 3)))
    doc = run_json(capsys, "algebra", "--spec", str(path))
    assert doc["algebra"]["dim"] == 6


def test_integrability_and_solvability(capsys):
    doc = run_json(capsys, "integrability", "--preset", "trunc-poly", "--p", "3")
    assert doc["results"]["certified_integrable_dim"] == 16
    assert sorted(doc["results"]["certified_non_integrable"]) == ["f_0,0", "g_0,0"]
    doc = run_json(capsys, "solvability", "--preset", "trunc-poly", "--p", "3")
    assert doc["results"]["verdict"] == "NOT SOLVABLE"


def test_bracket_table(capsys):
    doc = run_json(capsys, "bracket-table", "--preset", "trunc-poly", "--p", "3")
    assert doc["results"]


def test_symgroup_output_is_deterministic(capsys):
    _, first, _ = run(capsys, "symgroup", "--p", "3", "--nmax", "12")
    _, second, _ = run(capsys, "symgroup", "--p", "3", "--nmax", "12")
    assert first == second
    doc = json.loads(first)
    assert doc["results"]["all_agree"] and doc["results"]["rows"][2]["hh1_dim"] == 1


def test_pretty_output(capsys):
    code, out, _ = run(capsys, "hh1", "--preset", "trunc-poly", "--p", "2", "--pretty")
    assert code == 0 and "hh1_dim: " in out
    with pytest.raises(json.JSONDecodeError):
        json.loads(out)


@pytest.mark.parametrize(
    "argv",
    [
        ["hh1", "--preset", "trunc-poly", "--p", "4"],
        ["hh1", "--preset", "nakayama", "--p", "3"],
        ["algebra", "--spec", "/nonexistent/file.spec"],
        ["symgroup", "--p", "6"],
    ],
)
def test_input_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and "error" in err and out == ""


def test_bad_spec_reports_line(capsys, tmp_path):
    path = tmp_path / "bad.spec"
    path.write_text("p = 3\ndim = 1\nunit = 0:1\nmul 0 9 = 0:1\n")
    code, _, err = run(capsys, "algebra", "--spec", str(path))
    assert code == 2 and "4" in err


def test_selftest(capsys):
    doc = run_json(capsys, "selftest", "--only", "6")
    assert doc["results"]["all_passed"] and doc["results"]["items"][0]["item"] == 6
    code, out, _ = run(capsys, "selftest", "--only", "9", "--inject-corruption", "--pretty")
    assert code == 1 and out.startswith("[FAIL]")


def test_algebra_command_examples(capsys):
    res = run_json(capsys, "algebra", "--preset", "trunc-poly", "--vars", "2", "--p", "3")["results"]
    assert (res["dim"], res["center_dim"], res["radical_dim"]) == (9, 9, 8)
    assert run_json(capsys, "algebra", "--preset", "nakayama", "--m", "2", "--n", "2", "--p", "3")["results"]["dim"] == 6
    doc = run_json(capsys, "algebra", "--preset", "group", "--gens", "(1 2),(1 2 3)", "--p", "3")
    assert doc["results"]["dim"] == 6 and doc["algebra"]["hash"]


def test_symgroup_examples(capsys):
    rows = run_json(capsys, "symgroup", "--p", "5", "--nmax", "6")["results"]["rows"]
    assert rows[4]["n"] == 5 and rows[4]["hh1_dim"] == 1
    res = run_json(capsys, "symgroup", "--p", "2", "--nmax", "10")["results"]
    assert res["all_agree"] and [r["series_coeff"] for r in res["rows"][:4]] == [0, 2, 2, 6]


def test_integrability_verdicts_carry_provenance(capsys):
    doc = run_json(capsys, "integrability", "--preset", "nakayama", "--m", "2", "--n", "2", "--p", "3")
    rows = doc["results"]["classes"]
    assert len(rows) == 1 and rows[0]["verdict"] == "INTEGRABLE"
    assert all(r["provenance"] in {"CERTIFIED", "EXHAUSTIVE", "HEURISTIC", "UNDECIDED"} for r in rows)
