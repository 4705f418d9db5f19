import json

from symorb.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_group_c8(capsys):
    code, data = run_json(capsys, "group", "C8")
    assert code == 0
    assert data["schema"] == "symorb/1"
    assert data["group"]["order"] == 8
    assert data["normalizer"]["order"] == 32
    assert data["manifest"]["command"] == "group"


def test_group_i12(capsys):
    code, data = run_json(capsys, "group", "I12")
    assert code == 0
    assert data["group"]["order"] == 120
    assert data["normalizer"]["order"] == 240


def test_group_explicit_generators(capsys):
    code, data = run_json(capsys, "group", "(1 2)", "--n", "2")
    assert code == 0
    assert data["group"]["order"] == 2


def test_group_invalid_spec(capsys):
    assert main(["group", "Q9"]) == 2


def test_count_c8_reference_row(capsys):
    code, data = run_json(capsys, "count", "C8", "--m", "2..4")
    assert code == 0
    assert [r["burnside"] for r in data["table"]] == [4, 7, 10]
    assert all(r["consistent"] is False for r in data["table"])  # printed formula


def test_count_d8_consistent(capsys):
    code, data = run_json(capsys, "count", "D8", "--m", "3")
    assert code == 0
    row = data["table"][0]
    assert row["burnside"] == row["formula"] == 5
    assert row["consistent"] is True


def test_count_m_zero(capsys):
    code, data = run_json(capsys, "count", "C8", "--m", "0")
    assert code == 0
    assert data["table"][0]["burnside"] == 1


def test_orbits_output(capsys):
    code, data = run_json(capsys, "orbits", "O6", "--m", "2")
    assert code == 0
    assert len(data["orbits"]["orbits"]) == 2


def test_reduce_pipeline(capsys):
    code, data = run_json(capsys, "reduce", "C8", "--m", "4")
    assert code == 0
    pipe = data["reduction"]["pipeline"]
    assert (pipe["subsets"], pipe["orbits"], pipe["normalizer_classes"], pipe["unique"]) == (
        70, 10, 6, 5,
    )


def test_reduce_dot(capsys, tmp_path):
    out = tmp_path / "o6.dot"
    code = main(["reduce", "O6", "--m", "2", "--dot", "--out", str(out)])
    assert code == 0
    text = out.read_text()
    assert text.startswith("graph orbits {")
    assert "cluster_1" in text


def test_state_w_invariance(capsys):
    code, data = run_json(capsys, "state", "w", "--n", "5", "--group", "C5")
    assert code == 0
    assert data["invariant_under"] == "C5"
    assert data["character_trivial"] is True
    assert len(data["state"]["amplitudes"]) == 32


def test_state_weave(capsys):
    code, data = run_json(
        capsys, "state", "weave", "--inner", "w",
        "--blocks", "1,3,6,8;2,4,5,7", "--group", "O8",
    )
    assert code == 0
    assert data["invariant_under"] == "O8"
    assert data["character_trivial"] is True


def test_maximize_cli(capsys):
    code, data = run_json(
        capsys, "maximize", "C4", "--x", "1,3", "--restarts", "4",
        "--iterations", "300", "--seed", "5",
    )
    assert code == 0
    assert abs(data["maximize"]["value"] - 1.0) < 1e-3
    assert data["manifest"]["seed"] == 5


def test_verify_formulas(capsys):
    code, data = run_json(capsys, "verify", "formulas", "--nrange", "3..10")
    assert code == 0
    body = data["formulas"]
    assert body["passed"] and body["gupta_all_consistent"] and body["tau_identity_holds"]
    assert any(not r["shevelev_consistent"] for r in body["rows"])


def test_verify_theorem2_scenario(capsys):
    code, data = run_json(
        capsys, "verify", "theorem2", "--scenario", "c4-bell",
        "--restarts", "6", "--iterations", "400", "--seed", "5",
    )
    assert code == 0
    report = data["theorem2"]["c4-bell"]
    assert report["passed"]
    assert abs(report["lhs"] - 1.0) <= 1e-3


def test_verify_theorem1_cli(capsys):
    code, data = run_json(
        capsys, "verify", "theorem1", "--group", "C4", "--m", "2",
        "--restarts", "6", "--iterations", "400", "--seed", "5",
    )
    assert code == 0
    assert data["theorem1"]["passed"]


def test_verify_unknown_scenario(capsys):
    assert main(["verify", "theorem2", "--scenario", "nope"]) == 2


def test_resource_limit_exit_code(capsys):
    # normalizer search guard: n > 12 generator-specified group
    assert main(["group", "(1 2 3 4 5 6 7 8 9 10 11 12 13)", "--n", "13"]) == 3


def test_reports_byte_identical(capsys):
    _, first = run(capsys, "count", "C6", "--format", "json")
    _, second = run(capsys, "count", "C6", "--format", "json")
    assert first == second


def test_no_partial_output_on_failure(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["count", "C8", "--m", "9..20", "--out", str(out), "--format", "json"])
    assert code == 2
    assert not out.exists()
    assert not any(p.name.startswith(".symorb-") for p in tmp_path.iterdir())


def test_out_file_written_once(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["count", "C8", "--m", "2", "--out", str(out), "--format", "json"])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["table"][0]["burnside"] == 4
