"""Command-line interface: outputs, exit codes, config handling."""

import json

import pytest

from su3chain.cli import EXIT_OK, EXIT_USAGE, EXIT_VERIFY, main


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_no_subcommand_is_usage_error(capsys):
    code, _, err = run(capsys, [])
    assert code == EXIT_USAGE


def test_unknown_subcommand_is_usage_error(capsys):
    code, _, _ = run(capsys, ["bogus"])
    assert code == EXIT_USAGE


def test_two_site_lambda_zero(capsys):
    code, out, _ = run(capsys, ["two-site", "--lambda", "0"])
    assert code == EXIT_OK
    payload = json.loads(out)
    assert set(payload) == {
        "command", "inputs", "results", "diagnostics", "paper_reference_values",
    }
    assert payload["results"]["omega33"] == pytest.approx(
        -0.703212076746182, abs=1e-12
    )
    assert payload["results"]["alpha33"] == pytest.approx(
        -0.12956817625994, abs=1e-12
    )


def test_verify_algebra_passes_and_is_deterministic(capsys):
    code1, out1, _ = run(capsys, ["verify-algebra", "--seed", "7"])
    code2, out2, _ = run(capsys, ["verify-algebra", "--seed", "7"])
    assert code1 == code2 == EXIT_OK
    assert out1 == out2  # byte-identical JSON for identical seeds
    payload = json.loads(out1)
    assert payload["diagnostics"]["worst_residual"] < 1e-12


def test_verify_algebra_other_seed(capsys):
    code, out, _ = run(capsys, ["verify-algebra", "--seed", "123", "--samples", "10"])
    assert code == EXIT_OK
    assert json.loads(out)["inputs"]["seed"] == 123


def test_verify_matrices(capsys):
    code, out, _ = run(capsys, ["verify-matrices"])
    assert code == EXIT_OK
    results = json.loads(out)["results"]
    assert results["gram_2_exact"] and results["gram_3_exact"]
    assert results["a2_max_deviation"] < 1e-10
    assert results["a3_max_deviation"] < 1e-10
    assert results["a3_zero_entries_max"] < 1e-10


def test_ed_l3(capsys):
    code, out, _ = run(capsys, ["ed", "--L", "3"])
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["results"]["energy_per_bond"] == pytest.approx(-1.0, abs=1e-13)
    assert payload["results"]["p12p23"] == pytest.approx(1.0, abs=1e-12)
    assert payload["diagnostics"]["method"] == "dense"


def test_ed_invalid_length(capsys):
    code, _, err = run(capsys, ["ed", "--L", "5"])
    assert code == EXIT_USAGE
    assert "error" in err


def test_text_format(capsys):
    code, out, _ = run(capsys, ["two-site", "--lambda", "0", "--format", "text"])
    assert code == EXIT_OK
    assert "[results]" in out
    assert "omega33" in out


def test_config_file_preloads_options(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("samples = 5\nseed = 11  # inline comment\n")
    code, out, _ = run(capsys, ["--config", str(cfg), "verify-algebra"])
    assert code == EXIT_OK
    inputs = json.loads(out)["inputs"]
    assert inputs["samples"] == 5
    assert inputs["seed"] == 11


def test_flags_win_over_config(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("seed = 11\n")
    code, out, _ = run(capsys, ["--config", str(cfg), "verify-algebra", "--seed", "7"])
    assert code == EXIT_OK
    assert json.loads(out)["inputs"]["seed"] == 7


def test_malformed_config_is_usage_error(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("this is not a key value line\n")
    code, _, err = run(capsys, ["--config", str(cfg), "verify-algebra"])
    assert code == EXIT_USAGE
    assert "config error" in err


def test_threads_env_override(monkeypatch, capsys):
    monkeypatch.setenv("SU3CHAIN_THREADS", "2")
    code1, out1, _ = run(capsys, ["verify-algebra", "--seed", "7"])
    monkeypatch.setenv("SU3CHAIN_THREADS", "1")
    code2, out2, _ = run(capsys, ["verify-algebra", "--seed", "7"])
    assert code1 == code2 == EXIT_OK
    assert out1 == out2  # results do not depend on the thread count


def test_bad_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("SU3CHAIN_THREADS", "zero")
    code, _, err = run(capsys, ["verify-algebra"])
    assert code == EXIT_USAGE


def test_report_table1_json_and_csv(capsys):
    argv = ["report-table1", "--comb-terms", "2500"]
    code, out, _ = run(capsys, argv)
    assert code == EXIT_OK
    rows = json.loads(out)["results"]["rows"]
    assert [row["length"] for row in rows] == [
        "L=3", "L=6", "L=9", "thermodynamic",
    ]
    thermo = rows[-1]
    assert abs(thermo["omega33_delta"]) < 1e-12
    assert abs(thermo["p12p23_delta"]) < 1e-6
    code, out, _ = run(capsys, argv + ["--format", "csv"])
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0].startswith("length,omega33")
    assert len(lines) == 5
