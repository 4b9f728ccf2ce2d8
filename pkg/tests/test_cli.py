"""Command-line behavior: table formats, config handling, exit codes."""

import json

import numpy as np
import pytest

from ribbonband import ConfigError, NumericalError, RibbonParams, eigenvalues_batch
from ribbonband.cli import fmt15, main, resolve_potential


def run(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# formatting and potential parsing
# ---------------------------------------------------------------------------

def test_fmt15_fixed_and_scientific():
    assert fmt15(0.0) == "0.00000000000000"
    assert fmt15(2.0) == "2.00000000000000"
    assert fmt15(-1.5) == "-1.50000000000000"
    assert fmt15(123.456) == "123.456000000000"
    assert fmt15(1e-5) == "1.00000000000000e-05"
    assert fmt15(0.0001) == "0.000100000000000000"
    # deterministic: same value, same string
    assert fmt15(np.float64(1) / 3) == fmt15(1 / 3)


def test_resolve_potential_named_forms():
    np.testing.assert_array_equal(resolve_potential("zero", 2), np.zeros(5))
    np.testing.assert_array_equal(
        resolve_potential("ramp", 1), [1.0, 2.0, 3.0]
    )
    np.testing.assert_allclose(
        resolve_potential("constant-field 0.01", 2), [0, 0, 0.01, 0, 0.02]
    )
    np.testing.assert_allclose(
        resolve_potential("constant-field=0.01", 2), [0, 0, 0.01, 0, 0.02]
    )
    np.testing.assert_allclose(
        resolve_potential("linear-odd:0.1", 1), [0.1, 0.0, 0.3]
    )


def test_resolve_potential_list_and_file(tmp_path):
    np.testing.assert_allclose(
        resolve_potential("0.1,0.2,0.3", 1), [0.1, 0.2, 0.3]
    )
    f = tmp_path / "pot.txt"
    f.write_text("0.1 0.2\n0.3\n")
    np.testing.assert_allclose(resolve_potential(str(f), 1), [0.1, 0.2, 0.3])


def test_resolve_potential_rejects_garbage():
    with pytest.raises(ConfigError):
        resolve_potential("sawtooth", 1)
    with pytest.raises(ConfigError):
        resolve_potential("0.1,0.2", 1)  # wrong length
    with pytest.raises(ConfigError):
        resolve_potential("constant-field", 1)  # missing parameter
    with pytest.raises(ConfigError):
        resolve_potential("1,2,oops", 1)


# ---------------------------------------------------------------------------
# bands
# ---------------------------------------------------------------------------

def test_bands_stdout_csv(capsys):
    code, out, err = run(["bands", "--N", "1", "--grid", "5"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "a,lambda_-1,lambda_0,lambda_1"
    assert len(lines) == 6
    row = lines[3].split(",")  # a = 1.0
    assert float(row[0]) == pytest.approx(1.0)
    expected = eigenvalues_batch(RibbonParams(N=1), [1.0])[0]
    np.testing.assert_allclose([float(x) for x in row[1:]], expected, atol=1e-12)
    assert "spectrum report" in err


def test_bands_csv_matches_solver_everywhere(capsys):
    code, out, _ = run(["bands", "--N", "2", "--grid", "21"], capsys)
    assert code == 0
    rows = [line.split(",") for line in out.strip().split("\n")[1:]]
    grid = np.array([float(r[0]) for r in rows])
    table = np.array([[float(x) for x in r[1:]] for r in rows])
    np.testing.assert_allclose(
        table, eigenvalues_batch(RibbonParams(N=2), grid), atol=1e-12
    )


def test_bands_report_json_marks_flat_band(tmp_path, capsys):
    out_file = tmp_path / "bands.csv"
    code, _, _ = run(
        ["bands", "--N", "1", "--grid", "41", "--format", "json",
         "--potential", "0.2,0.7,0.2", "--out", str(out_file)],
        capsys,
    )
    assert code == 0
    report = json.loads((tmp_path / "bands.csv.report.json").read_text())
    flat_rows = [b for b in report["bands"] if b["flat"]]
    assert len(flat_rows) == 1
    assert flat_rows[0]["k"] == 0
    assert flat_rows[0]["value"] == pytest.approx(0.2, abs=1e-9)
    assert out_file.read_text().startswith("a,lambda_-1,lambda_0,lambda_1")
    assert report["gaps"], "central gap expected"


def test_bands_deterministic_bytes(tmp_path, capsys):
    args = ["bands", "--N", "2", "--grid", "51",
            "--potential", "0.05,-0.1,0.2,0.3,-0.4"]
    f1, f2 = tmp_path / "run1.csv", tmp_path / "run2.csv"
    assert main(args + ["--out", str(f1)]) == 0
    assert main(args + ["--out", str(f2)]) == 0
    capsys.readouterr()
    assert f1.read_bytes() == f2.read_bytes()
    assert (tmp_path / "run1.csv.report.txt").read_bytes() == (
        tmp_path / "run2.csv.report.txt"
    ).read_bytes()


# ---------------------------------------------------------------------------
# flatband
# ---------------------------------------------------------------------------

def test_flatband_text_output(capsys):
    code, out, _ = run(
        ["flatband", "--N", "2", "--potential", "0.5,0,0.5,0,0.5",
         "--m", "3", "--L", "8"],
        capsys,
    )
    assert code == 0
    assert "row 1: +1 @ n=3" in out
    assert "row 3: -1 @ n=3, -1 @ n=2" in out
    assert "row 5: +1 @ n=3, +2 @ n=2, +1 @ n=1" in out
    assert "residual" in out and "0.00000000000000" in out


def test_flatband_json_round_trip(capsys):
    code, out, _ = run(
        ["flatband", "--N", "1", "--format", "json"], capsys
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["residual"] == 0.0
    assert doc["rows"][0] == {"row": 1, "positions": [1], "coeffs": [1]}
    assert doc["rows"][1] == {"row": 3, "positions": [1, 0], "coeffs": [-1, -1]}


def test_flatband_violation_names_the_site(capsys):
    code, _, err = run(
        ["flatband", "--N", "2", "--potential", "0.5,0,0.6,0,0.5"], capsys
    )
    assert code == 4
    assert "v3" in err


def test_flatband_boundary_clash_exit_code(capsys):
    code, _, err = run(["flatband", "--N", "2", "--m", "0", "--L", "6"], capsys)
    assert code == 4


# ---------------------------------------------------------------------------
# asymptotics
# ---------------------------------------------------------------------------

def test_asymptotics_requires_mode(capsys):
    code, _, err = run(["asymptotics", "--N", "1"], capsys)
    assert code == 2
    assert "mode" in err


def test_asymptotics_weak_table(capsys):
    code, out, _ = run(
        ["asymptotics", "--N", "1", "--mode", "weak", "--grid", "101",
         "--potential", "linear-odd 0.001"],
        capsys,
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0].startswith("band,predicted_lo,predicted_hi")
    assert lines[-1].startswith("order_slope,")
    slope = float(lines[-1].split(",")[1])
    assert slope >= 1.9
    cells = lines[1].split(",")
    assert abs(float(cells[1]) - float(cells[3])) <= 1e-6  # predicted vs measured


def test_asymptotics_constant_field_table(capsys):
    code, out, _ = run(
        ["asymptotics", "--N", "1", "--mode", "constant-field",
         "--potential", "constant-field 0.002"],
        capsys,
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[-1].startswith("C_p,0.200000000000000")
    hi_pred = float(lines[1].split(",")[2])
    assert hi_pred == pytest.approx(4 * 0.002 / 5, rel=1e-12)


def test_asymptotics_strong_table(capsys):
    code, out, _ = run(
        ["asymptotics", "--N", "1", "--mode", "strong", "--potential", "ramp",
         "--t", "100", "--grid", "101"],
        capsys,
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert len(lines) == 5  # header + 3 sites + order row
    assert float(lines[-1].split(",")[1]) >= 1.9


def test_asymptotics_strong_needs_t(capsys):
    code, _, err = run(
        ["asymptotics", "--N", "1", "--mode", "strong", "--potential", "ramp"],
        capsys,
    )
    assert code == 2


def test_asymptotics_strong_below_threshold_is_criterion_violation(capsys):
    code, _, err = run(
        ["asymptotics", "--N", "1", "--mode", "strong", "--potential", "ramp",
         "--t", "5"],
        capsys,
    )
    assert code == 4


# ---------------------------------------------------------------------------
# config file and exit codes
# ---------------------------------------------------------------------------

def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# ribbon run\nN = 2\npotential = zero\ngrid = 5\nformat = csv\n"
    )
    code, out, _ = run(["bands", "--config", str(cfg)], capsys)
    assert code == 0
    assert out.startswith("a,lambda_-2")
    assert len(out.strip().split("\n")) == 6

    code, out, _ = run(["bands", "--config", str(cfg), "--grid", "7"], capsys)
    assert code == 0
    assert len(out.strip().split("\n")) == 8  # flag wins over file


def test_config_file_errors(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("wheels = 4\n")
    code, _, err = run(["bands", "--config", str(bad)], capsys)
    assert code == 2
    assert "wheels" in err

    code, _, err = run(["bands", "--config", str(tmp_path / "nope.cfg")], capsys)
    assert code == 2


def test_invalid_arguments_exit_2(capsys):
    assert run(["bands", "--N", "0"], capsys)[0] == 2
    assert run(["bands", "--N", "2", "--grid", "4"], capsys)[0] == 2  # even grid
    assert run(["bands", "--N", "1", "--potential", "1,2"], capsys)[0] == 2


def test_numerical_error_exit_3(capsys, monkeypatch):
    import ribbonband.cli as cli_mod

    def boom(config):
        raise NumericalError("synthetic bisection stall")

    monkeypatch.setattr(cli_mod, "cmd_bands", boom)
    code, _, err = run(["bands", "--N", "1"], capsys)
    assert code == 3
    assert "numerical error" in err


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def test_verify_passes_clean(capsys):
    code, out, _ = run(["verify"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert all(line.startswith("PASS") for line in lines[:-1])
    assert lines[-1] == "all checks passed"


def test_verify_catches_corrupted_offdiagonal(capsys):
    code, out, _ = run(
        ["verify", "--selftest-corrupt-offdiag", "1e-6"], capsys
    )
    assert code == 1
    assert "FAIL" in out.split("\n")[0]


def test_verify_json_format(capsys):
    code, out, _ = run(["verify", "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["all_pass"] is True
    assert len(doc["checks"]) == 5
