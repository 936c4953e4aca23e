"""Command-line interface: grammar, outputs, exit codes, config."""

import json
import math
import subprocess
import sys

import pytest

from resokit import cli
from resokit.verify import SYNTHETIC_SPECIES_CSV, CheckResult


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    lines = [line for line in text.strip().splitlines() if line]
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


@pytest.fixture()
def species_file(tmp_path):
    path = tmp_path / "species.csv"
    path.write_text(SYNTHETIC_SPECIES_CSV)
    return str(path)


class TestAmplitudeCommand:
    def test_single_point(self, capsys):
        code, out, _ = run_cli(capsys, "amplitude", "--a", "1", "--rstar", "0", "--k", "1")
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["k", "E", "Re_f", "Im_f", "delta", "sigma"]
        row = dict(zip(header, map(float, rows[0])))
        assert row["Re_f"] == -0.5
        assert row["Im_f"] == 0.5
        assert row["delta"] == pytest.approx(0.75 * math.pi, rel=1e-15)
        assert row["sigma"] == pytest.approx(2.0 * math.pi, rel=1e-14)

    def test_sweep_grid(self, capsys):
        code, out, _ = run_cli(
            capsys, "amplitude", "--coeffs=-1,-1",
            "--min", "0.1", "--max", "1.0", "--steps", "5", "--log",
        )
        assert code == 0
        _, rows = parse_csv(out)
        assert len(rows) == 5
        assert float(rows[0][0]) == pytest.approx(0.1, rel=1e-15)
        assert float(rows[-1][0]) == pytest.approx(1.0, rel=1e-15)

    def test_phase_shift_alias(self, capsys):
        code, out, _ = run_cli(capsys, "phase-shift", "--a", "1", "--k", "1")
        assert code == 0
        header, _ = parse_csv(out)
        assert "delta" in header

    def test_seventeen_digit_round_trip(self, capsys):
        _, out, _ = run_cli(capsys, "amplitude", "--a", "3", "--rstar", "0.7", "--k", "0.37")
        header, rows = parse_csv(out)
        from resokit import PhaseShiftModel, scattering

        f = scattering.amplitude(PhaseShiftModel.from_effective_range(3.0, 0.7), 0.37)
        row = dict(zip(header, rows[0]))
        assert float(row["Re_f"]) == f.real
        assert float(row["Im_f"]) == f.imag

    def test_deterministic_output(self, capsys):
        args = ("amplitude", "--a", "2", "--min", "0.01", "--max", "2.0", "--steps", "20")
        _, out1, _ = run_cli(capsys, *args)
        _, out2, _ = run_cli(capsys, *args)
        assert out1 == out2

    def test_json_outputs_deterministic(self, capsys):
        args = ("amplitude", "--a", "2", "--k", "0.37", "--format", "json")
        _, out1, _ = run_cli(capsys, *args)
        _, out2, _ = run_cli(capsys, *args)
        r1, r2 = json.loads(out1), json.loads(out2)
        assert r1["outputs"] == r2["outputs"]
        assert r1["inputs"] == r2["inputs"]
        assert r1["version"] == r2["version"]

    def test_missing_model_is_input_error(self, capsys):
        code, _, err = run_cli(capsys, "amplitude", "--k", "1")
        assert code == 2
        assert "input error" in err

    def test_bad_sweep_grid_is_input_error(self, capsys):
        code, _, _ = run_cli(
            capsys, "amplitude", "--a", "1", "--min", "1.0", "--max", "0.5", "--steps", "5"
        )
        assert code == 2
        code, _, _ = run_cli(
            capsys, "amplitude", "--a", "1", "--min", "-1.0", "--max", "1.0",
            "--steps", "5", "--log",
        )
        assert code == 2
        code, _, _ = run_cli(
            capsys, "amplitude", "--a", "1", "--min", "0.1", "--max", "1.0", "--steps", "1"
        )
        assert code == 2


class TestBoundStateCommand:
    def test_effective_range_row(self, capsys):
        code, out, _ = run_cli(capsys, "bound-state", "--a", "1", "--rstar", "1")
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["q", "E", "A2", "norm_sign"]
        assert float(rows[0][0]) == pytest.approx(0.6180340, rel=1e-6)
        assert rows[0][3] == "positive"

    def test_modified_norm_rows(self, capsys):
        code, out, _ = run_cli(capsys, "modified-norm", "--a", "1", "--rstar", "1")
        assert code == 0
        header, rows = parse_csv(out)
        assert header[-1] == "residual"
        assert float(rows[0][-1]) < 1e-12

    def test_json_format(self, capsys):
        code, out, _ = run_cli(
            capsys, "bound-state", "--a", "1", "--rstar", "1", "--format", "json"
        )
        assert code == 0
        report = json.loads(out)
        assert report["version"]
        assert report["outputs"][0]["norm_sign"] == "positive"
        assert float(report["outputs"][0]["q"]) == pytest.approx(0.618034, rel=1e-6)


class TestTwoChannelCommand:
    def test_params(self, capsys):
        code, out, _ = run_cli(
            capsys, "two-channel", "params", "--eps", "0.1", "--a", "1", "--rstar", "1"
        )
        assert code == 0
        header, rows = parse_csv(out)
        row = dict(zip(header, map(float, rows[0])))
        assert row["a_eps"] == pytest.approx(1.0, rel=1e-12)
        assert row["rstar_eps"] == pytest.approx(
            1.0 - math.sqrt(2.0 / math.pi) * 0.1 + 0.005, rel=1e-12
        )

    def test_bound(self, capsys):
        code, out, _ = run_cli(
            capsys, "two-channel", "bound", "--eps", "0.1", "--a", "1", "--rstar", "1"
        )
        assert code == 0
        header, rows = parse_csv(out)
        row = dict(zip(header, map(float, rows[0])))
        assert row["E"] == pytest.approx(-0.39897, rel=1e-4)
        assert row["norm_residual"] < 1e-9

    def test_explicit_coupling(self, capsys):
        code, out, _ = run_cli(
            capsys, "two-channel", "params",
            "--eps", "0.1", "--lambda", str(math.sqrt(2 * math.pi)), "--emol", "0",
        )
        assert code == 0
        _, rows = parse_csv(out)
        row = dict(zip(["eps", "lambda", "emol", "a_eps", "rstar_eps"], map(float, rows[0])))
        assert row["a_eps"] == pytest.approx(0.12533141373155003, rel=1e-12)

    def test_sweep_columns(self, capsys):
        code, out, _ = run_cli(
            capsys, "two-channel", "sweep", "--a", "1", "--rstar", "1",
            "--min", "0.1", "--max", "0.2", "--steps", "2",
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["eps", "a_eps", "rstar_eps", "E_bound", "beta2", "A2_tail", "res_identity"]
        assert len(rows) == 2

    def test_no_bound_state_is_numerical_failure(self, capsys):
        code, _, err = run_cli(
            capsys, "two-channel", "bound", "--eps", "0.1", "--a", "-1", "--rstar", "1"
        )
        assert code == 3
        assert "numerical failure" in err


class TestFeshbachCommand:
    def test_classify(self, capsys, species_file):
        code, out, _ = run_cli(capsys, "feshbach", "classify", "--species", species_file)
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["species", "Rstar", "RvdW", "ratio", "class"]
        classes = {row[0]: row[4] for row in rows}
        assert set(classes.values()) <= {"broad", "narrow"}
        assert classes["synthB"] == "narrow"

    def test_sweep(self, capsys, species_file):
        code, out, _ = run_cli(
            capsys, "feshbach", "sweep", "--species", species_file, "--index", "1",
            "--min", "0.1", "--max", "10.0", "--steps", "4",
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["B", "a"]
        assert len(rows) == 4

    def test_missing_file_is_input_error(self, capsys):
        code, _, _ = run_cli(capsys, "feshbach", "classify", "--species", "/nope.csv")
        assert code == 2


class TestConfig:
    def test_config_presets_flags(self, capsys, tmp_path):
        cfg = tmp_path / "run.conf"
        cfg.write_text("a = 2.0\nrstar = 0.5  # model\nk = 1.0\n")
        code, out, _ = run_cli(capsys, "--config", str(cfg), "amplitude")
        assert code == 0
        _, rows = parse_csv(out)
        assert float(rows[0][0]) == 1.0

    def test_flags_override_config(self, capsys, tmp_path):
        cfg = tmp_path / "run.conf"
        cfg.write_text("a = 2.0\nk = 1.0\n")
        code, out, _ = run_cli(capsys, "--config", str(cfg), "amplitude", "--a", "1")
        assert code == 0
        _, rows = parse_csv(out)
        # constant model with a = 1 at k = 1: Re f = -0.5
        assert float(rows[0][2]) == -0.5

    def test_model_literal_in_config(self, capsys, tmp_path):
        cfg = tmp_path / "run.conf"
        cfg.write_text("g = [-1, -1]\nk = 1.0\n")
        code, out, _ = run_cli(capsys, "--config", str(cfg), "amplitude")
        assert code == 0
        from resokit import PhaseShiftModel, scattering

        f = scattering.amplitude(PhaseShiftModel((-1.0, -1.0)), 1.0)
        _, rows = parse_csv(out)
        assert float(rows[0][2]) == f.real

    def test_env_var_config(self, capsys, tmp_path, monkeypatch):
        cfg = tmp_path / "env.conf"
        cfg.write_text("a = 1.0\nk = 1.0\n")
        monkeypatch.setenv("RESOKIT_CONFIG", str(cfg))
        code, out, _ = run_cli(capsys, "amplitude")
        assert code == 0
        _, rows = parse_csv(out)
        assert float(rows[0][2]) == -0.5

    def test_bad_config_is_input_error(self, capsys, tmp_path):
        cfg = tmp_path / "bad.conf"
        cfg.write_text("this is not a key value line\n")
        code, _, err = run_cli(capsys, "--config", str(cfg), "amplitude", "--a", "1", "--k", "1")
        assert code == 2
        assert "config error" in err


class TestVerifyCommand:
    def test_fast_group_passes(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "orthogonality")
        assert code == 0
        assert out.count("[PASS]") == 2

    def test_failure_exit_code(self, capsys, monkeypatch):
        from resokit import verify as verify_mod

        def fake_battery(group="all", seed=0):
            return [CheckResult("fake", False, 1.0, 1e-12, "synthetic failure", 0.0)]

        monkeypatch.setattr(verify_mod, "run_battery", fake_battery)
        code, out, _ = run_cli(capsys, "verify", "all")
        assert code == 4
        assert "[FAIL]" in out

    def test_json_report(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "orthogonality", "--format", "json")
        assert code == 0
        report = json.loads(out)
        assert all(entry["passed"] for entry in report["outputs"])
        by_name = {entry["name"]: entry for entry in report["outputs"]}
        cases = by_name["orthogonality"]["cases"]
        assert len(cases) == 100
        assert set(cases[0]) == {"model", "states", "plain", "modified", "residual"}
        assert all(case["residual"] < 1e-12 for case in cases)

    def test_verify_all_exits_zero(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "all")
        assert code == 0
        assert out.count("[PASS]") == 10

    def test_unknown_group_rejected(self, capsys):
        with pytest.raises(SystemExit) as err:
            run_cli(capsys, "verify", "everything")
        assert err.value.code == 2


class TestOutputFile:
    def test_out_flag_writes_file(self, tmp_path, capsys):
        out_path = tmp_path / "table.csv"
        code, out, _ = run_cli(
            capsys, "amplitude", "--a", "1", "--k", "1", "--out", str(out_path)
        )
        assert code == 0
        assert out == ""
        header, rows = parse_csv(out_path.read_text())
        assert header[0] == "k"
        assert len(rows) == 1


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as err:
        cli.main(["no-such-command"])
    assert err.value.code == 2


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "resokit.cli", "--version"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "resokit" in proc.stdout
