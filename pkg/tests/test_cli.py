"""Tests for the chargeq command line."""

import json

import pytest

from src.config import PROJECT_ROOT
from src.main import build_parser, main

SCENARIOS = PROJECT_ROOT / "config" / "scenarios"


def _stderr_error(captured) -> dict:
    """Last JSON object written to stderr; log lines may precede it."""
    lines = [line for line in captured.err.splitlines() if line.startswith("{")]
    return json.loads(lines[-1])


class TestParser:
    def test_run_flags(self, tmp_path):
        args = build_parser().parse_args(
            ["noise-sweep", "--config", "a.yaml", "--out", str(tmp_path), "--seed", "7", "--threads", "4"]
        )
        assert args.command == "noise-sweep"
        assert args.seed == 7
        assert args.threads == 4
        assert args.out == tmp_path

    def test_seed_must_fit_u64(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["validate", "--config", "a.yaml", "--seed", str(2**64)])

    def test_command_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])


class TestValidateCommand:
    def test_shipped_config(self, capsys):
        assert main(["validate", "--config", str(SCENARIOS / "cc_leakage.yaml")]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["valid"] is True
        assert report["scenario"] == "CCLeakage"

    def test_invalid_config(self, jj_scenario, write_scenario, capsys):
        del jj_scenario["seed"]
        assert main(["validate", "--config", str(write_scenario(jj_scenario))]) == 2
        captured = capsys.readouterr()
        assert json.loads(captured.out)["valid"] is False
        error = _stderr_error(captured)
        assert error["error_class"] == "configuration"
        assert "seed" in error["message"]


class TestRunCommands:
    def test_evaluate_ideal(self, tmp_path, capsys):
        code = main(["evaluate", "--config", str(SCENARIOS / "jj_evaluate_ideal.yaml"), "--out", str(tmp_path)])
        assert code == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["complete"] is True
        assert summary["rows"] == 1
        assert (tmp_path / "record.json").exists()
        assert (tmp_path / "curve.csv").exists()

    def test_wrong_subcommand_for_scenario(self, tmp_path, capsys):
        code = main(["optimize", "--config", str(SCENARIOS / "jj_evaluate_ideal.yaml"), "--out", str(tmp_path)])
        assert code == 2
        error = _stderr_error(capsys.readouterr())
        assert "EvaluateOnly" in error["message"]
        assert not (tmp_path / "record.json").exists()

    def test_seed_override(self, cc_scenario, write_scenario, tmp_path):
        path = write_scenario(cc_scenario)
        assert main(["optimize", "--config", str(path), "--out", str(tmp_path), "--seed", "5"]) == 0
        record = json.loads((tmp_path / "record.json").read_text())
        assert record["seed"] == 5
        assert record["config"]["seed"] == 5

    def test_incomplete_run_exit_code(self, cc_scenario, jj_scenario, write_scenario, tmp_path, capsys):
        jj_path = write_scenario(jj_scenario, "jj.yaml")
        assert main(["optimize", "--config", str(jj_path), "--out", str(tmp_path / "jj")]) == 0

        cc_scenario["krotov"]["warm_start"] = str(tmp_path / "jj" / "pulses" / "optimize_optimized.txt")
        cc_path = write_scenario(cc_scenario, "cc.yaml")
        capsys.readouterr()
        assert main(["optimize", "--config", str(cc_path), "--out", str(tmp_path / "cc")]) == 3
        captured = capsys.readouterr()
        assert json.loads(captured.out)["complete"] is False
        assert _stderr_error(captured)["error_class"] == "input"

    def test_missing_config_file(self, tmp_path, capsys):
        assert main(["optimize", "--config", str(tmp_path / "absent.yaml"), "--out", str(tmp_path)]) == 2
        assert _stderr_error(capsys.readouterr())["error_class"] == "configuration"


class TestPsdCommand:
    def test_writes_spectrum(self, jj_scenario, write_scenario, tmp_path, capsys):
        jj_scenario.update({
            "scenario": "JJNoise",
            "grid": {"n_steps": 120},
            "noise": {"n_fluctuators": 10, "realizations": 2},
            "sweep": {"axis": "amplitude", "values": [1.0e-5]},
        })
        path = write_scenario(jj_scenario)
        code = main(["psd", "--config", str(path), "--out", str(tmp_path), "--trajectories", "2", "--samples", "1024"])
        assert code == 0
        paths = json.loads(capsys.readouterr().out)
        assert paths["psd"].endswith("psd.csv")
        assert len((tmp_path / "psd.csv").read_text().splitlines()) == 2 + 512
        assert (tmp_path / "trajectory.txt").exists()
