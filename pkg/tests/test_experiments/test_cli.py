"""Tests for the run and list commands."""

import json
import subprocess
import sys
from pathlib import Path

import pandas as pd
import pytest

from src.experiments.cli import EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC, EXIT_OK, main

REPO_ROOT = Path(__file__).resolve().parents[2]


def read_table(path: Path) -> pd.DataFrame:
    return pd.read_csv(path, comment="#")


def test_list_is_alphabetized_and_deterministic(capsys):
    """Test the listing is sorted and identical across calls."""
    assert main(["list"]) == EXIT_OK
    first = capsys.readouterr().out
    assert main(["list"]) == EXIT_OK
    assert capsys.readouterr().out == first
    names = [line for line in first.splitlines() if line and not line.startswith(" ")]
    assert names == sorted(names)
    assert "kernel_table" in names
    assert "required: kappa" in first


def test_run_kernel_table(config_file, tmp_path):
    """Test a run writes the table, its comments and the manifest."""
    out = tmp_path / "out"
    path = config_file("experiment = kernel_table\nkappa = 0.1, 0.5\nl_max = 2\n")
    assert main(["run", str(path), "--output-dir", str(out)]) == EXIT_OK

    csv_path = out / "kernel_table.csv"
    assert csv_path.read_text(encoding="utf-8").startswith("# experiment: kernel_table\n")
    frame = read_table(csv_path)
    assert list(frame.columns) == ["kappa", "l", "f_l", "gamma_l_over_gamma_A"]
    row = frame[(frame["kappa"] == 0.5) & (frame["l"] == 0)]
    assert row["gamma_l_over_gamma_A"].item() == pytest.approx(0.7113240, abs=1e-6)

    manifest = json.loads((out / "run_manifest.json").read_text(encoding="utf-8"))
    assert manifest["experiment"] == "kernel_table"
    assert manifest["parameters"]["kappa"] == [0.1, 0.5]
    assert manifest["outputs"] == ["kernel_table.csv"]
    assert "numpy" in manifest["versions"]
    assert manifest["settings"]["fock_cutoff"] == 8


def test_rerun_from_manifest_reproduces_outputs(config_file, tmp_path):
    """Test running a manifest reproduces the original artifacts byte for byte."""
    first, second = tmp_path / "first", tmp_path / "second"
    path = config_file("experiment = kernel_table\nkappa = 0.3\nl_max = 4\n")
    assert main(["run", str(path), "--output-dir", str(first)]) == EXIT_OK
    manifest = first / "run_manifest.json"
    assert main(["run", str(manifest), "--output-dir", str(second)]) == EXIT_OK
    assert (first / "kernel_table.csv").read_bytes() == (second / "kernel_table.csv").read_bytes()


def test_convention_override(config_file, tmp_path):
    """Test --convention changes the decay lengths and is recorded."""
    text = "experiment = density_profile_coherent\nkappa = 0.5\nM = 10\n"
    natural_dir, log_dir = tmp_path / "natural", tmp_path / "log10"
    assert main(["run", str(config_file(text)), "--output-dir", str(natural_dir)]) == EXIT_OK
    assert (
        main(["run", str(config_file(text)), "--output-dir", str(log_dir), "--convention", "log10"])
        == EXIT_OK
    )
    natural = read_table(natural_dir / "decay_lengths.csv")
    base10 = read_table(log_dir / "decay_lengths.csv")
    assert base10["xi"].iloc[0] > natural["xi"].iloc[0]
    manifest = json.loads((log_dir / "run_manifest.json").read_text(encoding="utf-8"))
    assert manifest["convention"] == "log10"


def test_settings_override_is_recorded(config_file, tmp_path):
    """Test settings.<field> overrides reach the run and its manifest."""
    out = tmp_path / "out"
    path = config_file("experiment = wannier_table\nr_max = 4\nsettings.quadrature_points = 512\n")
    assert main(["run", str(path), "--output-dir", str(out)]) == EXIT_OK
    manifest = json.loads((out / "run_manifest.json").read_text(encoding="utf-8"))
    assert manifest["settings"]["quadrature_points"] == 512
    assert manifest["diagnostics"]["max_orthogonality_defect"] < 1e-2


def test_unknown_experiment_exit_code(config_file, tmp_path, capsys):
    """Test an unknown experiment is a config error with a JSON report."""
    path = config_file("experiment = nonexistent\n")
    assert main(["run", str(path), "--output-dir", str(tmp_path)]) == EXIT_CONFIG
    report = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert report["error"] == "config"
    assert "available" in report["message"]


def test_missing_parameter_exit_code(config_file, tmp_path, capsys):
    """Test a missing required parameter is a config error."""
    path = config_file("experiment = kernel_table\n")
    assert main(["run", str(path), "--output-dir", str(tmp_path)]) == EXIT_CONFIG
    assert "missing required key 'kappa'" in capsys.readouterr().err


def test_invalid_settings_value_exit_code(config_file, tmp_path):
    """Test an out-of-range settings override is a config error."""
    path = config_file("experiment = kernel_table\nkappa = 0.5\nsettings.fock_cutoff = 1\n")
    assert main(["run", str(path), "--output-dir", str(tmp_path)]) == EXIT_CONFIG


def test_model_precondition_exit_code(config_file, tmp_path, capsys):
    """Test a kernel cutoff too short for the model pair is a config error, not a numeric one."""
    path = config_file("experiment = xi_sweep\nkappa = 0.5\ncutoff = 2\nM = 10\n")
    assert main(["run", str(path), "--output-dir", str(tmp_path / "out")]) == EXIT_CONFIG
    report = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert report["type"] == "ConfigInvalid"
    assert report["cause"] == "InvalidParameter"
    assert "does not reach site 5" in report["message"]
    assert not (tmp_path / "out" / "run_manifest.json").exists()


def test_numeric_failure_exit_code(config_file, tmp_path, capsys):
    """Test a pump above threshold is a numerical failure."""
    path = config_file("experiment = density_profile_incoherent\nkappa = 0.1\nP = 50\nM = 8\n")
    assert main(["run", str(path), "--output-dir", str(tmp_path / "out")]) == EXIT_NUMERIC
    report = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert report["experiment"] == "density_profile_incoherent"
    assert report["cause"] == "UnstablePump"
    assert not (tmp_path / "out" / "run_manifest.json").exists()


def test_missing_config_exit_code(tmp_path):
    """Test an unreadable config file is an I/O error."""
    assert main(["run", str(tmp_path / "absent.cfg")]) == EXIT_IO


def test_unwritable_output_exit_code(config_file, tmp_path):
    """Test an output path blocked by a file is an I/O error."""
    blocker = tmp_path / "blocker"
    blocker.write_text("", encoding="utf-8")
    path = config_file("experiment = kernel_table\nkappa = 0.5\n")
    assert main(["run", str(path), "--output-dir", str(blocker / "out")]) == EXIT_IO


def test_module_entry_point_smoke(tmp_path):
    """Test python -m src.experiments runs end to end."""
    config = tmp_path / "kernel.cfg"
    config.write_text("experiment = kernel_table\nkappa = 0.2\n", encoding="utf-8")
    out_dir = tmp_path / "out"
    cmd = [sys.executable, "-m", "src.experiments", "run", str(config)]
    cmd += ["--output-dir", str(out_dir)]
    result = subprocess.run(cmd, check=True, capture_output=True, text=True, cwd=REPO_ROOT)
    assert result.returncode == 0
    assert (out_dir / "kernel_table.csv").exists()
    assert (out_dir / "run_manifest.json").exists()


def test_module_entry_point_config_error(tmp_path):
    """Test the process exit status for a config error."""
    config = tmp_path / "bad.cfg"
    config.write_text("kappa = 0.2\n", encoding="utf-8")
    cmd = [sys.executable, "-m", "src.experiments", "run", str(config)]
    result = subprocess.run(cmd, capture_output=True, text=True, cwd=REPO_ROOT)
    assert result.returncode == EXIT_CONFIG
    assert json.loads(result.stderr.strip().splitlines()[-1])["error"] == "config"
