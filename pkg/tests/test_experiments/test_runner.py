"""Tests for artifact writing."""

import json

import numpy as np
import pandas as pd

from src.experiments.config import config_from_values, parse_config_text
from src.experiments.runner import atomic_write_text, package_versions, run, write_csv, write_json


def test_write_csv_comments_and_round_trip(tmp_path):
    """Test comment lines precede the header and floats survive a round trip."""
    path = tmp_path / "table.csv"
    frame = pd.DataFrame({"l": [0, 1], "rate": [0.1 + 0.2, -1.0 / 3.0]})
    write_csv(path, frame, ["experiment: demo", "convention: natural"])

    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[:3] == ["# experiment: demo", "# convention: natural", "l,rate"]
    restored = pd.read_csv(path, comment="#", float_precision="round_trip")
    assert restored["rate"].tolist() == frame["rate"].tolist()


def test_write_json_handles_numpy_values(tmp_path):
    """Test numpy scalars, arrays and complex numbers serialize."""
    path = tmp_path / "doc.json"
    write_json(path, {"n": np.int64(3), "v": np.array([1.0, 2.0]), "z": 1 + 2j})
    expected = {"n": 3, "v": [1.0, 2.0], "z": [1.0, 2.0]}
    assert json.loads(path.read_text(encoding="utf-8")) == expected


def test_atomic_write_leaves_no_temporary_files(tmp_path):
    """Test the temporary file is renamed away."""
    target = tmp_path / "nested" / "out.txt"
    atomic_write_text(target, "first")
    atomic_write_text(target, "second")
    assert target.read_text(encoding="utf-8") == "second"
    assert [p.name for p in target.parent.iterdir()] == ["out.txt"]


def test_package_versions_lists_stack():
    """Test the manifest version block names the numerical stack."""
    versions = package_versions()
    assert {"flatband-dissipation", "python", "numpy", "scipy", "pandas"} <= set(versions)


def test_run_returns_written_files(tmp_path):
    """Test run reports every artifact, manifest last."""
    config = config_from_values(parse_config_text("experiment = wannier_table\nr_max = 3\n"))
    outcome = run(config, output_dir=tmp_path)
    names = [p.name for p in outcome.files]
    assert names == ["wannier_table.csv", "orthogonality.json", "run_manifest.json"]
    assert outcome.manifest_path == tmp_path / "run_manifest.json"
    assert all(p.exists() for p in outcome.files)
