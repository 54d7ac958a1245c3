"""Tests for experiment config parsing and parameter validation."""

import json

import pytest

from src.errors import ConfigInvalid
from src.experiments.catalog import KernelTableParameters, SingleStateParameters
from src.experiments.config import (
    config_from_values,
    load_config,
    parse_config_text,
    validate_parameters,
)


def test_parse_config_text():
    """Test key-value lines, comments and blank lines."""
    values = parse_config_text("# comment\nexperiment = kernel_table\n\nkappa = 0.1, 0.5\n")
    assert values == {"experiment": "kernel_table", "kappa": "0.1, 0.5"}


@pytest.mark.parametrize(
    "text, message",
    [
        ("experiment kernel_table", "expected 'key = value'"),
        ("= 3", "empty key"),
        ("kappa = 1\nkappa = 2", "duplicate key 'kappa'"),
    ],
)
def test_parse_config_errors(text, message):
    """Test malformed config lines are rejected with their line number."""
    with pytest.raises(ConfigInvalid, match=message):
        parse_config_text(text, "run.cfg")


def test_missing_experiment():
    """Test the experiment key is required."""
    with pytest.raises(ConfigInvalid, match="missing required key 'experiment'"):
        config_from_values({"kappa": "0.1"})


def test_settings_keys_are_split_out():
    """Test settings.<field> keys become settings overrides."""
    config = config_from_values(
        {"experiment": "kernel_table", "kappa": "0.1", "settings.fock_cutoff": "12"}
    )
    assert config.parameters == {"kappa": "0.1"}
    assert config.settings == {"fock_cutoff": "12"}


def test_unknown_settings_field():
    """Test unknown settings fields are config errors."""
    with pytest.raises(ConfigInvalid, match="unknown settings field 'nope'"):
        config_from_values({"experiment": "kernel_table", "settings.nope": "1"})


def test_invalid_convention():
    """Test the convention must be natural or log10."""
    with pytest.raises(ConfigInvalid):
        config_from_values({"experiment": "kernel_table", "convention": "log2"})


def test_comma_lists_validate():
    """Test comma-separated values fill list parameters."""
    config = config_from_values({"experiment": "kernel_table", "kappa": "0.1, 0.5", "l_max": "3"})
    params = validate_parameters(KernelTableParameters, config)
    assert params.kappa == [0.1, 0.5]
    assert params.l_max == 3


def test_validation_names_every_problem():
    """Test missing, unknown and malformed keys are all reported."""
    config = config_from_values({"experiment": "kernel_table", "l_max": "x", "colour": "red"})
    with pytest.raises(ConfigInvalid) as excinfo:
        validate_parameters(KernelTableParameters, config)
    message = str(excinfo.value)
    assert "missing required key 'kappa'" in message
    assert "unknown key 'colour'" in message
    assert "invalid value for 'l_max'" in message


def test_cross_field_validation():
    """Test a single-state experiment needs a drive or a pump."""
    config = config_from_values({"experiment": "g1_map", "kappa": "0.2"})
    with pytest.raises(ConfigInvalid, match="one of omega_W or P is required"):
        validate_parameters(SingleStateParameters, config)


def test_load_config_from_file(config_file):
    """Test loading a key-value config from disk."""
    path = config_file("experiment = kernel_table\nkappa = 0.5\nconvention = log10\n")
    config = load_config(path)
    assert config.experiment == "kernel_table"
    assert config.convention == "log10"


def test_load_config_from_manifest(tmp_path):
    """Test a run manifest is accepted as a config."""
    path = tmp_path / "run_manifest.json"
    manifest = {
        "experiment": "kernel_table",
        "parameters": {"kappa": [0.5], "gamma_A": 1.0, "l_max": 2},
        "settings": {"fock_cutoff": 8, "retired_field": 1},
        "convention": "natural",
    }
    path.write_text(json.dumps(manifest), encoding="utf-8")
    config = load_config(path)
    assert config.parameters["kappa"] == [0.5]
    assert config.settings == {"fock_cutoff": 8}


def test_load_config_invalid_json(tmp_path):
    """Test unreadable JSON is a config error."""
    path = tmp_path / "broken.json"
    path.write_text("{", encoding="utf-8")
    with pytest.raises(ConfigInvalid, match="invalid JSON"):
        load_config(path)
