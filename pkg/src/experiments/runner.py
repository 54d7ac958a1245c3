"""Run a configured experiment and write its artifacts.

Every run writes one CSV per table (``#`` comment lines echo the experiment
and its parameters), one JSON per document, and ``run_manifest.json`` holding
everything needed to repeat the run. Files are written to a temporary name and
renamed into place.
"""

import json
import os
import platform
import tempfile
from dataclasses import dataclass, field
from importlib import metadata
from pathlib import Path
from typing import Any, Optional

import numpy as np
import pandas as pd

import src
import src.experiments.catalog  # noqa: F401  (registers the experiments)
from src.errors import ConfigInvalid, ExperimentFailed, InputError, SimulationError
from src.experiments.config import ExperimentConfig, validate_parameters
from src.experiments.registry import ExperimentResult, get_experiment, list_experiments
from src.gaussian.observables import DecayConvention
from src.utils.config import Settings, get_settings, override_settings
from src.utils.logging import setup_logging

logger = setup_logging(__name__)

MANIFEST_NAME = "run_manifest.json"
VERSIONED_PACKAGES = ("numpy", "scipy", "pandas", "pydantic", "pydantic-settings")


@dataclass
class RunOutcome:
    """Files written by one run."""

    experiment: str
    output_dir: Path
    files: list[Path] = field(default_factory=list)

    @property
    def manifest_path(self) -> Path:
        return self.output_dir / MANIFEST_NAME


def _jsonable(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def atomic_write_text(path: Path, text: str) -> None:
    """Write text to a temporary file in the same directory, then rename it over path."""
    path.parent.mkdir(parents=True, exist_ok=True)
    handle, temporary = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(handle, "w", encoding="utf-8", newline="") as stream:
            stream.write(text)
        os.replace(temporary, path)
    except BaseException:
        if os.path.exists(temporary):
            os.unlink(temporary)
        raise


def write_json(path: Path, data: Any) -> None:
    atomic_write_text(path, json.dumps(data, indent=2, sort_keys=True, default=_jsonable) + "\n")


def write_csv(path: Path, frame: pd.DataFrame, comments: list[str]) -> None:
    """CSV with shortest round-trip floats, preceded by ``# `` comment lines."""
    header = "".join(f"# {line}\n" for line in comments)
    atomic_write_text(path, header + frame.to_csv(index=False, lineterminator="\n"))


def package_versions() -> dict[str, str]:
    versions = {"flatband-dissipation": src.__version__, "python": platform.python_version()}
    for package in VERSIONED_PACKAGES:
        try:
            versions[package] = metadata.version(package)
        except metadata.PackageNotFoundError:
            versions[package] = "unknown"
    return versions


def _execute(
    config: ExperimentConfig, convention: DecayConvention
) -> tuple[ExperimentResult, dict[str, Any], dict[str, Any]]:
    spec = get_experiment(config.experiment)
    if spec is None:
        available = ", ".join(e.name for e in list_experiments())
        raise ConfigInvalid(f"Unknown experiment '{config.experiment}' (available: {available})")
    params = validate_parameters(spec.parameters, config)

    try:
        Settings(**{**get_settings().model_dump(), **config.settings})
    except ValueError as e:
        raise ConfigInvalid(f"{config.experiment}: invalid settings override ({e})") from e

    with override_settings(**config.settings) as settings:
        logger.info(f"Running experiment '{spec.name}'")
        try:
            result = spec.function(params, convention)
        except InputError as e:
            logger.error(f"Experiment '{spec.name}' rejected its parameters: {e}")
            raise ConfigInvalid(f"{spec.name}: {type(e).__name__}: {e}") from e
        except (SimulationError, ValueError, ArithmeticError, np.linalg.LinAlgError) as e:
            logger.error(f"Experiment '{spec.name}' failed: {type(e).__name__}: {e}")
            raise ExperimentFailed(spec.name, f"{type(e).__name__}: {e}") from e
        snapshot = settings.model_dump(mode="json")
    return result, params.model_dump(mode="json"), snapshot


def run(
    config: ExperimentConfig,
    output_dir: Optional[str | Path] = None,
    convention: Optional[DecayConvention] = None,
) -> RunOutcome:
    """
    Run one experiment and write its CSV and JSON artifacts plus the run manifest.

    Args:
        config: Parsed experiment config
        output_dir: Overrides the config's output_dir and settings.output_dir
        convention: Overrides the config's decay-length convention

    Returns:
        RunOutcome listing the written files

    Raises:
        ConfigInvalid: If the experiment or its parameters are invalid
        ExperimentFailed: If the computation fails; the cause is chained
        OSError: If an artifact cannot be written
    """
    settings = get_settings()
    convention = convention or config.convention or settings.decay_convention
    target = Path(output_dir or config.output_dir or settings.output_dir)

    result, parameters, snapshot = _execute(config, convention)

    comments = [
        f"experiment: {config.experiment}",
        f"parameters: {json.dumps(parameters, sort_keys=True)}",
        f"convention: {convention}",
    ]
    outcome = RunOutcome(experiment=config.experiment, output_dir=target)
    for name, frame in sorted(result.tables.items()):
        path = target / f"{name}.csv"
        write_csv(path, frame, comments)
        outcome.files.append(path)
    for name, document in sorted(result.documents.items()):
        path = target / f"{name}.json"
        write_json(path, document)
        outcome.files.append(path)

    manifest = {
        "experiment": config.experiment,
        "parameters": parameters,
        "convention": convention,
        "settings": snapshot,
        "versions": package_versions(),
        "diagnostics": result.diagnostics,
        "outputs": [path.name for path in outcome.files],
    }
    write_json(outcome.manifest_path, manifest)
    outcome.files.append(outcome.manifest_path)
    logger.info(f"Experiment '{config.experiment}' wrote {len(outcome.files)} files to {target}")
    return outcome
