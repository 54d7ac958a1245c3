"""Configuration-driven experiments that write reproducible CSV and JSON artifacts."""

from src.experiments.config import (
    ExperimentConfig,
    ExperimentParameters,
    load_config,
    parse_config_text,
)
from src.experiments.registry import Experiment, ExperimentResult, list_experiments
from src.experiments.runner import RunOutcome, run

__all__ = [
    "Experiment",
    "ExperimentConfig",
    "ExperimentParameters",
    "ExperimentResult",
    "RunOutcome",
    "list_experiments",
    "load_config",
    "parse_config_text",
    "run",
]
