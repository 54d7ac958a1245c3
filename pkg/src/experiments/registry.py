"""Registry of named experiments."""

from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import pandas as pd

from src.experiments.config import ExperimentParameters
from src.gaussian.observables import DecayConvention


@dataclass
class ExperimentResult:
    """Tables and documents produced by one experiment."""

    tables: dict[str, pd.DataFrame] = field(default_factory=dict)
    documents: dict[str, dict[str, Any]] = field(default_factory=dict)
    diagnostics: dict[str, Any] = field(default_factory=dict)


ExperimentFunction = Callable[[Any, DecayConvention], ExperimentResult]


@dataclass(frozen=True)
class Experiment:
    """A registered experiment with its parameter schema."""

    name: str
    description: str
    reproduces: str
    parameters: type[ExperimentParameters]
    function: ExperimentFunction

    @property
    def required_keys(self) -> list[str]:
        return sorted(
            name for name, info in self.parameters.model_fields.items() if info.is_required()
        )

    @property
    def optional_keys(self) -> list[str]:
        return sorted(
            name for name, info in self.parameters.model_fields.items() if not info.is_required()
        )


_REGISTRY: dict[str, Experiment] = {}


def experiment(
    name: str, description: str, reproduces: str, parameters: type[ExperimentParameters]
) -> Callable[[ExperimentFunction], ExperimentFunction]:
    """Register the decorated function under ``name``."""

    def register(function: ExperimentFunction) -> ExperimentFunction:
        if name in _REGISTRY:
            raise ValueError(f"Experiment '{name}' is already registered")
        _REGISTRY[name] = Experiment(
            name=name,
            description=description,
            reproduces=reproduces,
            parameters=parameters,
            function=function,
        )
        return function

    return register


def get_experiment(name: str) -> Optional[Experiment]:
    return _REGISTRY.get(name)


def list_experiments() -> list[Experiment]:
    """Registered experiments, alphabetized by name."""
    return [_REGISTRY[name] for name in sorted(_REGISTRY)]
