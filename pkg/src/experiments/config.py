"""Experiment configuration files.

A config is a flat text file with one ``key = value`` pair per line. Lists are
comma-separated, ``#`` starts a comment line, and ``settings.<field>`` keys
override numerical settings for the run. A ``run_manifest.json`` written by a
previous run is accepted in place of a config.
"""

import json
import types
import typing
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.errors import ConfigInvalid
from src.utils.config import Settings
from src.utils.logging import setup_logging

logger = setup_logging(__name__)

SETTINGS_PREFIX = "settings."
RESERVED_KEYS = {"experiment", "output_dir", "convention"}


class ExperimentParameters(BaseModel):
    """Base for per-experiment parameter models; comma-separated strings fill list fields."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    @model_validator(mode="before")
    @classmethod
    def _split_lists(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        parsed = dict(data)
        for name, info in cls.model_fields.items():
            value = parsed.get(name)
            if isinstance(value, str) and _is_list_annotation(info.annotation):
                parsed[name] = [item.strip() for item in value.split(",") if item.strip()]
        return parsed


def _is_list_annotation(annotation: Any) -> bool:
    origin = typing.get_origin(annotation)
    if origin is list:
        return True
    if origin in (typing.Union, types.UnionType):
        return any(_is_list_annotation(arg) for arg in typing.get_args(annotation))
    return False


class ExperimentConfig(BaseModel):
    """A parsed config: experiment name, raw parameters and settings overrides."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    experiment: str = Field(..., min_length=1)
    parameters: dict[str, Any] = Field(default_factory=dict)
    settings: dict[str, Any] = Field(default_factory=dict)
    output_dir: Optional[str] = None
    convention: Optional[Literal["natural", "log10"]] = None


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    """
    Parse ``key = value`` lines into a dict of raw strings.

    Raises:
        ConfigInvalid: On malformed or duplicated lines
    """
    values: dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigInvalid(f"{source}:{number}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigInvalid(f"{source}:{number}: empty key")
        if key in values:
            raise ConfigInvalid(f"{source}:{number}: duplicate key {key!r}")
        values[key] = value
    return values


def config_from_values(values: dict[str, Any], source: str = "<config>") -> ExperimentConfig:
    """
    Split raw values into an ExperimentConfig.

    Raises:
        ConfigInvalid: If 'experiment' is missing or a settings key is unknown
    """
    if "experiment" not in values or not str(values["experiment"]).strip():
        raise ConfigInvalid(f"{source}: missing required key 'experiment'")

    parameters: dict[str, Any] = {}
    settings: dict[str, Any] = {}
    for key, value in values.items():
        if key in RESERVED_KEYS:
            continue
        if key.startswith(SETTINGS_PREFIX):
            field = key[len(SETTINGS_PREFIX):]
            if field not in Settings.model_fields:
                raise ConfigInvalid(f"{source}: unknown settings field {field!r}")
            settings[field] = value
        else:
            parameters[key] = value

    try:
        return ExperimentConfig(
            experiment=str(values["experiment"]).strip(),
            parameters=parameters,
            settings=settings,
            output_dir=values.get("output_dir"),
            convention=values.get("convention") or None,
        )
    except ValidationError as e:
        raise ConfigInvalid(f"{source}: {e}") from e


def _config_from_manifest(data: Any, source: str) -> ExperimentConfig:
    if not isinstance(data, dict) or "experiment" not in data:
        raise ConfigInvalid(f"{source}: manifest has no 'experiment' entry")
    settings = data.get("settings") or {}
    known = {key: value for key, value in settings.items() if key in Settings.model_fields}
    try:
        return ExperimentConfig(
            experiment=data["experiment"],
            parameters=data.get("parameters") or {},
            settings=known,
            convention=data.get("convention"),
        )
    except ValidationError as e:
        raise ConfigInvalid(f"{source}: {e}") from e


def load_config(path: str | Path) -> ExperimentConfig:
    """
    Read a key-value config or a run manifest.

    Raises:
        ConfigInvalid: If the file cannot be parsed
        OSError: If the file cannot be read
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigInvalid(f"{path}: invalid JSON ({e})") from e
        config = _config_from_manifest(data, str(path))
    else:
        config = config_from_values(parse_config_text(text, str(path)), str(path))
    logger.info(f"Loaded config for experiment '{config.experiment}' from {path}")
    return config


def validate_parameters(
    model: type[ExperimentParameters], config: ExperimentConfig
) -> ExperimentParameters:
    """
    Validate raw parameters against an experiment's parameter model.

    Raises:
        ConfigInvalid: Naming every missing, unknown or malformed key
    """
    try:
        return model.model_validate(config.parameters)
    except ValidationError as e:
        problems = []
        for error in e.errors():
            key = ".".join(str(part) for part in error["loc"]) or "<parameters>"
            if error["type"] == "missing":
                problems.append(f"missing required key '{key}'")
            elif error["type"] == "extra_forbidden":
                problems.append(f"unknown key '{key}'")
            else:
                problems.append(f"invalid value for '{key}': {error['msg']}")
        raise ConfigInvalid(f"{config.experiment}: " + "; ".join(problems)) from e
