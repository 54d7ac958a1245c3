"""Configuration management for the simulator."""

from contextlib import contextmanager
from functools import lru_cache
from typing import Any, Iterator, Literal

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# Load .env file at module import so FLATBAND_* overrides are visible to Settings
load_dotenv()


class Settings(BaseSettings):
    """Numerical defaults and runtime options, overridable through FLATBAND_* variables."""

    model_config = SettingsConfigDict(
        env_prefix="FLATBAND_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Application
    log_level: str = "INFO"
    output_dir: str = "results"

    # Quadrature
    quadrature_points: int = Field(default=4096, ge=16, description="Periodic trapezoid grid size")
    quadrature_tol: float = Field(default=1e-10, gt=0, description="Grid-doubling tolerance")
    interaction_points: int = Field(default=64, ge=4, description="Gauss-Legendre nodes per axis")
    interaction_tol: float = Field(default=1e-6, gt=0)

    # Lattice and kernel
    wannier_r_max: int = Field(default=12, ge=1)
    flat_band_rel_tol: float = Field(default=1e-12, gt=0)
    gaussian_kernel_cutoff: int = Field(default=10, ge=0)
    dense_kernel_cutoff: int = Field(default=3, ge=0)
    positivity_tol: float = Field(default=1e-8, ge=0, description="Relative to the reference rate")

    # Solvers
    half_width: int = Field(default=30, ge=1, description="Gaussian chain runs over [-M, M]")
    corr_range: int = Field(default=10, ge=0)
    fock_cutoff: int = Field(default=8, ge=2)
    dense_svd_max_dim: int = Field(default=1024, ge=1)
    max_dense_sites: int = Field(default=12, ge=1)

    decay_convention: Literal["natural", "log10"] = "natural"


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


@contextmanager
def override_settings(**updates: Any) -> Iterator[Settings]:
    """
    Temporarily update fields of the cached settings instance.

    Values are validated against the Settings schema; the previous values are
    restored on exit.

    Raises:
        ValueError: If a key is not a settings field or a value fails validation
    """
    settings = get_settings()
    unknown = sorted(set(updates) - set(Settings.model_fields))
    if unknown:
        raise ValueError(f"Unknown settings fields: {', '.join(unknown)}")
    validated = Settings(**{**settings.model_dump(), **updates})
    previous = {key: getattr(settings, key) for key in updates}
    for key in updates:
        setattr(settings, key, getattr(validated, key))
    try:
        yield settings
    finally:
        for key, value in previous.items():
            setattr(settings, key, value)
