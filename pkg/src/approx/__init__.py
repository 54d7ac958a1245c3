"""Analytic decay-length models for comparison with the exact solver."""

from src.approx.models import (
    ModelPrediction,
    diffusion_xi_shape,
    direct_model,
    effective_drive_model,
    xi_comparison,
)

__all__ = [
    "ModelPrediction",
    "diffusion_xi_shape",
    "direct_model",
    "effective_drive_model",
    "xi_comparison",
]
