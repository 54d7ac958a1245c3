"""Nonlocal dissipation kernels and their jump-operator decomposition."""

from src.dissipation.kernel import (
    DissipationKernel,
    JumpOperator,
    clipped_window,
    f_numeric,
    f_sawtooth,
    jump_decomposition,
    kernel_from_wannier,
    lieb_c_sum,
    lieb_f,
    lieb_kernel,
    sawtooth_kernel,
)

__all__ = [
    "DissipationKernel",
    "JumpOperator",
    "clipped_window",
    "f_numeric",
    "f_sawtooth",
    "jump_decomposition",
    "kernel_from_wannier",
    "lieb_c_sum",
    "lieb_f",
    "lieb_kernel",
    "sawtooth_kernel",
]
