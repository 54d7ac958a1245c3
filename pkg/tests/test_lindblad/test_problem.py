"""Tests for the hard-core chain Liouvillian."""

import numpy as np
import pytest

from src.dissipation.kernel import jump_decomposition, sawtooth_kernel
from src.errors import DimensionTooLarge
from src.gaussian.moments import DriveSpec
from src.interactions.coefficients import TruncatedCouplings
from src.lindblad.problem import (
    TruncatedLindbladProblem,
    build_liouvillian,
    hamiltonian,
    lowering_operators,
)
from src.utils.superoperator import liouvillian, trace_functional

COUPLINGS = TruncatedCouplings(U0=0.192, U1=0.133, U2=0.054, U3=0.023)


@pytest.fixture
def interacting_chain() -> TruncatedLindbladProblem:
    return TruncatedLindbladProblem(
        n_sites=4,
        kernel=sawtooth_kernel(1.0, 0.3, cutoff=3),
        drive=DriveSpec(coherent={0: 0.5}, incoherent={("B", 0): 0.01}, detuning=0.2),
        couplings=COUPLINGS.scaled(2.0),
    )


def test_sites_centred_on_drive():
    """Test site labels put the driven site 0 in the middle."""
    problem = TruncatedLindbladProblem(n_sites=5, kernel=sawtooth_kernel(1.0, 0.5, cutoff=2))
    assert problem.sites.tolist() == [-2, -1, 0, 1, 2]
    assert problem.index(0) == 2
    assert problem.dim == 32
    with pytest.raises(ValueError, match="outside"):
        problem.index(3)


def test_hard_core_lowering_operators():
    """Test W_i squares to zero and operators on different sites commute."""
    ops = lowering_operators(3)
    for op in ops:
        assert (op @ op).nnz == 0
    assert np.allclose((ops[0] @ ops[1]).toarray(), (ops[1] @ ops[0]).toarray())
    raised = ops[0].conj().T
    anticommutator = raised @ ops[0] + ops[0] @ raised
    assert np.allclose(anticommutator.toarray(), np.eye(8))


def test_hamiltonian_is_hermitian(interacting_chain):
    """Test H equals its adjoint with drive, detuning and all couplings."""
    h = hamiltonian(interacting_chain).toarray()
    assert np.allclose(h, h.conj().T)


def test_cross_kerr_energy():
    """Test two excitations on neighbouring sites cost U1."""
    problem = TruncatedLindbladProblem(
        n_sites=3,
        kernel=sawtooth_kernel(1.0, 0.5, cutoff=2),
        couplings=TruncatedCouplings(U0=0.0, U1=0.7, U2=0.0, U3=0.0),
    )
    h = hamiltonian(problem).toarray()
    # Basis index bits (site 0 most significant): |110> and |101>
    assert h[0b110, 0b110] == pytest.approx(0.7)
    assert h[0b101, 0b101] == pytest.approx(0.0)


def test_density_assisted_hopping():
    """Test U3 moves an excitation across an occupied middle site."""
    problem = TruncatedLindbladProblem(
        n_sites=3,
        kernel=sawtooth_kernel(1.0, 0.5, cutoff=2),
        couplings=TruncatedCouplings(U0=0.0, U1=0.0, U2=0.0, U3=0.4),
    )
    h = hamiltonian(problem).toarray()
    assert abs(h[0b110, 0b011]) == pytest.approx(0.4)
    assert h[0b100, 0b001] == 0.0


def test_pairwise_dissipator_equals_collective_jumps():
    """Test sum_jk Gamma_jk D(W_j, W_k) equals the diagonalized jump form sum_n r_n D[J_n]."""
    kernel = sawtooth_kernel(1.0, 0.3, cutoff=1)
    problem = TruncatedLindbladProblem(n_sites=3, kernel=kernel, couplings=COUPLINGS)
    lowering = lowering_operators(3)
    collective = [
        (jump.rate, sum(c * op for c, op in zip(jump.coefficients, lowering)))
        for jump in jump_decomposition(kernel, 3)
    ]
    expected = liouvillian(hamiltonian(problem, lowering), collective)
    assert np.allclose(build_liouvillian(problem).toarray(), expected.toarray(), atol=1e-12)


def test_liouvillian_preserves_trace(interacting_chain):
    """Test the trace functional annihilates every column of L."""
    generator = build_liouvillian(interacting_chain)
    leak = trace_functional(interacting_chain.dim) @ generator.toarray()
    assert np.max(np.abs(leak)) < 1e-12


def test_liouvillian_preserves_hermiticity(interacting_chain):
    """Test L maps a Hermitian matrix to a Hermitian matrix."""
    generator = build_liouvillian(interacting_chain)
    rng = np.random.default_rng(3)
    x = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
    rho = x + x.conj().T
    image = (generator @ rho.ravel()).reshape(16, 16)
    assert np.allclose(image, image.conj().T)


def test_dimension_limit():
    """Test DimensionTooLarge beyond the supported chain length."""
    problem = TruncatedLindbladProblem(n_sites=6, kernel=sawtooth_kernel(1.0, 0.5, cutoff=2))
    with pytest.raises(DimensionTooLarge, match="at most 5"):
        build_liouvillian(problem, max_sites=5)
