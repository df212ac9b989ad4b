"""Brute-force ground truth for the closed-form results.

Nothing here reuses the scalar trace-norm path: the state is assembled as a
matrix, partially transposed, and handed to a dense Hermitian eigensolver.
A midpoint-rule time-ordered integrator independently validates the
closed-form propagator, since the instantaneous Hamiltonians at different
times stop commuting once both detuning and motion are present.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import model
from .density import JointDensityMatrix, assemble_density, basis_index
from .model import ModelParams, ThermalDistribution, fock_factor

__all__ = [
    "HermitianSpectrum",
    "partial_transpose_atom",
    "hermitian_eigenvalues",
    "negativity_brute",
    "time_ordered_propagator",
    "converged_propagator",
]


def partial_transpose_atom(rho: JointDensityMatrix) -> np.ndarray:
    """Transpose the atomic indices only: ((n,s),(n',s')) -> ((n,s'),(n',s)).

    In the ``2n + s`` ordering this swaps the two off-diagonal atomic
    sub-lattices and is an involution; trace and Hermiticity are preserved
    exactly.
    """
    d = rho.data
    out = d.copy()
    out[0::2, 1::2] = d[1::2, 0::2]
    out[1::2, 0::2] = d[0::2, 1::2]
    return out


@dataclass(frozen=True)
class HermitianSpectrum:
    """Full real spectrum of a Hermitian matrix, ascending."""

    eigenvalues: tuple[float, ...]
    dimension: int


def hermitian_eigenvalues(matrix: np.ndarray) -> HermitianSpectrum:
    """Dense spectrum of a Hermitian matrix (symmetrized before solving)."""
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
    deviation = float(np.max(np.abs(matrix - matrix.conj().T)))
    if deviation > 1e-12:
        raise ValueError(f"matrix is not Hermitian within 1e-12 (deviation {deviation:.3e})")
    sym = 0.5 * (matrix + matrix.conj().T)
    values = np.linalg.eigvalsh(sym)
    return HermitianSpectrum(eigenvalues=tuple(float(v) for v in values), dimension=matrix.shape[0])


def negativity_brute(
    t: float, params: ModelParams, distribution: ThermalDistribution
) -> float:
    """Negativity via matrix assembly, partial transpose and diagonalization.

    Computed from the trace norm, ``(sum|eig| - 1)/2``; the equivalent
    negative-eigenvalue sum is cross-asserted (the two differ by half the
    thermal tail, since the truncated trace falls short of one by the tail).
    """
    rho = assemble_density(t, params, distribution)
    transposed = partial_transpose_atom(rho)
    values = np.array(hermitian_eigenvalues(transposed).eigenvalues)
    via_norm = 0.5 * (np.abs(values).sum() - 1.0)
    via_negative = -values[values < 0].sum()
    slack = 0.5 * distribution.tail_bound + 1e-11
    if abs(via_norm - via_negative) > slack:
        raise AssertionError(
            f"trace-norm route {via_norm!r} and negative-eigenvalue route "
            f"{via_negative!r} disagree beyond {slack:.3e}"
        )
    return float(via_norm)


def _coupled_sector_products(t, params, steps, sectors):
    """Midpoint-rule product of per-step sector propagators, all sectors at once.

    Each step matrix has the form ``[[a, i*b], [i*b, conj(a)]]`` in the
    ``(|N,g>, |N-l,e>)`` basis, a group closed under multiplication; the
    accumulated product is tracked by the pair ``(alpha, z)`` with sector
    matrix ``[[alpha, i*z], [i*conj(z), conj(alpha)]]``.
    """
    l = params.transition_photons
    delta = params.detuning
    g = params.coupling
    dt = t / steps
    kappa0 = g * np.sqrt(np.array([fock_factor(s, l) for s in sectors]))
    alpha = np.ones(len(sectors), dtype=complex)
    z = np.zeros(len(sectors), dtype=complex)
    chunk = 8192
    for start in range(0, steps, chunk):
        count = min(chunk, steps - start)
        mids = (start + np.arange(count) + 0.5) * dt
        if params.motion_enabled:
            envelope = np.sin(params.mode_halfwaves * g * mids) ** l
        else:
            envelope = np.ones(count)
        kappa = envelope[:, None] * kappa0[None, :]
        omega = np.hypot(delta, 2.0 * kappa)
        half = 0.5 * dt * omega
        c = np.cos(half)
        # 2*sin(half)/omega with its omega -> 0 limit dt
        fac = np.where(omega > 0.0, 2.0 * np.sin(half) / np.where(omega > 0.0, omega, 1.0), dt)
        a_all = c + 0.5j * fac * delta
        b_all = -fac * kappa
        for j in range(count):
            a = a_all[j]
            b = b_all[j]
            alpha, z = a * alpha - b * np.conj(z), a * z + b * np.conj(alpha)
    return alpha, z


def time_ordered_propagator(
    t: float, params: ModelParams, steps: int, field_dim: int
) -> np.ndarray:
    """Ordered product of short-time sector propagators on the truncated space.

    Uses the midpoint rule with the exact 2x2 exponential inside every
    excitation sector, so the only error source is the time ordering itself;
    convergence in the step count is second order.  Sector conventions match
    :func:`mpjcm.density.build_propagator`, including the diagonal-phase
    treatment of truncation-edge excited states.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if field_dim < 1:
        raise ValueError("field_dim must be >= 1")
    l = params.transition_photons
    omega = params.field_frequency or 0.0
    omega_atom = params.detuning + l * omega
    u = np.zeros((2 * field_dim, 2 * field_dim), dtype=complex)
    for n in range(min(l, field_dim)):
        ig = basis_index(n, 0)
        u[ig, ig] = np.exp(-1j * (omega * n - 0.5 * omega_atom) * t)
    for n in range(max(field_dim - l, 0), field_dim):
        ie = basis_index(n, 1)
        u[ie, ie] = np.exp(-1j * (omega * n + 0.5 * omega_atom) * t)
    sectors = np.arange(l, field_dim)
    if sectors.size:
        alpha, z = _coupled_sector_products(t, params, steps, sectors)
        phases = np.exp(-1j * omega * (sectors - 0.5 * l) * t)
        for k, sector in enumerate(sectors):
            ig = basis_index(int(sector), 0)
            ie = basis_index(int(sector) - l, 1)
            u[ig, ig] = phases[k] * alpha[k]
            u[ig, ie] = phases[k] * 1j * z[k]
            u[ie, ig] = phases[k] * 1j * np.conj(z[k])
            u[ie, ie] = phases[k] * np.conj(alpha[k])
    return u


def converged_propagator(
    t: float,
    params: ModelParams,
    field_dim: int,
    tol: float = 1e-8,
    initial_steps: int = 64,
    max_steps: int = 1 << 22,
):
    """Double the step count until successive halvings change entries < ``tol``.

    Returns ``(matrix, steps)`` at the finest step count; the step-doubling
    difference is the second-order error estimate that decides convergence.
    """
    steps = initial_steps
    previous = time_ordered_propagator(t, params, steps, field_dim)
    while steps < max_steps:
        steps *= 2
        current = time_ordered_propagator(t, params, steps, field_dim)
        if float(np.max(np.abs(current - previous))) < tol:
            return current, steps
        previous = current
    raise RuntimeError(f"step doubling did not reach {tol} within {max_steps} steps")
