"""Exact time evolution of the joint atom-field density matrix.

The joint state lives on (two-level atom) x (truncated Fock space) with the
fixed basis ordering ``index(n, s) = 2*n + s`` where ``s = 0`` labels the
atomic ground state and ``s = 1`` the excited state.  The excitation number
``N = n + l*s`` is conserved, so the evolution acts inside independent 2x2
sectors spanned by ``|N, g>`` and ``|N-l, e>`` and the assembled matrix is
exactly block-diagonal across sectors.

The field dimension is ``n_max + l + 1`` rather than ``n_max + 1`` because an
initially excited atom with ``n`` photons deposits population in
``|n + l, g>``; the larger space prevents silent leakage at the truncation
edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import model
from .model import ModelParams, ThermalDistribution

__all__ = [
    "ATOM_GROUND",
    "ATOM_EXCITED",
    "basis_index",
    "sector_labels",
    "JointDensityMatrix",
    "evolve_ground_block",
    "evolve_excited_block",
    "assemble_density",
    "apply_propagator",
    "build_propagator",
    "dump_density",
]

ATOM_GROUND = 0
ATOM_EXCITED = 1


def basis_index(n: int, atom_state: int) -> int:
    """Row/column index of ``|n, s>`` in the fixed ``2n + s`` ordering."""
    return 2 * n + atom_state


def sector_labels(field_dim: int, transition_photons: int) -> np.ndarray:
    """Conserved excitation number ``N = n + l*s`` for every basis index."""
    idx = np.arange(2 * field_dim)
    return idx // 2 + transition_photons * (idx % 2)


@dataclass
class JointDensityMatrix:
    """Joint state at one instant; treated as immutable once assembled."""

    data: np.ndarray
    field_dim: int
    time: float

    def trace(self) -> float:
        return float(np.trace(self.data).real)


def _ground_block(n, t, params, th):
    """Evolved coefficients for an atom starting in ``|n, g>``.

    Returns the coefficients of ``|n,g><n,g|``, ``|n,g><n-l,e|``,
    ``|n-l,e><n,g|`` and ``|n-l,e><n-l,e|`` in that order.
    """
    d = model._dressed(n, t, params, th)
    if d.fock_factor == 0.0:
        # fewer than l photons: nothing to absorb the de-excitation, the
        # projector is exactly stationary
        return 1.0, 0.0j, 0.0j, 0.0
    half = 0.5 * d.rabi_angle
    c = math.cos(half)
    s = math.sin(half)
    cm = d.cos_mixing
    sm = d.sin_mixing
    stay = c * c + s * s * cm * cm
    moved = s * s * sm * sm
    coh = -1j * s * sm * complex(c, s * cm)
    return stay, coh, coh.conjugate(), moved


def _excited_block(n, t, params, th):
    """Evolved coefficients for an atom starting in ``|n, e>``.

    Returns the coefficients of ``|n,e><n,e|``, ``|n,e><n+l,g|``,
    ``|n+l,g><n,e|`` and ``|n+l,g><n+l,g|`` in that order.  All dressed
    quantities are evaluated at ``n + l``, the sector the pair lives in.
    """
    d = model._dressed(n + params.transition_photons, t, params, th)
    half = 0.5 * d.rabi_angle
    c = math.cos(half)
    s = math.sin(half)
    cm = d.cos_mixing
    sm = d.sin_mixing
    stay = c * c + s * s * cm * cm
    moved = s * s * sm * sm
    coh = -1j * s * sm * complex(c, -s * cm)
    return stay, coh, coh.conjugate(), moved


def evolve_ground_block(n: int, t: float, params: ModelParams):
    """Four evolved entries for initial ``|n, g>``; see :func:`_ground_block`."""
    if n < 0:
        raise ValueError(f"photon number must be >= 0, got {n}")
    return _ground_block(n, t, params, model.theta(t, params))


def evolve_excited_block(n: int, t: float, params: ModelParams):
    """Four evolved entries for initial ``|n, e>``; see :func:`_excited_block`."""
    if n < 0:
        raise ValueError(f"photon number must be >= 0, got {n}")
    return _excited_block(n, t, params, model.theta(t, params))


def assemble_density(
    t: float, params: ModelParams, distribution: ThermalDistribution
) -> JointDensityMatrix:
    """Weighted sum of all evolved blocks of the initial thermal product state.

    Blocks are accumulated in ascending ``n`` so repeated assemblies are
    bitwise reproducible.  Coherences between distinct ``N`` sectors are never
    written, so those entries are exactly zero.
    """
    if abs(distribution.mean - params.mean_photons) > 1e-12 * max(
        1.0, params.mean_photons
    ):
        raise ValueError(
            "distribution mean does not match params.mean_photons: "
            f"{distribution.mean} vs {params.mean_photons}"
        )
    l = params.transition_photons
    if distribution.n_max < l:
        raise ValueError("distribution truncation is below the transition number")
    field_dim = distribution.n_max + l + 1
    rho = np.zeros((2 * field_dim, 2 * field_dim), dtype=complex)
    th = model.theta(t, params)
    cg = params.ground_weight
    ce = params.excited_weight
    for n in range(distribution.n_max + 1):
        p_n = distribution.weights[n]
        w = p_n * cg
        if w != 0.0:
            stay, coh, coh_conj, moved = _ground_block(n, t, params, th)
            ig = basis_index(n, ATOM_GROUND)
            rho[ig, ig] += w * stay
            if n >= l:
                ie = basis_index(n - l, ATOM_EXCITED)
                rho[ie, ie] += w * moved
                rho[ig, ie] += w * coh
                rho[ie, ig] += w * coh_conj
        w = p_n * ce
        if w != 0.0:
            stay, coh, coh_conj, moved = _excited_block(n, t, params, th)
            ie = basis_index(n, ATOM_EXCITED)
            ig = basis_index(n + l, ATOM_GROUND)
            rho[ie, ie] += w * stay
            rho[ig, ig] += w * moved
            rho[ie, ig] += w * coh
            rho[ig, ie] += w * coh_conj
    return JointDensityMatrix(data=rho, field_dim=field_dim, time=t)


def _sector_amplitudes(t, params, th, sector, field_frequency):
    """Propagator entries of one excitation sector.

    Returns ``(phase, gg, ge, ee)`` such that the sector matrix in the basis
    ``(|N,g>, |N-l,e>)`` is ``phase * [[gg, ge], [ge, ee]]``.  The phase is
    ``exp(-i*E*t)`` with ``E = field_frequency * (N - l/2)``.
    """
    d = model._dressed(sector, t, params, th)
    half = 0.5 * d.rabi_angle
    c = math.cos(half)
    s = math.sin(half)
    gg = complex(c, s * d.cos_mixing)
    ge = 1j * s * d.sin_mixing
    ee = complex(c, -s * d.cos_mixing)
    energy = field_frequency * (sector - 0.5 * params.transition_photons)
    phase = complex(math.cos(energy * t), -math.sin(energy * t))
    return phase, gg, ge, ee


def apply_propagator(state: np.ndarray, t: float, params: ModelParams) -> np.ndarray:
    """Apply the closed-form dressed propagator to a normalized state vector.

    The propagator acts sector by sector and includes the global phase
    ``exp(-i*E(N)*t)``.  Excited components whose ``l``-photon partner lies
    beyond the truncated field space evolve by their exact diagonal phase
    alone (the physically prepared states never populate them).
    """
    state = np.asarray(state, dtype=complex)
    if state.ndim != 1 or state.size % 2 != 0 or state.size == 0:
        raise ValueError("state must be a vector on the 2 x field_dim space")
    norm = float(np.linalg.norm(state))
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"state must be normalized within 1e-12, |norm-1|={abs(norm-1.0):.3e}")
    field_dim = state.size // 2
    l = params.transition_photons
    omega = params.field_frequency or 0.0
    omega_atom = params.detuning + l * omega
    th = model.theta(t, params)
    out = np.zeros_like(state)
    for sector in range(field_dim + l):
        has_g = sector < field_dim
        has_e = 0 <= sector - l < field_dim
        if has_g and has_e:
            phase, gg, ge, ee = _sector_amplitudes(t, params, th, sector, omega)
            ig = basis_index(sector, ATOM_GROUND)
            ie = basis_index(sector - l, ATOM_EXCITED)
            a_g, a_e = state[ig], state[ie]
            out[ig] = phase * (gg * a_g + ge * a_e)
            out[ie] = phase * (ge * a_g + ee * a_e)
        elif has_g:
            # n < l: uncoupled ground state, exact diagonal phase
            ig = basis_index(sector, ATOM_GROUND)
            out[ig] = np.exp(-1j * (omega * sector - 0.5 * omega_atom) * t) * state[ig]
        elif has_e:
            # truncation edge: partner state missing, exact diagonal phase
            n = sector - l
            ie = basis_index(n, ATOM_EXCITED)
            out[ie] = np.exp(-1j * (omega * n + 0.5 * omega_atom) * t) * state[ie]
    return out


def build_propagator(t: float, params: ModelParams, field_dim: int) -> np.ndarray:
    """Closed-form dressed propagator as a matrix on the truncated space.

    Same sector conventions as :func:`apply_propagator`; exposed for
    cross-checks against the time-ordered integrator.
    """
    l = params.transition_photons
    omega = params.field_frequency or 0.0
    omega_atom = params.detuning + l * omega
    th = model.theta(t, params)
    u = np.zeros((2 * field_dim, 2 * field_dim), dtype=complex)
    for sector in range(field_dim + l):
        has_g = sector < field_dim
        has_e = 0 <= sector - l < field_dim
        if has_g and has_e:
            phase, gg, ge, ee = _sector_amplitudes(t, params, th, sector, omega)
            ig = basis_index(sector, ATOM_GROUND)
            ie = basis_index(sector - l, ATOM_EXCITED)
            u[ig, ig] = phase * gg
            u[ig, ie] = phase * ge
            u[ie, ig] = phase * ge
            u[ie, ie] = phase * ee
        elif has_g:
            ig = basis_index(sector, ATOM_GROUND)
            u[ig, ig] = np.exp(-1j * (omega * sector - 0.5 * omega_atom) * t)
        elif has_e:
            n = sector - l
            ie = basis_index(n, ATOM_EXCITED)
            u[ie, ie] = np.exp(-1j * (omega * n + 0.5 * omega_atom) * t)
    return u


def dump_density(rho: JointDensityMatrix, params: ModelParams, path) -> None:
    """Write the matrix as text: one row per line, tab-separated re+imi pairs."""
    lines = [
        "# joint density matrix; basis index(n,s) = 2n+s, s=0 ground, s=1 excited; "
        f"t={rho.time!r}; field_dim={rho.field_dim}; "
        f"detuning={params.detuning!r}; coupling={params.coupling!r}; "
        f"transition_photons={params.transition_photons}; "
        f"mode_halfwaves={params.mode_halfwaves}; "
        f"motion_enabled={params.motion_enabled}; "
        f"mean_photons={params.mean_photons!r}; "
        f"ground_weight={params.ground_weight!r}"
    ]
    for row in rho.data:
        lines.append("\t".join(f"{z.real:.17g}{z.imag:+.17g}i" for z in row))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
