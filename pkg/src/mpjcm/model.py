"""Model parameters and dressed scalar quantities.

The system is a two-level atom coupled to one quantized cavity mode through
an ``l``-photon exchange.  The atom may cross the cavity at constant speed,
in which case the coupling is modulated by the mode profile ``sin(p*g*t)``
(``p`` half-wavelengths along the flight path).  All frequencies are angular
and measured in units of the coupling ``g``; with the default ``g = 1`` every
time below reads as the dimensionless ``gt``.

Everything in this module is a pure function of its arguments and all value
types are immutable, so concurrent use needs no synchronization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "ModelParams",
    "ThermalDistribution",
    "DressedQuantities",
    "thermal_weight",
    "mean_from_temperature",
    "truncation_level",
    "truncated_thermal",
    "fock_factor",
    "theta",
    "effective_coupling",
    "dressed",
]


def mean_from_temperature(frequency: float, temperature: float) -> float:
    """Bose occupation 1/(exp(frequency/temperature) - 1) of the mode."""
    if frequency <= 0:
        raise ValueError(f"frequency must be positive, got {frequency}")
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    return 1.0 / math.expm1(frequency / temperature)


@dataclass(frozen=True)
class ModelParams:
    """All physical knobs of the atom-field system.

    Attributes
    ----------
    detuning : float
        Mismatch between the atomic transition and ``l`` field quanta,
        in units of the coupling.
    coupling : float
        Atom-field coupling constant ``g``; defaults to 1 so times are
        reported as ``gt``.
    transition_photons : int
        Number ``l`` of photons exchanged per atomic transition.
    mode_halfwaves : int
        Number ``p`` of half-wavelengths of the mode along the atom's path.
    motion_enabled : bool
        Whether the atomic center-of-mass motion modulates the coupling.
    mean_photons : float
        Mean photon number ``m`` of the initial thermal field.  Pass ``None``
        to derive it from ``field_frequency`` and ``temperature``.
    ground_weight : float
        Initial population of the atomic ground state; the excited weight is
        always ``1 - ground_weight`` and is never stored independently.
    field_frequency, temperature : float, optional
        Only used to derive ``mean_photons`` and the propagator's global
        phase; the reduced dynamics depends on them solely through the
        detuning and the mean photon number.
    """

    detuning: float = 0.0
    coupling: float = 1.0
    transition_photons: int = 1
    mode_halfwaves: int = 1
    motion_enabled: bool = False
    mean_photons: float | None = 0.0
    ground_weight: float = 1.0
    field_frequency: float | None = None
    temperature: float | None = None

    def __post_init__(self):
        if self.mean_photons is None:
            if self.field_frequency is None or self.temperature is None:
                raise ValueError(
                    "mean_photons needs an explicit value or both "
                    "field_frequency and temperature"
                )
            object.__setattr__(
                self,
                "mean_photons",
                mean_from_temperature(self.field_frequency, self.temperature),
            )
        if self.transition_photons < 1:
            raise ValueError("transition_photons must be >= 1")
        if self.mode_halfwaves < 1:
            raise ValueError("mode_halfwaves must be >= 1")
        if self.coupling <= 0:
            raise ValueError("coupling must be positive")
        if self.mean_photons < 0:
            raise ValueError("mean_photons must be >= 0")
        if not 0.0 <= self.ground_weight <= 1.0:
            raise ValueError("ground_weight must lie in [0, 1]")

    @property
    def excited_weight(self) -> float:
        return 1.0 - self.ground_weight


def thermal_weight(n: int, mean: float) -> float:
    """Photon-number probability ``m^n / (m+1)^(n+1)`` of a thermal field."""
    if n < 0:
        raise ValueError(f"photon number must be >= 0, got {n}")
    if mean < 0:
        raise ValueError(f"mean photon number must be >= 0, got {mean}")
    if mean == 0:
        return 1.0 if n == 0 else 0.0
    return mean**n / (mean + 1.0) ** (n + 1)


def truncation_level(mean: float, tail_eps: float, transition_photons: int) -> int:
    """Smallest Fock cutoff ``N`` >= l whose thermal tail is at most ``tail_eps``.

    The geometric tail beyond ``N`` is ``(m/(m+1))**(N+1)`` exactly, so the
    bound is certified in closed form rather than by summation.
    """
    if transition_photons < 1:
        raise ValueError("transition_photons must be >= 1")
    if mean < 0:
        raise ValueError("mean photon number must be >= 0")
    if not 0.0 <= tail_eps < 1.0:
        raise ValueError("tail_eps must lie in [0, 1)")
    if mean == 0:
        return transition_photons
    if tail_eps == 0.0:
        raise ValueError("no finite truncation reaches a zero tail for mean > 0")
    ratio = mean / (mean + 1.0)
    level = max(transition_photons, math.ceil(math.log(tail_eps) / math.log(ratio)) - 1)
    # the log estimate can be off by one ulp either way; settle it directly
    while ratio ** (level + 1) > tail_eps:
        level += 1
    while level > transition_photons and ratio**level <= tail_eps:
        level -= 1
    return level


@dataclass(frozen=True)
class ThermalDistribution:
    """Truncated geometric photon-number distribution with a certified tail."""

    mean: float
    n_max: int
    weights: tuple[float, ...]
    tail_bound: float

    def weight(self, n: int) -> float:
        """Stored weight, or 0 beyond the truncation."""
        if 0 <= n <= self.n_max:
            return self.weights[n]
        return 0.0


def truncated_thermal(
    mean: float, tail_eps: float, transition_photons: int
) -> ThermalDistribution:
    """Build the thermal distribution truncated per :func:`truncation_level`."""
    n_max = truncation_level(mean, tail_eps, transition_photons)
    weights = tuple(thermal_weight(n, mean) for n in range(n_max + 1))
    if mean == 0:
        tail = 0.0
    else:
        tail = (mean / (mean + 1.0)) ** (n_max + 1)
    return ThermalDistribution(mean=mean, n_max=n_max, weights=weights, tail_bound=tail)


def fock_factor(n: int, transition_photons: int) -> float:
    """Falling factorial ``n (n-1) ... (n-l+1)``, the l-photon matrix-element weight.

    Returns 0 for ``n < l``: removing ``l`` photons from fewer than ``l`` is
    impossible, which makes those ground-state blocks stationary.
    """
    if n < 0:
        raise ValueError(f"photon number must be >= 0, got {n}")
    if transition_photons < 1:
        raise ValueError("transition_photons must be >= 1")
    if n < transition_photons:
        return 0.0
    return float(math.prod(range(n - transition_photons + 1, n + 1)))


def _sin_power_integral(power: int, rate: float, t: float) -> float:
    # definite integral of sin(rate*u)**power over [0, t] by the standard
    # power-reduction recurrence; boundary terms at u=0 vanish for power >= 2
    if power == 0:
        return t
    c = math.cos(rate * t)
    s = math.sin(rate * t)
    if power % 2 == 1:
        value = (1.0 - c) / rate
        k = 3
    else:
        value = t
        k = 2
    while k <= power:
        value = -(s ** (k - 1)) * c / (k * rate) + (k - 1) / k * value
        k += 2
    return value


def theta(t: float, params: ModelParams) -> float:
    """Running integral of the coupling envelope ``sin(p*g*t')**l``.

    With motion disabled the envelope is identically 1 and ``theta(t) = t``.
    The closed form below is the power-reduction recurrence; an adaptive
    quadrature oracle cross-checks it in the test suite.
    """
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    if not params.motion_enabled:
        return t
    return _sin_power_integral(
        params.transition_photons, params.mode_halfwaves * params.coupling, t
    )


def effective_coupling(t: float, params: ModelParams) -> float:
    """Time-averaged coupling ``g * theta(t) / t``; its ``t -> 0`` limit at 0."""
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    if not params.motion_enabled:
        return params.coupling
    if t == 0:
        return 0.0  # limit of g*theta/t is g*sin(0)**l
    return params.coupling * theta(t, params) / t


@dataclass(frozen=True)
class DressedQuantities:
    """Scalar dressed quantities at a given photon number and time.

    ``rabi_angle`` is ``rabi * t`` evaluated as
    ``sqrt((detuning*t)**2 + (2*g*theta*sqrt(F))**2)`` so that trigonometric
    arguments avoid the removable ``theta/t`` singularity at ``t = 0``.
    """

    theta: float
    effective_coupling: float
    fock_factor: float
    rabi: float
    rabi_angle: float
    cos_mixing: float
    sin_mixing: float


def _dressed(n: int, t: float, params: ModelParams, th: float) -> DressedQuantities:
    g = params.coupling
    delta = params.detuning
    f = fock_factor(n, params.transition_photons)
    root_f = math.sqrt(f)
    if not params.motion_enabled:
        eff = g
    elif t == 0:
        eff = 0.0
    else:
        eff = g * th / t
    rabi = math.hypot(delta, 2.0 * eff * root_f)
    rabi_angle = math.hypot(delta * t, 2.0 * g * th * root_f)
    if rabi == 0.0:
        # degenerate sector: every angle-dependent term vanishes consistently
        cos_mixing, sin_mixing = 1.0, 0.0
    else:
        cos_mixing = delta / rabi
        sin_mixing = -2.0 * eff * root_f / rabi
    return DressedQuantities(
        theta=th,
        effective_coupling=eff,
        fock_factor=f,
        rabi=rabi,
        rabi_angle=rabi_angle,
        cos_mixing=cos_mixing,
        sin_mixing=sin_mixing,
    )


def dressed(n: int, t: float, params: ModelParams) -> DressedQuantities:
    """Dressed frequency and mixing angles of the ``n``-photon sector.

    ``rabi`` is ``sqrt(detuning**2 + 4 * g_eff**2 * F(n))``.  The mixing
    angles are computed as ``cos = detuning/rabi`` and
    ``sin = -2*g_eff*sqrt(F)/rabi``, which equal the half-angle form of the
    defining arctangent but stay stable as the effective coupling vanishes.
    """
    if n < 0:
        raise ValueError(f"photon number must be >= 0, got {n}")
    return _dressed(n, t, params, theta(t, params))
