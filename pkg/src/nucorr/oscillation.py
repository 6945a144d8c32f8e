"""Two-flavor vacuum oscillations: phase, amplitudes, probabilities, coherence.

All phases use the engineering form ``phi = 1.267 * dm2[eV^2] * L[km] / E[GeV]``,
which is ``dm2 L / 4E`` in natural units. Amplitudes are quoted with the
first mass eigenstate's phase divided out, so they depend only on ``2 * phi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

PHASE_CONSTANT = 1.267

NORMALIZATION_TOL = 1e-12


def _require_finite(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise DomainError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class MixingSector:
    """Mixing angle (rad), mass-squared splitting (eV^2) and a free-form label."""

    theta: float
    delta_m2: float
    label: str = ""

    def __post_init__(self):
        _require_finite(theta=self.theta, delta_m2=self.delta_m2)
        if not 0.0 <= self.theta < math.pi / 2:
            raise DomainError(f"theta must lie in [0, pi/2), got {self.theta}")
        if self.delta_m2 <= 0.0:
            raise DomainError(f"delta_m2 must be > 0, got {self.delta_m2}")

    @property
    def sin2_2theta(self) -> float:
        return math.sin(2.0 * self.theta) ** 2


@dataclass(frozen=True)
class OscillationPoint:
    """Baseline in km and energy in GeV.

    A zero baseline is accepted so that sweeps can start at the source.
    """

    baseline_km: float
    energy_gev: float

    def __post_init__(self):
        _require_finite(baseline_km=self.baseline_km, energy_gev=self.energy_gev)
        if self.baseline_km < 0.0:
            raise DomainError(f"baseline_km must be >= 0, got {self.baseline_km}")
        if self.energy_gev <= 0.0:
            raise DomainError(f"energy_gev must be > 0, got {self.energy_gev}")


@dataclass(frozen=True)
class FlavorAmplitudes:
    a_survive: complex
    a_transition: complex

    @property
    def norm_defect(self) -> float:
        return abs(abs(self.a_survive) ** 2 + abs(self.a_transition) ** 2 - 1.0)


@dataclass(frozen=True)
class TransitionProbabilities:
    p_survive: float
    p_transition: float

    def __post_init__(self):
        _require_finite(p_survive=self.p_survive, p_transition=self.p_transition)
        for name in ("p_survive", "p_transition"):
            value = getattr(self, name)
            if not -NORMALIZATION_TOL <= value <= 1.0 + NORMALIZATION_TOL:
                raise DomainError(f"{name} must lie in [0, 1], got {value}")
        if abs(self.p_survive + self.p_transition - 1.0) > NORMALIZATION_TOL:
            raise DomainError(
                f"probabilities must sum to 1, got {self.p_survive} + {self.p_transition}"
            )

    @classmethod
    def from_transition(cls, p_transition: float) -> "TransitionProbabilities":
        return cls(1.0 - p_transition, p_transition)


def phase(sector: MixingSector, point: OscillationPoint) -> float:
    """Oscillation phase ``1.267 dm2 L / E`` (dimensionless)."""
    phi = PHASE_CONSTANT * sector.delta_m2 * point.baseline_km / point.energy_gev
    _require_finite(phi=phi)
    return phi


def amplitudes(sector: MixingSector, phi: float) -> FlavorAmplitudes:
    _require_finite(phi=phi)
    c, s = math.cos(sector.theta), math.sin(sector.theta)
    rot = complex(math.cos(2.0 * phi), -math.sin(2.0 * phi))
    return FlavorAmplitudes(
        a_survive=c * c + s * s * rot,
        a_transition=s * c * (rot - 1.0),
    )


def probabilities(sector: MixingSector, phi: float) -> TransitionProbabilities:
    _require_finite(phi=phi)
    p = sector.sin2_2theta * math.sin(phi) ** 2
    return TransitionProbabilities(1.0 - p, p)


def coherence(sector: MixingSector, phi: float) -> complex:
    """Off-diagonal element ``a_survive * conj(a_transition)`` of the pure state."""
    amps = amplitudes(sector, phi)
    return amps.a_survive * amps.a_transition.conjugate()
