"""Effective two-qubit X-state and the phase-damping channel.

Basis ordering is ``{|bb>, |ba>, |ab>, |aa>}`` (indices 1..4). Only the
``|ba>, |ab>`` block is populated: ``rho22 = |a_transition|^2``,
``rho33 = |a_survive|^2`` and ``rho23 = a_survive * conj(a_transition)``.

Dephasing strengths come either directly (phenomenological mode) or from a
Lindblad damping rate via ``gamma = 1 - exp(-Gamma(E) L)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .oscillation import NORMALIZATION_TOL, FlavorAmplitudes

# Energy-independent 90% C.L. upper bound on the damping rate (Model A).
GAMMA_90_GEV = 5.1e-24
# Natural-unit conversion for lengths.
KM_TO_INV_GEV = 5.07e18

POSITIVITY_TOL = 1e-12

SIGMA3_FIRST = np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex)


@dataclass(frozen=True)
class XState:
    rho22: float
    rho33: float
    rho23: complex
    gamma: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.gamma <= 1.0):
            raise DomainError(f"gamma must lie in [0, 1], got {self.gamma}")
        if abs(self.rho22 + self.rho33 - 1.0) > NORMALIZATION_TOL:
            raise DomainError(f"rho22 + rho33 must equal 1, got {self.rho22 + self.rho33}")
        if min(self.rho22, self.rho33) < -NORMALIZATION_TOL:
            raise DomainError("populations must be non-negative")
        if abs(self.rho23) ** 2 > self.rho22 * self.rho33 + POSITIVITY_TOL:
            raise DomainError("|rho23|^2 exceeds rho22*rho33; state is not positive")

    @property
    def p_transition(self) -> float:
        return self.rho22

    @property
    def p_survive(self) -> float:
        return self.rho33


@dataclass(frozen=True)
class LindbladSpec:
    """Power-law damping rate ``Gamma(E) = gamma0_gev * (E / e0_gev) ** exponent_n``."""

    gamma0_gev: float
    exponent_n: int = 0
    e0_gev: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.gamma0_gev) or self.gamma0_gev < 0.0:
            raise DomainError(f"gamma0_gev must be finite and >= 0, got {self.gamma0_gev}")
        if not math.isfinite(self.e0_gev) or self.e0_gev <= 0.0:
            raise DomainError(f"e0_gev must be > 0, got {self.e0_gev}")

    def rate(self, energy_gev: float) -> float:
        return self.gamma0_gev * (energy_gev / self.e0_gev) ** self.exponent_n


def km_to_inverse_gev(length_km: float) -> float:
    if length_km < 0.0:
        raise DomainError(f"length must be >= 0, got {length_km}")
    return length_km * KM_TO_INV_GEV


def gamma_from_lindblad(spec: LindbladSpec, energy_gev: float, baseline_km: float) -> float:
    if not (math.isfinite(energy_gev) and math.isfinite(baseline_km)):
        raise DomainError("energy and baseline must be finite")
    if energy_gev < 0.0 or baseline_km < 0.0:
        raise DomainError("energy and baseline must be non-negative")
    exponent = spec.rate(energy_gev) * km_to_inverse_gev(baseline_km)
    return -math.expm1(-exponent)


def benchmark_gamma(r: float, baseline_km: float, gamma_90_gev: float = GAMMA_90_GEV) -> float:
    """Dephasing strength for a damping rate equal to ``r`` times the 90% C.L. bound."""
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"r must lie in [0, 1], got {r}")
    return gamma_from_lindblad(LindbladSpec(r * gamma_90_gev), 1.0, baseline_km)


def build_state(amps: FlavorAmplitudes) -> XState:
    if amps.norm_defect > NORMALIZATION_TOL:
        raise DomainError(f"amplitudes are not normalized (defect {amps.norm_defect:.3e})")
    return XState(
        rho22=abs(amps.a_transition) ** 2,
        rho33=abs(amps.a_survive) ** 2,
        rho23=amps.a_survive * amps.a_transition.conjugate(),
        gamma=0.0,
    )


def apply_dephasing(state: XState, gamma: float) -> XState:
    """Scale the coherence by ``1 - gamma``; populations are passed through untouched.

    The accumulated strength is stored as ``1 - (1 - gamma_old)(1 - gamma)``.
    """
    if not (math.isfinite(gamma) and 0.0 <= gamma <= 1.0):
        raise DomainError(f"gamma must lie in [0, 1], got {gamma}")
    keep = 1.0 - gamma
    total = gamma if state.gamma == 0.0 else 1.0 - (1.0 - state.gamma) * keep
    return XState(
        rho22=state.rho22,
        rho33=state.rho33,
        rho23=state.rho23 * keep,
        gamma=total,
    )


def kraus_operators(gamma: float) -> list[np.ndarray]:
    """The two 4x4 Kraus operators of phase damping on the first qubit."""
    if not 0.0 <= gamma <= 1.0:
        raise DomainError(f"gamma must lie in [0, 1], got {gamma}")
    return [
        math.sqrt(1.0 - gamma / 2.0) * np.eye(4, dtype=complex),
        math.sqrt(gamma / 2.0) * SIGMA3_FIRST,
    ]


def apply_kraus(rho: np.ndarray, operators: list[np.ndarray]) -> np.ndarray:
    return sum(k @ rho @ k.conj().T for k in operators)
