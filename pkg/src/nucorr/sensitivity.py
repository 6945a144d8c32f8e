"""Analytic sensitivities of the transition probability and correlation measures.

Pure-state measures depend on the oscillation parameters only through
``P = sin^2(2 theta) sin^2(phi)``, so ``dM/dx = (dM/dP)(dP/dx)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import correlations
from .channel import XState, apply_dephasing
from .errors import DomainError, SingularityError
from .oscillation import (
    PHASE_CONSTANT,
    MixingSector,
    OscillationPoint,
    TransitionProbabilities,
    phase,
)

PARAMETERS = ("theta", "dm2", "L", "E")
RESPONSE_MEASURES = ("lqu", "discord", "concurrence", "eof")


@dataclass(frozen=True)
class SensitivityReport:
    dp_dtheta: float
    dp_ddm2: float
    dp_dL: float
    dp_dE: float
    measure: str
    dm_dp: float
    dC_dgamma: float
    dQ_dgamma: float
    dU_dgamma: float | None


def dP_dx(sector: MixingSector, point: OscillationPoint, which: str) -> float:
    """Partial derivative of the transition probability.

    ``which`` is one of ``theta`` (per rad), ``dm2`` (per eV^2), ``L`` (per km)
    or ``E`` (per GeV).
    """
    phi = phase(sector, point)
    th, dm2 = sector.theta, sector.delta_m2
    L, E = point.baseline_km, point.energy_gev
    amp_rate = sector.sin2_2theta * math.sin(2.0 * phi)
    if which == "theta":
        return 2.0 * math.sin(4.0 * th) * math.sin(phi) ** 2
    if which == "dm2":
        return amp_rate * PHASE_CONSTANT * L / E
    if which == "L":
        return amp_rate * PHASE_CONSTANT * dm2 / E
    if which == "E":
        return -amp_rate * PHASE_CONSTANT * dm2 * L / E**2
    raise DomainError(f"unknown parameter {which!r}; expected one of {PARAMETERS}")


def eof_concurrence_derivative(c: float) -> float:
    """``dE_F/dC``; its limit at ``C -> 0`` is 0 and it diverges at ``C = 1``."""
    root = math.sqrt(max(0.0, 1.0 - c * c))
    if root == 0.0:
        raise SingularityError("dE_F/dC diverges at C = 1")
    if c == 0.0:
        return 0.0
    return -c / (2.0 * root) * math.log2((1.0 - root) / (1.0 + root))


def response_factor(measure: str, p_transition: float) -> float:
    """``dM/dP`` of a pure-state measure at transition probability ``P``.

    The discord factor holds on the quadratic (unitary) branch only.
    """
    P = p_transition
    if not 0.0 <= P <= 1.0:
        raise DomainError(f"P must lie in [0, 1], got {P}")
    if measure == "lqu":
        return 4.0 * (1.0 - 2.0 * P)
    if measure == "discord":
        return 2.0 * (1.0 - 2.0 * P)
    if measure not in ("concurrence", "eof"):
        raise DomainError(f"unknown measure {measure!r}; expected one of {RESPONSE_MEASURES}")
    if P in (0.0, 1.0):
        raise SingularityError(f"d{measure}/dP is singular at P = {P}")
    dc_dp = (1.0 - 2.0 * P) / math.sqrt(P * (1.0 - P))
    if measure == "concurrence":
        return dc_dp
    if P == 0.5:
        # dC/dP = 0 while dE_F/dC diverges; the product tends to 0.
        return 0.0
    c = 2.0 * math.sqrt(P * (1.0 - P))
    return eof_concurrence_derivative(c) * dc_dp


def dephasing_sensitivity(p_transition: float, gamma: float) -> tuple[float, float]:
    """``(dC/dgamma, dQ/dgamma)``, the latter on the quadratic discord branch."""
    P = p_transition
    if not 0.0 <= P <= 1.0:
        raise DomainError(f"P must lie in [0, 1], got {P}")
    if not 0.0 <= gamma <= 1.0:
        raise DomainError(f"gamma must lie in [0, 1], got {gamma}")
    pq = P * (1.0 - P)
    return -2.0 * math.sqrt(pq), -4.0 * (1.0 - gamma) * pq


def central_difference(f, x: float, h: float) -> float:
    """Richardson-extrapolated central difference (error O(h^4))."""
    d1 = (f(x + h) - f(x - h)) / (2.0 * h)
    d2 = (f(x + h / 2) - f(x - h / 2)) / h
    return (4.0 * d2 - d1) / 3.0


def lqu_dephasing_sensitivity(p_transition: float, gamma: float, h: float = 1e-6) -> float:
    """``dU/dgamma`` by finite differences; one-sided inside ``h`` of the endpoints.

    The LQU depends on ``sqrt(gamma)`` near zero, so the slope diverges at
    ``gamma = 0`` unless the state is a product state.
    """
    p = TransitionProbabilities.from_transition(p_transition)
    if gamma == 0.0 and p.p_survive * p.p_transition > 0.0:
        raise SingularityError("dU/dgamma diverges at gamma = 0 for an entangled state")

    def f(g):
        return correlations.lqu_closed(p, g)

    if h <= gamma <= 1.0 - h:
        return central_difference(f, gamma, h)
    if gamma < h:
        return (-3.0 * f(gamma) + 4.0 * f(gamma + h) - f(gamma + 2 * h)) / (2.0 * h)
    return (3.0 * f(gamma) - 4.0 * f(gamma - h) + f(gamma - 2 * h)) / (2.0 * h)


def probability_gamma_invariance(p: TransitionProbabilities, gamma: float) -> bool:
    """True when dephasing leaves both populations bit-identical."""
    state = XState(p.p_transition, p.p_survive, math.sqrt(p.p_survive * p.p_transition))
    out = apply_dephasing(state, gamma)
    return out.rho22 == state.rho22 and out.rho33 == state.rho33


def sensitivity_report(
    sector: MixingSector, point: OscillationPoint, gamma: float = 0.0, measure: str = "lqu"
) -> SensitivityReport:
    P = sector.sin2_2theta * math.sin(phase(sector, point)) ** 2
    dC, dQ = dephasing_sensitivity(P, gamma)
    try:
        dU = lqu_dephasing_sensitivity(P, gamma)
    except SingularityError:
        dU = None
    return SensitivityReport(
        dp_dtheta=dP_dx(sector, point, "theta"),
        dp_ddm2=dP_dx(sector, point, "dm2"),
        dp_dL=dP_dx(sector, point, "L"),
        dp_dE=dP_dx(sector, point, "E"),
        measure=measure,
        dm_dp=response_factor(measure, P),
        dC_dgamma=dC,
        dQ_dgamma=dQ,
        dU_dgamma=dU,
    )
