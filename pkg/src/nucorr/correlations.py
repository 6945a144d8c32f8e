"""Closed-form correlation measures for the (dephased) oscillation X-state.

Every function takes the pair of flavor probabilities and the dephasing
strength gamma; the coherence magnitude is ``(1 - gamma) sqrt(P_aa P_ab)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import XState
from .errors import DomainError
from .oscillation import TransitionProbabilities

ENTROPY_BRANCH = "entropy"
QUADRATIC_BRANCH = "quadratic"

CLIP_TOL = 1e-12
BRANCH_TIE_TOL = 1e-12


@dataclass(frozen=True)
class CorrelationSet:
    concurrence: float
    eof: float
    discord: float
    lqu: float
    branch_taken: str


def _check_gamma(gamma: float) -> None:
    if not (math.isfinite(gamma) and 0.0 <= gamma <= 1.0):
        raise DomainError(f"gamma must lie in [0, 1], got {gamma}")


def _sqrt_clipped(x: float) -> float:
    if x < 0.0:
        if x < -CLIP_TOL:
            raise DomainError(f"negative square-root argument {x}")
        return 0.0
    return math.sqrt(x)


def _xlog2x(x: float) -> float:
    return x * math.log2(x) if x > 0.0 else 0.0


def binary_entropy(x: float) -> float:
    """Shannon entropy in bits of a two-outcome distribution ``(x, 1 - x)``."""
    if not (-CLIP_TOL <= x <= 1.0 + CLIP_TOL):
        raise DomainError(f"binary_entropy argument must lie in [0, 1], got {x}")
    x = min(max(x, 0.0), 1.0)
    return -_xlog2x(x) - _xlog2x(1.0 - x)


def concurrence_closed(p: TransitionProbabilities, gamma: float) -> float:
    _check_gamma(gamma)
    return 2.0 * (1.0 - gamma) * _sqrt_clipped(p.p_survive * p.p_transition)


def eof_from_concurrence(c: float) -> float:
    return binary_entropy(0.5 * (1.0 + _sqrt_clipped(1.0 - c * c)))


def eof_closed(p: TransitionProbabilities, gamma: float) -> float:
    _check_gamma(gamma)
    mixed = 4.0 * (1.0 - gamma) ** 2 * p.p_survive * p.p_transition
    return binary_entropy(0.5 * (1.0 + _sqrt_clipped(1.0 - mixed)))


def discord_branches(p: TransitionProbabilities, gamma: float) -> tuple[float, float]:
    """Entropy-branch and quadratic-branch candidates ``(Q1, Q2)``."""
    _check_gamma(gamma)
    paa, pab = p.p_survive, p.p_transition
    coh2 = (1.0 - gamma) ** 2 * paa * pab
    root = _sqrt_clipped((2.0 * paa - 1.0) ** 2 + 4.0 * coh2)
    lam1 = 0.5 * (1.0 + root)
    lam2 = 0.5 * (1.0 - root)
    q1 = binary_entropy(paa) + _xlog2x(lam1) + _xlog2x(lam2) + binary_entropy(lam1)
    q2 = 2.0 * coh2
    return q1, q2


def discord_closed(p: TransitionProbabilities, gamma: float) -> tuple[float, str]:
    """Smaller of the two branch values, with the branch that attained it.

    Near-ties resolve to the quadratic branch.
    """
    q1, q2 = discord_branches(p, gamma)
    if q2 <= q1 + BRANCH_TIE_TOL:
        return q2, QUADRATIC_BRANCH
    return q1, ENTROPY_BRANCH


def lqu_closed(p: TransitionProbabilities, gamma: float) -> float:
    _check_gamma(gamma)
    paa, pab = p.p_survive, p.p_transition
    denom = 1.0 + 2.0 * _sqrt_clipped((2.0 - gamma) * gamma * paa * pab)
    inner = pab + paa * (1.0 - 4.0 * (gamma - 1.0) ** 2 * pab / denom)
    return 1.0 - max(0.0, inner)


def correlation_set(state: XState) -> CorrelationSet:
    p = TransitionProbabilities(state.p_survive, state.p_transition)
    q, branch = discord_closed(p, state.gamma)
    return CorrelationSet(
        concurrence=concurrence_closed(p, state.gamma),
        eof=eof_closed(p, state.gamma),
        discord=q,
        lqu=lqu_closed(p, state.gamma),
        branch_taken=branch,
    )
