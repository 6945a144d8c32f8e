"""Brute-force validators working on the full 4x4 density matrix.

Nothing here uses the closed forms of :mod:`nucorr.correlations`; the
functions only need a density matrix in the basis ``{|bb>, |ba>, |ab>, |aa>}``
with subsystem A the first tensor factor and B the second.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from . import correlations
from .channel import XState, apply_dephasing, build_state
from .errors import DomainError
from .oscillation import MixingSector, amplitudes

log = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
# Eigenvalues below this (relative to the largest) are treated as exact zeros
# before taking square roots.
ZERO_EIG_TOL = 1e-13

ANGLE_TOL = 1e-7
MAX_REFINE_ITER = 200
MIN_GRID = 64

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
SPIN_FLIP = np.kron(PAULI[1], PAULI[1])

MEASURES = ("concurrence", "lqu", "discord")
DEFAULT_TOLERANCES = {"concurrence": 1e-9, "lqu": 1e-9, "discord": 1e-3}


class MeasurementAngles(NamedTuple):
    """Bloch angles of the first projector ``cos(t/2)|0> + e^{i p} sin(t/2)|1>`` on B."""

    theta_m: float
    phi_m: float


def as_density_matrix(m) -> np.ndarray:
    """Validate and Hermitian-symmetrize a 4x4 density matrix."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4):
        raise DomainError(f"expected a 4x4 matrix, got shape {m.shape}")
    if np.abs(m - m.conj().T).max() > HERMITIAN_TOL:
        raise DomainError("matrix is not Hermitian")
    m = 0.5 * (m + m.conj().T)
    if abs(np.trace(m).real - 1.0) > TRACE_TOL:
        raise DomainError(f"trace must be 1, got {np.trace(m).real}")
    if np.linalg.eigvalsh(m)[0] < -PSD_TOL:
        raise DomainError("matrix has a negative eigenvalue")
    return m


def eig_hermitian(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues in descending order with the matching orthonormal eigenvectors (columns)."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")
    if np.abs(m - m.conj().T).max() > HERMITIAN_TOL:
        raise DomainError("matrix is not Hermitian")
    vals, vecs = np.linalg.eigh(0.5 * (m + m.conj().T))
    return vals[::-1], vecs[:, ::-1]


def sqrt_psd(m) -> np.ndarray:
    vals, vecs = eig_hermitian(m)
    scale = max(1.0, abs(vals[0]))
    if vals[-1] < -PSD_TOL * scale:
        raise DomainError(f"matrix is not positive semidefinite (eigenvalue {vals[-1]:.3e})")
    roots = np.sqrt(np.where(vals > ZERO_EIG_TOL * scale, vals, 0.0))
    return (vecs * roots) @ vecs.conj().T


def von_neumann_entropy(m) -> float:
    vals = eig_hermitian(m)[0]
    vals = vals[vals > ZERO_EIG_TOL]
    return float(-(vals * np.log2(vals)).sum())


def partial_trace(m: np.ndarray, keep: str) -> np.ndarray:
    t = np.asarray(m).reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("ijil->jl", t)
    raise DomainError(f"keep must be 'A' or 'B', got {keep!r}")


def lift_to_full(state: XState) -> np.ndarray:
    m = np.zeros((4, 4), dtype=complex)
    m[1, 1] = state.rho22
    m[2, 2] = state.rho33
    m[1, 2] = state.rho23
    m[2, 1] = np.conj(state.rho23)
    return m


def wootters_concurrence(m) -> float:
    """Spin-flip concurrence ``max(0, s1 - s2 - s3 - s4)``.

    The ``s_i`` are the square roots of the eigenvalues of ``rho * rho_tilde``,
    obtained as singular values of ``sqrt(rho) sqrt(rho_tilde)`` so that
    vanishing eigenvalues keep full absolute accuracy.
    """
    rho = as_density_matrix(m)
    root = sqrt_psd(rho)
    root_tilde = SPIN_FLIP @ root.conj() @ SPIN_FLIP
    s = np.linalg.svd(root @ root_tilde, compute_uv=False)
    s = np.sort(s)[::-1]
    return float(min(1.0, max(0.0, s[0] - s[1] - s[2] - s[3])))


def skew_matrix(m) -> np.ndarray:
    """Real symmetric 3x3 matrix ``w_ij = Tr(sqrt(rho) s_i sqrt(rho) s_j)`` with ``s_i`` Paulis on A."""
    root = sqrt_psd(as_density_matrix(m))
    ops = [np.kron(p, np.eye(2)) for p in PAULI]
    sandwiched = [root @ op @ root for op in ops]
    w = np.array([[np.trace(sw @ op).real for op in ops] for sw in sandwiched])
    return 0.5 * (w + w.T)


def lqu_numeric(m) -> float:
    largest = np.linalg.eigvalsh(skew_matrix(m))[-1]
    return float(min(1.0, max(0.0, 1.0 - largest)))


def _projectors(theta, phi):
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    e = np.exp(1j * phi)
    first = np.stack([c + 0j, e * s], axis=-1)
    second = np.stack([-np.conj(e) * s, c + 0j], axis=-1)
    return first, second


def _batched_entropy(sig: np.ndarray) -> np.ndarray:
    vals = np.linalg.eigvalsh(sig)
    vals = np.clip(vals, 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(vals > ZERO_EIG_TOL, vals * np.log2(vals), 0.0)
    return -terms.sum(axis=-1)


def conditional_entropy(m, theta, phi) -> np.ndarray:
    """Average entropy of A after a rank-1 projective measurement on B.

    Accepts broadcastable arrays of angles and returns an array of the same shape.
    """
    t = np.asarray(m, dtype=complex).reshape(2, 2, 2, 2)
    total = 0.0
    for u in _projectors(theta, phi):
        # sigma[i, k] = sum_{j,l} conj(u_j) rho[(i,j),(k,l)] u_l
        sig = np.einsum("...j,ijkl,...l->...ik", u.conj(), t, u)
        sig = 0.5 * (sig + np.conj(np.swapaxes(sig, -1, -2)))
        prob = np.trace(sig, axis1=-2, axis2=-1).real
        safe = np.where(prob > 1e-15, prob, 1.0)
        ent = _batched_entropy(sig / safe[..., None, None])
        total = total + np.where(prob > 1e-15, prob * ent, 0.0)
    return total


def _golden_refine(f, x0: float, y0: float, step_x: float, step_y: float):
    """Coordinate descent from ``(x0, y0)`` with bounded scalar searches."""
    opts = {"xatol": ANGLE_TOL * 1e-2}
    x, y, best = x0, y0, f(x0, y0)
    for _ in range(MAX_REFINE_ITER):
        px, py = x, y
        rx = minimize_scalar(lambda v: f(v, y), bounds=(x - step_x, x + step_x), method="bounded", options=opts)
        if rx.fun < best:
            x, best = rx.x, rx.fun
        ry = minimize_scalar(lambda v: f(x, v), bounds=(y - step_y, y + step_y), method="bounded", options=opts)
        if ry.fun < best:
            y, best = ry.x, ry.fun
        if math.hypot(x - px, y - py) < ANGLE_TOL:
            break
    return x, y, best


def optimal_measurement(m, grid_n: int = MIN_GRID) -> tuple[float, MeasurementAngles]:
    """Minimal post-measurement conditional entropy and the angles attaining it."""
    if grid_n < MIN_GRID:
        raise DomainError(f"grid_n must be >= {MIN_GRID}, got {grid_n}")
    rho = as_density_matrix(m)
    # theta in [0, pi) and phi in [0, 2 pi): theta = pi repeats the theta = 0 measurement.
    thetas = np.pi * np.arange(grid_n) / grid_n
    phis = 2.0 * np.pi * np.arange(grid_n) / grid_n
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    values = conditional_entropy(rho, tt, pp)
    i, j = np.unravel_index(np.argmin(values), values.shape)
    grid_best = float(values[i, j])

    def f(theta, phi):
        return float(conditional_entropy(rho, theta, phi))

    theta, phi, refined = _golden_refine(f, thetas[i], phis[j], np.pi / grid_n, 2.0 * np.pi / grid_n)
    if refined > grid_best:
        theta, phi, refined = thetas[i], phis[j], grid_best
    return refined, MeasurementAngles(float(theta) % math.pi, float(phi) % (2.0 * math.pi))


def mutual_information(m) -> float:
    rho = as_density_matrix(m)
    return (
        von_neumann_entropy(partial_trace(rho, "A"))
        + von_neumann_entropy(partial_trace(rho, "B"))
        - von_neumann_entropy(rho)
    )


def discord_numeric(m, grid_n: int = MIN_GRID) -> float:
    """Quantum discord with projective measurements on subsystem B."""
    rho = as_density_matrix(m)
    cond, _ = optimal_measurement(rho, grid_n)
    classical = von_neumann_entropy(partial_trace(rho, "A")) - cond
    return max(0.0, mutual_information(rho) - classical)


# --------------------------------------------------------------------------
# closed-form vs oracle equivalence sweeps
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Discrepancy:
    p_survive: float
    p_transition: float
    gamma: float
    closed_value: float
    oracle_value: float
    measure: str


@dataclass
class ValidationResult:
    samples: int
    checked: dict[str, int] = field(default_factory=dict)
    max_error: dict[str, float] = field(default_factory=dict)
    violations: list[Discrepancy] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def sample_state(rng: np.random.Generator, theta: float | None = None) -> XState:
    """Random ``(theta, phi, gamma)`` mapped to a dephased X-state."""
    th = rng.uniform(0.0, math.pi / 2) if theta is None else theta
    phi = rng.uniform(0.0, math.pi)
    gamma = rng.uniform(0.0, 1.0)
    amps = amplitudes(MixingSector(th, 1.0), phi)
    return apply_dephasing(build_state(amps), gamma)


def closed_values(state: XState) -> dict[str, float]:
    cs = correlations.correlation_set(state)
    return {"concurrence": cs.concurrence, "lqu": cs.lqu, "discord": cs.discord}


def oracle_values(state: XState, measures: Iterable[str] = MEASURES, grid_n: int = MIN_GRID) -> dict[str, float]:
    m = lift_to_full(state)
    fns = {
        "concurrence": wootters_concurrence,
        "lqu": lqu_numeric,
        "discord": lambda x: discord_numeric(x, grid_n),
    }
    return {name: fns[name](m) for name in measures}


def compare_state(state: XState, measures=MEASURES, tolerances=None, grid_n: int = MIN_GRID):
    """Yield ``(measure, error, Discrepancy | None)`` for one state."""
    tolerances = {**DEFAULT_TOLERANCES, **(tolerances or {})}
    closed = closed_values(state)
    oracle = oracle_values(state, measures, grid_n)
    for name in measures:
        err = abs(closed[name] - oracle[name])
        bad = None
        if not err <= tolerances[name]:
            bad = Discrepancy(
                p_survive=state.p_survive,
                p_transition=state.p_transition,
                gamma=state.gamma,
                closed_value=closed[name],
                oracle_value=oracle[name],
                measure=name,
            )
            log.info("%s mismatch: closed=%.12g oracle=%.12g state=%s", name, closed[name], oracle[name], state)
        yield name, err, bad


def run_equivalence(
    samples: int,
    seed: int = 0,
    measures: Iterable[str] = MEASURES,
    tolerances: dict[str, float] | None = None,
    grid_n: int = MIN_GRID,
    theta: float | None = None,
) -> ValidationResult:
    """Compare closed forms with the oracle on ``samples`` seeded random states."""
    if samples < 1:
        raise DomainError(f"samples must be >= 1, got {samples}")
    measures = tuple(measures)
    unknown = set(measures) - set(MEASURES)
    if unknown:
        raise DomainError(f"unknown measures: {sorted(unknown)}")
    rng = np.random.default_rng(seed)
    states = [sample_state(rng, theta) for _ in range(samples)]
    result = ValidationResult(samples=samples)
    for state in states:
        for name, err, bad in compare_state(state, measures, tolerances, grid_n):
            result.checked[name] = result.checked.get(name, 0) + 1
            result.max_error[name] = max(result.max_error.get(name, 0.0), err)
            if bad is not None:
                result.violations.append(bad)
    return result


def write_discrepancy_report(violations: Iterable[Discrepancy], path) -> Path:
    """Line-delimited JSON, one object per violation; an empty file when there are none."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for v in violations:
            fh.write(json.dumps(asdict(v), sort_keys=False) + "\n")
    return path
