"""Experiment presets, baseline sweeps and tabular output.

Presets carry the two-flavor reduction of each experiment's headline
parameters. Energies quoted in MeV are converted to GeV on construction.
"""

from __future__ import annotations

import configparser
import csv
import json
import logging
import math
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .channel import GAMMA_90_GEV, apply_dephasing, benchmark_gamma, build_state
from .correlations import correlation_set
from .errors import DomainError
from .oscillation import PHASE_CONSTANT, MixingSector, OscillationPoint, amplitudes, phase

log = logging.getLogger(__name__)

MEV = 1e-3
DEFAULT_R_VALUES = (0.0, 0.25, 0.5, 1.0)
KAMLAND_CONVENTIONS = ("tan2_theta", "tan2_2theta")
FORMATS = ("csv", "jsonl")


@dataclass(frozen=True)
class ExperimentPreset:
    name: str
    sector: MixingSector
    baseline_range_km: tuple[float, float]
    energy_range: tuple[float, float, str]
    reference_energy_gev: float
    nominal_baseline_km: float

    def __post_init__(self):
        lo, hi = self.baseline_range_km
        if not 0.0 <= lo < hi:
            raise DomainError(f"baseline range must be ordered and non-negative, got {self.baseline_range_km}")
        elo, ehi, unit = self.energy_range
        if not 0.0 < elo < ehi or unit not in ("MeV", "GeV"):
            raise DomainError(f"bad energy range {self.energy_range}")
        if self.reference_energy_gev <= 0.0:
            raise DomainError("reference energy must be positive")

    @property
    def energy_range_gev(self) -> tuple[float, float]:
        scale = MEV if self.energy_range[2] == "MeV" else 1.0
        return self.energy_range[0] * scale, self.energy_range[1] * scale


@dataclass(frozen=True)
class SweepRecord:
    L_km: float
    E_gev: float
    r: float
    gamma: float
    p_survive: float
    p_transition: float
    concurrence: float
    eof: float
    discord: float
    lqu: float
    branch_taken: str


FIELDNAMES = tuple(f.name for f in fields(SweepRecord))


def theta_from_sin2_2theta(value: float) -> float:
    return 0.5 * math.asin(math.sqrt(value))


def theta_from_tan2_theta(value: float) -> float:
    return math.atan(math.sqrt(value))


def theta_from_tan2_2theta(value: float) -> float:
    return 0.5 * math.atan(math.sqrt(value))


def preset(name: str, kamland_convention: str = "tan2_theta") -> ExperimentPreset:
    """Built-in experiment preset by (case-insensitive) name."""
    key = name.lower().replace(" ", "").replace("_", "")
    if key == "kamland":
        if kamland_convention == "tan2_theta":
            theta = theta_from_tan2_theta(0.47)
        elif kamland_convention == "tan2_2theta":
            theta = theta_from_tan2_2theta(0.47)
        else:
            raise DomainError(f"unknown KamLAND convention {kamland_convention!r}; expected {KAMLAND_CONVENTIONS}")
        return ExperimentPreset(
            name="kamland",
            sector=MixingSector(theta, 7.49e-5, "solar"),
            baseline_range_km=(0.0, 180.0),
            energy_range=(2.0, 10.0, "MeV"),
            reference_energy_gev=4.0 * MEV,
            nominal_baseline_km=180.0,
        )
    if key == "minos":
        return ExperimentPreset(
            name="minos",
            sector=MixingSector(theta_from_sin2_2theta(0.95), 2.32e-3, "atmospheric"),
            baseline_range_km=(0.0, 735.0),
            energy_range=(0.5, 50.0, "GeV"),
            reference_energy_gev=3.0,
            nominal_baseline_km=735.0,
        )
    if key == "dayabay":
        return ExperimentPreset(
            name="dayabay",
            sector=MixingSector(theta_from_sin2_2theta(0.084), 2.42e-3, "reactor"),
            baseline_range_km=(0.0, 2.0),
            energy_range=(1.0, 8.0, "MeV"),
            reference_energy_gev=4.0 * MEV,
            nominal_baseline_km=1.912,
        )
    raise DomainError(f"unknown preset {name!r}; expected kamland, minos or dayabay")


PRESET_NAMES = ("kamland", "minos", "dayabay")


def phase_span_range(p: ExperimentPreset, energy_gev: float | None = None) -> tuple[float, float]:
    """Baseline range widened, if needed, so the phase advances by at least pi."""
    energy = p.reference_energy_gev if energy_gev is None else energy_gev
    lo, hi = p.baseline_range_km
    needed = math.pi * energy / (PHASE_CONSTANT * p.sector.delta_m2)
    if hi - lo < needed:
        log.info(
            "%s: baseline range [%g, %g] km spans a phase < pi at E=%g GeV; extending to %g km",
            p.name, lo, hi, energy, lo + needed,
        )
        hi = lo + needed
    return lo, hi


def evaluate(sector: MixingSector, point: OscillationPoint, gamma: float):
    """Probabilities-bearing state and its correlation set at one point."""
    state = apply_dephasing(build_state(amplitudes(sector, phase(sector, point))), gamma)
    return state, correlation_set(state)


def sweep(
    p: ExperimentPreset,
    r_values: Sequence[float] = DEFAULT_R_VALUES,
    grid: int = 500,
    energy_gev: float | None = None,
    extend: bool = True,
    gamma_90_gev: float = GAMMA_90_GEV,
) -> list[SweepRecord]:
    """Uniform baseline sweep for each damping fraction ``r``, in ``(r, L)`` order."""
    if grid < 2:
        raise DomainError(f"grid must be >= 2, got {grid}")
    energy = p.reference_energy_gev if energy_gev is None else energy_gev
    lo, hi = phase_span_range(p, energy) if extend else p.baseline_range_km
    baselines = np.linspace(lo, hi, grid)
    records = []
    for r in r_values:
        for L in baselines:
            L = float(L)
            gamma = benchmark_gamma(r, L, gamma_90_gev)
            state, cs = evaluate(p.sector, OscillationPoint(L, energy), gamma)
            records.append(
                SweepRecord(
                    L_km=L,
                    E_gev=energy,
                    r=float(r),
                    gamma=gamma,
                    p_survive=state.p_survive,
                    p_transition=state.p_transition,
                    concurrence=cs.concurrence,
                    eof=cs.eof,
                    discord=cs.discord,
                    lqu=cs.lqu,
                    branch_taken=cs.branch_taken,
                )
            )
    return records


def gamma_table(gamma_90_gev: float = GAMMA_90_GEV) -> list[tuple[str, float, float]]:
    """``(experiment, baseline_km, gamma_90)`` at each experiment's characteristic baseline."""
    rows = []
    for name in PRESET_NAMES:
        L = preset(name).nominal_baseline_km
        rows.append((name, L, benchmark_gamma(1.0, L, gamma_90_gev)))
    return rows


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _rounded(value):
    return float(f"{value:.12g}") if isinstance(value, float) else value


def emit(records: Iterable[SweepRecord], fmt: str, destination) -> Path:
    """Write records as CSV (header + one row each) or JSON lines."""
    records = list(records)
    if not records:
        raise DomainError("no records to emit")
    if fmt not in FORMATS:
        raise DomainError(f"unknown format {fmt!r}; expected {FORMATS}")
    path = Path(destination)
    with path.open("w", encoding="utf-8", newline="") as fh:
        if fmt == "csv":
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(FIELDNAMES)
            for rec in records:
                writer.writerow([_fmt(getattr(rec, k)) for k in FIELDNAMES])
        else:
            for rec in records:
                row = {k: _rounded(v) for k, v in asdict(rec).items()}
                fh.write(json.dumps(row) + "\n")
    return path


# --------------------------------------------------------------------------
# config file
# --------------------------------------------------------------------------

CONFIG_SCHEMA = {
    "preset": str,
    "kamland_convention": str,
    "theta": float,
    "delta_m2": float,
    "L_min": float,
    "L_max": float,
    "energy_gev": float,
    "gamma90_gev": float,
    "grid": int,
    "r": str,
    "format": str,
    "out": str,
    "extend": bool,
    "report": str,
}


def load_config(path) -> dict:
    """Read an INI-style file; keys live under ``[sweep]`` (and optionally ``[validate]``).

    Unknown keys are rejected. ``r`` is a comma-separated list of fractions.
    """
    parser = configparser.ConfigParser()
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    out: dict = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            key = next((k for k in CONFIG_SCHEMA if k.lower() == key), key)
            kind = CONFIG_SCHEMA.get(key)
            if kind is None:
                raise DomainError(f"unknown config key {key!r} in [{section}]")
            try:
                if kind is bool:
                    value = parser.getboolean(section, key)
                elif kind is str:
                    value = raw.strip()
                else:
                    value = kind(raw)
            except ValueError as exc:
                raise DomainError(f"bad value for {key!r}: {raw!r}") from exc
            out[key] = value
    if "r" in out:
        out["r"] = parse_fractions(out["r"])
    return out


def parse_fractions(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise DomainError(f"bad r list {text!r}") from exc
    if not values:
        raise DomainError("r list is empty")
    return values


def configured_preset(cfg: dict) -> ExperimentPreset:
    """Preset named in ``cfg`` with any sector or range overrides applied."""
    p = preset(cfg.get("preset", "minos"), cfg.get("kamland_convention", "tan2_theta"))
    sector = p.sector
    if "theta" in cfg or "delta_m2" in cfg:
        sector = MixingSector(cfg.get("theta", sector.theta), cfg.get("delta_m2", sector.delta_m2), sector.label)
    lo, hi = p.baseline_range_km
    return replace(
        p,
        sector=sector,
        baseline_range_km=(cfg.get("L_min", lo), cfg.get("L_max", hi)),
        reference_energy_gev=cfg.get("energy_gev", p.reference_energy_gev),
    )
