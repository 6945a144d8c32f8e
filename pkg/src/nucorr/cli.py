"""Command-line front end.

Exit codes: 0 ok, 1 domain error, 2 usage error, 3 validation failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import asdict

from . import oracle, scan, sensitivity
from .channel import GAMMA_90_GEV, benchmark_gamma
from .errors import DomainError
from .oscillation import MixingSector, OscillationPoint

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_VALIDATION = 0, 1, 2, 3

log = logging.getLogger("nucorr")


def _add_point_args(ap: argparse.ArgumentParser, need_point: bool = True) -> None:
    ap.add_argument("--preset", choices=scan.PRESET_NAMES)
    ap.add_argument("--kamland-convention", choices=scan.KAMLAND_CONVENTIONS, default="tan2_theta")
    ap.add_argument("--theta", type=float, help="mixing angle in rad (overrides preset)")
    ap.add_argument("--dm2", type=float, help="mass-squared splitting in eV^2 (overrides preset)")
    ap.add_argument("--L", type=float, dest="L", help="baseline in km (default: preset baseline)")
    ap.add_argument("--E", type=float, dest="E", help="energy in GeV (MeV with --mev)")
    ap.add_argument("--mev", action="store_true", help="read --E in MeV")
    group = ap.add_mutually_exclusive_group()
    group.add_argument("--gamma", type=float, help="dephasing strength in [0, 1]")
    group.add_argument("--r", type=float, help="damping rate as a fraction of the 90%% C.L. bound")
    ap.add_argument("--gamma90", type=float, default=GAMMA_90_GEV, help="damping-rate bound in GeV")
    ap.add_argument("--json", action="store_true", help="machine-readable output")


def _resolve_point(args, parser):
    p = scan.preset(args.preset, args.kamland_convention) if args.preset else None
    theta = args.theta if args.theta is not None else (p.sector.theta if p else None)
    dm2 = args.dm2 if args.dm2 is not None else (p.sector.delta_m2 if p else None)
    if theta is None or dm2 is None:
        parser.error("give --preset or both --theta and --dm2")
    L = args.L if args.L is not None else (p.nominal_baseline_km if p else None)
    E = args.E
    if E is not None and args.mev:
        E *= scan.MEV
    if E is None and p is not None:
        E = p.reference_energy_gev
    if L is None or E is None:
        parser.error("give --L and --E (or a --preset supplying defaults)")
    sector = MixingSector(theta, dm2, p.sector.label if p else "custom")
    point = OscillationPoint(L, E)
    if args.gamma is not None:
        gamma = args.gamma
    elif args.r is not None:
        gamma = benchmark_gamma(args.r, L, args.gamma90)
    else:
        gamma = 0.0
    return sector, point, gamma


def _print_table(rows) -> None:
    width = max(len(k) for k, _ in rows)
    for key, value in rows:
        text = f"{value:.10g}" if isinstance(value, float) else str(value)
        print(f"{key:<{width}}  {text}")


def cmd_point(args, parser) -> int:
    sector, point, gamma = _resolve_point(args, parser)
    state, cs = scan.evaluate(sector, point, gamma)
    try:
        sens = asdict(sensitivity.sensitivity_report(sector, point, gamma, "lqu"))
        sens.pop("measure")
    except DomainError:
        sens = {}
    record = {
        "theta": sector.theta,
        "dm2": sector.delta_m2,
        "L_km": point.baseline_km,
        "E_gev": point.energy_gev,
        "gamma": gamma,
        "p_survive": state.p_survive,
        "p_transition": state.p_transition,
        **asdict(cs),
        "sensitivity": sens,
    }
    if args.json:
        print(json.dumps(record))
    else:
        flat = [(k, v) for k, v in record.items() if k != "sensitivity"]
        flat += [(k, v) for k, v in sens.items()]
        _print_table(flat)
    return EXIT_OK


def cmd_sensitivity(args, parser) -> int:
    sector, point, gamma = _resolve_point(args, parser)
    report = sensitivity.sensitivity_report(sector, point, gamma, args.measure)
    L, E = point.baseline_km, point.energy_gev

    def prob(theta=sector.theta, dm2=sector.delta_m2, L=L, E=E):
        return scan.evaluate(MixingSector(theta, dm2), OscillationPoint(L, E), 0.0)[0].p_transition

    fd = {
        "dp_dtheta": sensitivity.central_difference(lambda x: prob(theta=x), sector.theta, 1e-6),
        "dp_ddm2": sensitivity.central_difference(lambda x: prob(dm2=x), sector.delta_m2, 1e-6 * sector.delta_m2),
        "dp_dL": sensitivity.central_difference(lambda x: prob(L=x), L, 1e-6 * max(L, 1.0)),
        "dp_dE": sensitivity.central_difference(lambda x: prob(E=x), E, 1e-6 * E),
    }
    out = asdict(report)
    if args.json:
        print(json.dumps({"analytic": out, "finite_difference": fd}))
    else:
        rows = []
        for key, value in out.items():
            rows.append((key, value))
            if key in fd:
                rows.append((f"  (finite diff)", fd[key]))
        _print_table(rows)
    return EXIT_OK


def cmd_gamma_table(args, parser) -> int:
    rows = scan.gamma_table(args.gamma90)
    if args.json:
        print(json.dumps([{"experiment": n, "baseline_km": L, "gamma": g} for n, L, g in rows]))
    else:
        print(f"{'experiment':<10}  {'baseline_km':>11}  {'gamma_90':>10}")
        for name, L, g in rows:
            print(f"{name:<10}  {L:>11g}  {g:>10.3e}")
    return EXIT_OK


def cmd_sweep(args, parser) -> int:
    cfg = scan.load_config(args.config) if args.config else {}
    for key, value in (
        ("preset", args.preset),
        ("kamland_convention", args.kamland_convention),
        ("grid", args.grid),
        ("format", args.format),
        ("out", args.out),
        ("L_min", args.L_min),
        ("L_max", args.L_max),
        ("energy_gev", args.E * scan.MEV if args.E is not None and args.mev else args.E),
        ("gamma90_gev", args.gamma90),
    ):
        if value is not None:
            cfg[key] = value
    if args.r is not None:
        cfg["r"] = scan.parse_fractions(args.r)
    if args.no_extend:
        cfg["extend"] = False
    p = scan.configured_preset(cfg)
    records = scan.sweep(
        p,
        r_values=cfg.get("r", scan.DEFAULT_R_VALUES),
        grid=cfg.get("grid", 500),
        extend=cfg.get("extend", True),
        gamma_90_gev=cfg.get("gamma90_gev", GAMMA_90_GEV),
    )
    fmt = cfg.get("format", "csv")
    dest = cfg.get("out")
    if dest is None:
        parser.error("sweep needs --out (or 'out' in the config file)")
    scan.emit(records, fmt, dest)
    print(f"wrote {len(records)} records to {dest}", file=sys.stderr)
    return EXIT_OK


def cmd_validate(args, parser) -> int:
    cfg = scan.load_config(args.config) if args.config else {}
    report = args.report or cfg.get("report", "discrepancies.jsonl")
    measures = tuple(args.measures.split(",")) if args.measures else oracle.MEASURES
    tolerances = {k: v * args.tol_scale for k, v in oracle.DEFAULT_TOLERANCES.items()}
    result = oracle.run_equivalence(
        args.samples, seed=args.seed, measures=measures, tolerances=tolerances,
        grid_n=args.grid, theta=args.theta,
    )
    oracle.write_discrepancy_report(result.violations, report)
    summary = {
        "samples": result.samples,
        "checked": result.checked,
        "max_error": result.max_error,
        "violations": len(result.violations),
        "report": str(report),
    }
    if args.json:
        print(json.dumps(summary, sort_keys=True))
    else:
        for name in measures:
            status = "ok" if not any(v.measure == name for v in result.violations) else "FAIL"
            print(f"{name:<12} n={result.checked.get(name, 0):<5} max|err|={result.max_error.get(name, 0.0):.3e}  {status}")
        print(f"violations: {len(result.violations)} (report: {report})")
    return EXIT_OK if result.passed else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nucorr", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("point", help="correlation measures at one (L, E)")
    _add_point_args(p)
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("sensitivity", help="analytic partials with finite-difference check")
    _add_point_args(p)
    p.add_argument("--measure", choices=sensitivity.RESPONSE_MEASURES, default="lqu")
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("gamma-table", help="dephasing strengths at the 90% C.L. bound")
    p.add_argument("--gamma90", type=float, default=GAMMA_90_GEV)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gamma_table)

    p = sub.add_parser("sweep", help="baseline sweep to CSV/JSONL")
    p.add_argument("--config", help="INI config file ([sweep] section)")
    p.add_argument("--preset", choices=scan.PRESET_NAMES)
    p.add_argument("--kamland-convention", choices=scan.KAMLAND_CONVENTIONS)
    p.add_argument("--r", help="comma-separated damping fractions, e.g. 0,0.25,0.5,1")
    p.add_argument("--grid", type=int)
    p.add_argument("--L-min", dest="L_min", type=float)
    p.add_argument("--L-max", dest="L_max", type=float)
    p.add_argument("--E", dest="E", type=float, help="energy in GeV (MeV with --mev)")
    p.add_argument("--mev", action="store_true")
    p.add_argument("--gamma90", type=float)
    p.add_argument("--no-extend", action="store_true", help="keep the baseline range even if it spans < pi in phase")
    p.add_argument("--format", choices=scan.FORMATS)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", help="closed forms vs brute-force oracle")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--measures", help="comma-separated subset of concurrence,lqu,discord")
    p.add_argument("--grid", type=int, default=oracle.MIN_GRID, help="discord measurement grid size")
    p.add_argument("--theta", type=float, help="force the mixing angle of every sample")
    p.add_argument("--report", help="discrepancy report path (JSONL)")
    p.add_argument("--config")
    p.add_argument("--tol-scale", type=float, default=1.0, help=argparse.SUPPRESS)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args, parser)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
