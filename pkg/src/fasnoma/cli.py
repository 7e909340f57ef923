"""Command-line front end: scenario sweeps, cross-validation, CDF dumps.

Subcommands:
  sweep     emit the (grid point, user, method) BLER table as CSV
  validate  run the analytic-vs-simulation cross-checks and report pass/fail
  cdf       dump the analytic and empirical SINR CDFs on a tau grid
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from contextlib import nullcontext

import numpy as np

from .bler import asymptotic_blers, diversity_slope, theoretical_blers
from .blocklength import linear_params
from .cdf_series import cdf_gamma_cc, cdf_gamma_sic
from .channel import make_correlation_model
from .config import ConfigError, load_config, parse_set_flags
from .montecarlo import cc_sinr_map, empirical_cdf, sic_sinr_map, simulate_blers
from .sweep import run_sweep, write_csv

__all__ = ["main", "run_validation"]


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON scenario file")
    parser.add_argument("--preset", help="named preset scenario")
    parser.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override one field (repeatable)")
    parser.add_argument("--seed", type=int, help="Monte Carlo seed")
    parser.add_argument("--trials", type=int, help="Monte Carlo trials")
    parser.add_argument("--out", default="-", help="output path, '-' for stdout")


def _load(args) -> tuple:
    overrides = parse_set_flags(args.set)
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    return load_config(args.config, overrides, preset=args.preset)


def _open_out(path: str):
    if path == "-":
        return nullcontext(sys.stdout)
    return open(path, "w", newline="")


def _cmd_sweep(args) -> int:
    cfg, mc_cfg, spec = _load(args)
    rows, ok = run_sweep(cfg, mc_cfg, spec, scenario_id=args.scenario_id,
                         workers=args.workers)
    with _open_out(args.out) as stream:
        write_csv(rows, stream)
    return 0 if ok else 1


def run_validation(cfg, mc_cfg, spec, tolerance_scale: float = 1.0):
    """Cross-check report: list of (name, passed, measured, allowed) tuples.

    Covers the N=1 closed form, theory vs Monte Carlo at the configured
    scenario, theory vs asymptote at high SNR, and both diversity slopes.
    """
    checks = []

    model1 = make_correlation_model(1, cfg.W, cfg.sigma2)
    c = cfg.d_c ** cfg.a / (cfg.alpha_c * cfg.rho * cfg.sigma2)
    worst = max(abs(cdf_gamma_cc(tau, cfg, model1) - (1.0 - math.exp(-c * tau)))
                for tau in (0.01, 0.1, 1.0, 10.0))
    checks.append(("n1_closed_form", worst, 1e-10 * tolerance_scale))

    model = make_correlation_model(cfg.N, cfg.W, cfg.sigma2)
    theory = theoretical_blers(cfg, model, spec.u_p)
    sim = simulate_blers(cfg, model, model, mc_cfg)
    for name, t, est in (("eps_cc", theory.eps_cc, sim.eps_cc),
                         ("eps_ce", theory.eps_ce, sim.eps_ce),
                         ("eps_e", theory.eps_e, sim.eps_e)):
        allowed = max(0.05 * est.mean, 3.0 * est.stderr) * tolerance_scale
        checks.append((f"theory_vs_mc_{name}", abs(t - est.mean), allowed))

    cfg60 = cfg.replace(rho_db=60.0)
    t60 = theoretical_blers(cfg60, model, spec.u_p)
    a60 = asymptotic_blers(cfg60, model)
    for name, tv, av in (("eps_cc", t60.eps_cc, a60.eps_cc),
                         ("eps_e", t60.eps_e, a60.eps_e)):
        ratio = tv / av if av > 0 else math.inf
        checks.append((f"asymptote_ratio_{name}", abs(ratio - 1.0),
                       0.1 * tolerance_scale))

    asym_pts = [(r, asymptotic_blers(cfg.replace(rho_db=r), model).eps_cc)
                for r in (50.0, 60.0)]
    checks.append(("asymptotic_slope", abs(diversity_slope(asym_pts) + cfg.N),
                   1e-10 * tolerance_scale))
    theo_pts = [(r, theoretical_blers(cfg.replace(rho_db=r), model, spec.u_p).eps_cc)
                for r in (50.0, 55.0, 60.0, 65.0, 70.0)]
    checks.append(("theory_slope", abs(diversity_slope(theo_pts) + cfg.N),
                   0.05 * cfg.N * tolerance_scale))

    return [(name, measured <= allowed, measured, allowed)
            for name, measured, allowed in checks]


def _cmd_validate(args) -> int:
    cfg, mc_cfg, spec = _load(args)
    results = run_validation(cfg, mc_cfg, spec, tolerance_scale=args.tolerance_scale)
    with _open_out(args.out) as stream:
        for name, passed, measured, allowed in results:
            stream.write(f"[{'PASS' if passed else 'FAIL'}] {name}: "
                         f"measured={measured:.3e} allowed={allowed:.3e}\n")
        n_fail = sum(1 for r in results if not r[1])
        stream.write(f"{len(results) - n_fail}/{len(results)} checks passed\n")
    return 0 if n_fail == 0 else 1


def _parse_grid(text: str | None, default_stop: float) -> np.ndarray:
    if text is None:
        return np.linspace(0.0, default_stop, 50)
    try:
        start, stop, count = text.split(":")
        return np.linspace(float(start), float(stop), int(count))
    except ValueError as exc:
        raise ConfigError(f"--grid expects start:stop:count, got {text!r}") from exc


def _cmd_cdf(args) -> int:
    cfg, mc_cfg, spec = _load(args)
    model = make_correlation_model(cfg.N, cfg.W, cfg.sigma2)
    ceiling = cfg.alpha_e / cfg.alpha_c
    if args.metric == "cc":
        default_stop = linear_params(cfg.Nc, cfg.L).u
        analytic = lambda tau: cdf_gamma_cc(tau, cfg, model)
        mapping = cc_sinr_map(cfg)
    else:
        distance = cfg.d_c if args.metric == "ce" else cfg.d_e
        default_stop = min(linear_params(cfg.Ne, cfg.L).u, 0.999 * ceiling)
        analytic = lambda tau: cdf_gamma_sic(tau, cfg, model, distance)
        mapping = sic_sinr_map(cfg, distance)
    grid = _parse_grid(args.grid, default_stop)
    emp = empirical_cdf(model, mapping, mc_cfg, grid)
    with _open_out(args.out) as stream:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(("tau", "analytic", "empirical"))
        for tau, e in zip(grid, emp):
            writer.writerow((f"{tau:.9g}", f"{analytic(float(tau)):.9g}", f"{e:.9g}"))
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fasnoma",
        description="Average BLER of a fluid-antenna NOMA short-packet link")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="run a scenario sweep, emit CSV")
    _add_common(p_sweep)
    p_sweep.add_argument("--scenario-id", default="scenario")
    p_sweep.add_argument("--workers", type=int, default=1)

    p_val = sub.add_parser("validate", help="run analytic-vs-simulation checks")
    _add_common(p_val)
    p_val.add_argument("--tolerance-scale", type=float, default=1.0,
                       help="multiply every allowed deviation (diagnostic)")

    p_cdf = sub.add_parser("cdf", help="dump analytic vs empirical CDF")
    _add_common(p_cdf)
    p_cdf.add_argument("--metric", choices=("cc", "ce", "e"), default="cc")
    p_cdf.add_argument("--grid", help="tau grid as start:stop:count")

    args = parser.parse_args(argv)
    try:
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "validate":
            return _cmd_validate(args)
        return _cmd_cdf(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
