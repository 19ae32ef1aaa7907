"""Command-line front end.

Exit status: 0 success, 2 invalid input or failed validation, 3 infeasible
design, 64 command-line usage error.  Failures also print one JSON record on
stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .channel import snr_per_subcarrier
from .errors import DomainError, InfeasibleError, LayoutError, ScenarioError
from .mobility import sweep
from .network import assign_zone1_bands, ranges_overlap
from .scenario import Scenario
from .zones import (
    ase_from_rates,
    design_zone,
    handover_radius_limit,
    illum_radius_limit,
    illumination_threshold_angle,
    luminous_intensity_bounds,
    min_zone0_radius,
    zone_rates,
)

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE, EXIT_USAGE = 0, 2, 3, 64

# published peak of the ASE map, used only for the calibration note
PUBLISHED_ASE_PEAK = 1.47

ASE_COLUMNS = ["r0[m]", "n0", "eta_interpA[bit/s/Hz/m2]", "eta_interpB[bit/s/Hz/m2]"]
LIMITS_COLUMNS = ["epsilon[user/m2]", "beta", "lambda[m]", "lambda_clamped[m]", "Lambda[m]", "r_cell[m]"]
RADIUS_COLUMNS = ["u_pu", "epsilon[user/m2]", "r0_min[m]", "r0_max[m]"]
FAILURE_COLUMNS = ["beta", "epsilon[user/m2]", "delta0", "delta1", "eta_norm",
                   "handovers[per replication]", "out_of_coverage[fraction]"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _grid(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("grid is empty")
    return values


def _u64(text: str) -> int:
    v = int(text)
    if not (0 <= v < 2 ** 64):
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return repr(float(x))


def _write_csv(path: Path, header: list[str], rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--scenario", type=Path, help="scenario JSON (defaults to the hall example)")
    common.add_argument("--out", type=Path, default=Path("."), help="output directory")
    common.add_argument("--seed", type=_u64, help="root seed for the simulation")
    common.add_argument("--replications", type=int, help="Monte Carlo replications per grid point")

    p = _Parser(prog="cogvlc", description="Cognitive VLC zone design and mobility simulation")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("design", parents=[common], help="size Zone 0 of one cell")
    d.add_argument("--epsilon", type=float, help="user density [user/m^2]")
    d.add_argument("--beta", type=float, help="fraction of fast users")
    d.add_argument("--u-pu", type=int, help="primary users to serve in Zone 0")

    a = sub.add_parser("ase-map", parents=[common], help="ASE over an (r0, n0) grid")
    a.add_argument("--r0-steps", type=int, default=50, help="r0 grid points over [0, r_cell]")
    a.add_argument("--n0-steps", type=int, default=None, help="default: N_cell + 1")

    lim = sub.add_parser("limits", parents=[common], help="radius limits versus user density")
    lim.add_argument("--epsilon-grid", type=_grid,
                     default=[round(0.1 * i, 1) for i in range(1, 21)])
    lim.add_argument("--beta-grid", type=_grid, default=[0.0, 0.2, 0.4, 0.6, 0.8],
                     help="comma-separated values")

    rr = sub.add_parser("radius-range", parents=[common], help="feasible r0 versus U_pu")
    rr.add_argument("--epsilon-grid", type=_grid, default=[0.2, 0.5, 1.0, 1.5])
    rr.add_argument("--u-pu-max", type=int, default=50, help="largest U_pu in the sweep")

    s = sub.add_parser("simulate", parents=[common], help="failure rates over a beta sweep")
    s.add_argument("--beta-grid", type=_grid, default=[0.0, 0.2, 0.4, 0.6, 0.8, 1.0])
    s.add_argument("--epsilon-grid", type=_grid, default=[0.3, 0.4, 0.5])

    sub.add_parser("validate", parents=[common], help="check layout and band assignment")
    return p


def _load(args) -> Scenario:
    return Scenario.load(args.scenario) if args.scenario else Scenario()


def cmd_design(sc: Scenario, args) -> int:
    over = {k: v for k, v in (("epsilon", args.epsilon), ("beta", args.beta), ("u_pu", args.u_pu))
            if v is not None}
    ap, rx, illum, mob = sc.ap(), sc.rx(), sc.illum(), sc.mob(**over)
    zd = design_zone(ap, rx, illum, mob)
    theta_star = illumination_threshold_angle(illum.ratio) if illum.ratio > 1 else None
    report = {
        "design": {
            "r0": zd.r0, "r1_width": zd.r1_width, "n0": zd.n0, "n1": zd.n1,
            "feasible_interval": [zd.r0_min, zd.r0_max],
        },
        "constraints": {
            "r_cell": zd.r_cell,
            "Lambda": zd.big_lambda_cap,
            "lambda_raw": zd.lambda_raw if math.isfinite(zd.lambda_raw) else None,
            "lambda": zd.lambda_cap,
            "r0_min": zd.r0_min,
            "binding": "illumination" if zd.big_lambda_cap <= zd.lambda_cap else "handover",
            "i0_bounds_cd": list(luminous_intensity_bounds(illum, ap.d_v)),
            "illumination_threshold_deg": (math.degrees(theta_star.angle) if theta_star else None),
        },
        "inputs": {"epsilon": mob.epsilon, "beta": mob.beta, "b_ho": mob.b_ho, "u_pu": mob.u_pu,
                   "theta_deg": math.degrees(ap.theta), "n_cell": ap.n_cell},
        "resources": zd.resource_split(ap),
    }
    print(json.dumps(report, indent=2))
    return EXIT_OK


def cmd_ase_map(sc: Scenario, args) -> int:
    ap, rx = sc.ap(), sc.rx()
    if args.r0_steps < 2:
        raise DomainError("--r0-steps must be at least 2")
    n0_steps = args.n0_steps or ap.n_cell + 1
    r0_grid = np.linspace(0.0, ap.radius, args.r0_steps)
    n0_grid = np.unique(np.rint(np.linspace(0, ap.n_cell, n0_steps)).astype(int))
    rows, best = [], {"A": (-math.inf, None), "B": (-math.inf, None)}
    for r0 in r0_grid:
        rbar0, rbar1 = zone_rates(ap, rx, float(r0))
        for n0 in n0_grid:
            ea = ase_from_rates(ap, rbar0, rbar1, int(n0), bandwidth="sub")
            eb = ase_from_rates(ap, rbar0, rbar1, int(n0), bandwidth="cell")
            rows.append((float(r0), int(n0), ea, eb))
            if ea > best["A"][0]:
                best["A"] = (ea, (float(r0), int(n0)))
            if eb > best["B"][0]:
                best["B"] = (eb, (float(r0), int(n0)))
    path = _write_csv(args.out / "ase_map.csv", ASE_COLUMNS, rows)
    closer = min(best, key=lambda k: abs(best[k][0] - PUBLISHED_ASE_PEAK))
    note = {
        "file": str(path),
        "peak_interpA": {"eta": best["A"][0], "r0": best["A"][1][0], "n0": best["A"][1][1]},
        "peak_interpB": {"eta": best["B"][0], "r0": best["B"][1][0], "n0": best["B"][1][1]},
        "published_peak": PUBLISHED_ASE_PEAK,
        "closer_interpretation": closer,
        "center_snr_db": 10 * math.log10(snr_per_subcarrier(ap, rx, 0.0)),
    }
    (args.out / "ase_calibration.json").write_text(json.dumps(note, indent=2) + "\n")
    print(json.dumps(note, indent=2))
    return EXIT_OK


def cmd_limits(sc: Scenario, args) -> int:
    ap = sc.ap()
    big_lambda = illum_radius_limit(sc.illum(), ap.d_v, ap.m)
    rows = []
    for beta in args.beta_grid:
        for eps in args.epsilon_grid:
            try:
                lam = handover_radius_limit(ap, sc.mob(epsilon=eps, beta=beta))
                raw, clamped = lam.raw, lam.clamped
            except InfeasibleError:
                raw = clamped = float("nan")
            rows.append((eps, beta, raw if math.isfinite(raw) else float("nan"), clamped,
                         big_lambda, ap.radius))
    path = _write_csv(args.out / "limits.csv", LIMITS_COLUMNS, rows)
    print(path)
    return EXIT_OK


def cmd_radius_range(sc: Scenario, args) -> int:
    ap = sc.ap()
    big_lambda = illum_radius_limit(sc.illum(), ap.d_v, ap.m)
    rows = []
    for eps in args.epsilon_grid:
        mob = sc.mob(epsilon=eps)
        try:
            r0_max = min(big_lambda, handover_radius_limit(ap, mob).clamped)
        except InfeasibleError:
            r0_max = float("nan")
        for u in range(args.u_pu_max + 1):
            rows.append((u, eps, min_zone0_radius(sc.mob(epsilon=eps, u_pu=u)), r0_max))
    path = _write_csv(args.out / "radius_range.csv", RADIUS_COLUMNS, rows)
    print(path)
    return EXIT_OK


def cmd_simulate(sc: Scenario, args) -> int:
    over = {}
    if args.seed is not None:
        over["seed"] = args.seed
    if args.replications is not None:
        over["replications"] = args.replications
    cfg = sc.sim_config(**over)
    result = sweep(sc.layout_template(), cfg, args.beta_grid, args.epsilon_grid)
    rows = [(r.beta, r.epsilon, r.stats.delta0, r.stats.delta1, r.eta_norm,
             r.stats.handovers_per_replication, r.stats.out_of_coverage_fraction) for r in result]
    path = _write_csv(args.out / "failure.csv", FAILURE_COLUMNS, rows)
    print(path)
    return EXIT_OK


def cmd_validate(sc: Scenario, args) -> int:
    layout = sc.layout_template().build()
    sa = assign_zone1_bands(layout)
    bad_bands = [(a, b) for a, b in sorted(layout.adjacency)
                 if ranges_overlap(sa.zone1[a], sa.zone1[b])]
    bad_zone0 = layout.zone0_overlap_violations()
    report = {
        "layout": layout.to_dict(),
        "checks": {
            "band_disjointness": "OK" if not bad_bands else f"violated by {bad_bands}",
            "overlap_outside_zone0": "OK" if not bad_zone0 else f"violated by {bad_zone0}",
        },
        "warnings": list(layout.diagnostics),
    }
    print(json.dumps(report, indent=2))
    for w in layout.diagnostics:
        print(f"warning: {w}", file=sys.stderr)
    return EXIT_OK if not (bad_bands or bad_zone0) else EXIT_INVALID


COMMANDS = {
    "design": cmd_design,
    "ase-map": cmd_ase_map,
    "limits": cmd_limits,
    "radius-range": cmd_radius_range,
    "simulate": cmd_simulate,
    "validate": cmd_validate,
}


def _fail(code: int, record: dict) -> int:
    print(json.dumps(record), file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _fail(EXIT_USAGE, {"error": "usage", "message": str(exc)})
    try:
        sc = _load(args)
        return COMMANDS[args.command](sc, args)
    except InfeasibleError as exc:
        return _fail(EXIT_INFEASIBLE, exc.to_record())
    except (ScenarioError, DomainError, LayoutError) as exc:
        return _fail(EXIT_INVALID, {"error": type(exc).__name__, "message": str(exc)})


if __name__ == "__main__":
    sys.exit(main())
