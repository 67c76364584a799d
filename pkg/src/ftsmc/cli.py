"""Command-line entry point.

Exit statuses: 0 success, 1 usage/parse error, 2 feasibility failure (or a
PPF run that left its envelope), 3 infeasible initial condition, 4 numeric
divergence.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .exceptions import ConfigError, InfeasibleGainError, NumericDivergenceError
from .gain import (
    check_feasibility_first_order,
    check_feasibility_second_order,
    inner_settle_bound,
    reach_time_bounds,
)
from .metrics import MetricsReport, compare, compute_metrics
from .ppf import scaled_disturbance_bound
from .scalarmath import erf_inv
from .scenario import Scenario, load_scenario, resolve_envelope, run_scenario
from .sim import Trajectory

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FEASIBILITY = 2
EXIT_INFEASIBLE_IC = 3
EXIT_DIVERGENCE = 4

STRIDE_ENV = "FTSMC_RECORD_STRIDE"

logger = logging.getLogger("ftsmc")


class _Abort(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status


def _fmt(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _stride_override() -> Optional[int]:
    raw = os.environ.get(STRIDE_ENV)
    if raw is None or raw.strip() == "":
        return None
    try:
        stride = int(raw)
    except ValueError:
        raise ConfigError(f"{STRIDE_ENV} must be a positive integer, got {raw!r}") from None
    if stride < 1:
        raise ConfigError(f"{STRIDE_ENV} must be a positive integer, got {raw!r}")
    return stride


def write_trajectory_csv(traj: Trajectory, path: Path) -> None:
    if traj.order == 1:
        header = ["t", "x", "xi", "u", "d", "rho"]
        cols = [traj.times, traj.states, traj.xi, traj.u, traj.d, traj.rho]
    else:
        header = ["t", "e1", "e2", "xi", "s", "u", "d", "rho"]
        cols = [traj.times, traj.e1, traj.e2, traj.xi, traj.s_var, traj.u, traj.d, traj.rho]
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*cols):
            fh.write(",".join(f"{float(v):.12g}" for v in row) + "\n")


def write_metrics_txt(report: MetricsReport, traj: Trajectory, path: Path) -> None:
    with open(path, "w") as fh:
        for key, value in report.as_dict().items():
            fh.write(f"{key} = {_fmt(value)}\n")
        for ev in traj.events:
            fh.write(f"event = {ev.kind} @ {_fmt(ev.time)}\n")


def _simulate(scn: Scenario, label: str) -> tuple[Trajectory, object]:
    traj, pf = run_scenario(scn, record_stride=_stride_override())
    if traj.first_event("infeasible_abort"):
        raise _Abort(
            EXIT_INFEASIBLE_IC,
            f"{label}: infeasible initial condition, |e(0)|={abs(scn.initial_error):g} "
            f"violates |x(0)| < rho(0) = {scn.pf.rho0:g} "
            "(set allow_envelope_inflation = true in [ppf] to widen rho0)",
        )
    return traj, pf


def _violation_status(traj: Trajectory, label: str) -> int:
    if not traj.completed:
        ev = traj.first_event("envelope_violation")
        print(f"{label}: envelope_violation at t={_fmt(ev.time)}; run halted", file=sys.stderr)
        return EXIT_FEASIBILITY
    return EXIT_OK


def cmd_simulate(args) -> int:
    scn = load_scenario(args.scenario)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    traj, pf = _simulate(scn, args.scenario)
    write_trajectory_csv(traj, out / "trajectory.csv")
    write_metrics_txt(compute_metrics(traj, pf), traj, out / "metrics.txt")
    return _violation_status(traj, args.scenario)


def _check_compatible(a: Scenario, b: Scenario) -> None:
    for name in ("order",):
        if getattr(a, name) != getattr(b, name):
            raise ConfigError(f"configuration mismatch: {name} differs ({getattr(a, name)} vs {getattr(b, name)})")
    pairs = {
        "sim.horizon": (a.sim.horizon, b.sim.horizon),
        "sim.dt": (a.sim.dt, b.sim.dt),
        "plant": (a.plant, b.plant),
        "disturbance": (a.dist, b.dist),
    }
    for key, (x, y) in pairs.items():
        if x != y:
            raise ConfigError(f"configuration mismatch: {x} vs {y}", key=key)


def write_comparison_csv(comparison, path: Path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write("Metric,non-PPF,PPF-aware,Gain(%)\n")
        for name, base, ppf, gain in comparison.rows():
            fh.write(f"{name},{base:.12g},{ppf:.12g},{gain}\n")


def cmd_compare(args) -> int:
    ppf_scn = load_scenario(args.ppf)
    base_scn = load_scenario(args.baseline)
    _check_compatible(ppf_scn, base_scn)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    # runs are independent; executed in fixed order so outputs are deterministic
    ppf_traj, ppf_pf = _simulate(ppf_scn, args.ppf)
    base_traj, base_pf = _simulate(base_scn, args.baseline)
    envelope = ppf_pf if ppf_pf is not None else base_pf

    write_trajectory_csv(ppf_traj, out / "ppf_trajectory.csv")
    write_trajectory_csv(base_traj, out / "baseline_trajectory.csv")
    ppf_report = compute_metrics(ppf_traj, envelope)
    base_report = compute_metrics(base_traj, envelope)
    comparison = compare(ppf_report, base_report)
    write_comparison_csv(comparison, out / "comparison.csv")

    print(f"matched-peak check: u_max non-PPF = {base_report.u_max:.6g}, "
          f"PPF-aware = {ppf_report.u_max:.6g}")
    for name, base, ppf, gain in comparison.rows():
        print(f"{name:>7}  non-PPF={base:<12.6g} PPF-aware={ppf:<12.6g} gain={gain}")
    return max(_violation_status(ppf_traj, args.ppf), _violation_status(base_traj, args.baseline))


def _bounds(scn: Scenario, pf) -> dict:
    """Closed-form reaching/settling bounds; values are None where gains are infeasible."""
    spec = scn.spec
    if scn.order == 1:
        xi0 = abs(erf_inv(scn.x0 / pf.rho0))
        d_out = scaled_disturbance_bound(pf, xi0, scn.dist.d_max)
        d_in = scaled_disturbance_bound(pf, spec.eps, scn.dist.d_max)
        w0 = xi0
    else:
        d_out = d_in = scn.dist.d_max
        e1, e2 = scn.e0
        if scn.controller == "ppf":
            w0 = abs(e2 + scn.sliding.c * e1 / pf.rho0)
        else:
            w0 = abs(e2 + scn.sliding.c * e1)
    out = {"w0": w0, "T_A": None, "T_B": None, "T_out": None, "T_in": None}
    try:
        out["T_A"], out["T_B"], out["T_out"] = reach_time_bounds(spec, d_out, w0)
    except InfeasibleGainError as exc:
        out["outer_error"] = str(exc)
    try:
        out["T_in"] = inner_settle_bound(spec.inner, spec.eps0, d_in)
    except InfeasibleGainError as exc:
        out["inner_error"] = str(exc)
    return out


def _feasible_envelope(scn: Scenario, label: str):
    pf = resolve_envelope(scn)
    if scn.controller == "ppf" and pf is None:
        raise _Abort(
            EXIT_INFEASIBLE_IC,
            f"{label}: infeasible initial condition, violates |x(0)| < rho(0) = {scn.pf.rho0:g}",
        )
    return pf


def cmd_feasibility(args) -> int:
    scn = load_scenario(args.scenario)
    pf = _feasible_envelope(scn, args.scenario)
    spec = scn.spec
    lines: list[tuple[str, object]] = []
    if scn.order == 1:
        xi0 = abs(erf_inv(scn.x0 / pf.rho0))
        report = check_feasibility_first_order(spec, pf, scn.dist.d_max, xi0)
        lines.append(("xi0", xi0))
        lines.append(("d_bar_xi(xi0)", report.d_bar_outer))
        lines.append(("d_bar_xi(eps)", report.d_bar_inner))
    else:
        report = check_feasibility_second_order(spec, scn.dist.d_max)
        lines.append(("d_max", scn.dist.d_max))
    lines += [
        ("k0", spec.k0),
        ("eta0", report.eta0),
        ("outer_ok", report.outer_ok),
        ("G_in(eps)", report.inner_edge_gain),
        ("eta_eps", report.eta_eps),
        ("inner_ok", report.inner_ok),
        ("residual_radius", report.residual_radius),
    ]
    bounds = _bounds(scn, pf)
    lines += [(k, bounds[k]) for k in ("T_A", "T_B", "T_out", "T_in")]
    for key, value in lines:
        print(f"{key}: {_fmt(value)}")
    if not report.outer_ok:
        print(f"outer inequality fails: k0={spec.k0:.6g} <= {report.d_bar_outer:.6g}")
    if not report.inner_ok:
        print(f"inner inequality fails: G_in(eps)={report.inner_edge_gain:.6g} "
              f"<= {report.d_bar_inner:.6g}")
    return EXIT_OK if report.ok else EXIT_FEASIBILITY


def cmd_bounds(args) -> int:
    scn = load_scenario(args.scenario)
    pf = _feasible_envelope(scn, args.scenario)
    bounds = _bounds(scn, pf)
    for key in ("T_A", "T_B", "T_out", "T_in"):
        print(f"{key}: {_fmt(bounds[key])}")
    for key in ("outer_error", "inner_error"):
        if key in bounds:
            print(f"{key}: {bounds[key]}", file=sys.stderr)
    return EXIT_OK if bounds["T_out"] is not None and bounds["T_in"] is not None else EXIT_FEASIBILITY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ftsmc",
        description="PPF-aware hybrid-gain finite-time sliding mode simulations and calculators",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log debug messages")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one scenario, write trajectory.csv and metrics.txt")
    p.add_argument("scenario")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="run a PPF and a baseline scenario, write comparison.csv")
    p.add_argument("ppf")
    p.add_argument("baseline")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("feasibility", help="check the tuning inequalities (exit 2 on failure)")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_feasibility)

    p = sub.add_parser("bounds", help="print the closed-form reaching/settling time bounds")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_bounds)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except _Abort as exc:
        print(str(exc), file=sys.stderr)
        return exc.status
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericDivergenceError as exc:
        print(f"numeric divergence: {exc} (last valid t={exc.time:.6g})", file=sys.stderr)
        return EXIT_DIVERGENCE


if __name__ == "__main__":
    sys.exit(main())
