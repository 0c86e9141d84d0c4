"""Command-line front end: scenario file in, CSV on standard output.

Every command reads one optional scenario file (defaults apply when omitted),
applies any flag overrides, and prints a CSV table with a fixed header.
Exit status: 0 on success, 1 when ``validate`` finds a KPI outside its
confidence interval, 2 on any input problem.
"""
from __future__ import annotations

import argparse
import csv
import sys

from .drift import drift_comparison
from .kpis import compute_kpis
from .optimizer import sweep as reservation_sweep
from .scenario import Scenario, ScenarioError, parse_scenario, with_overrides
from .simulator import FSU, MIN_ALLOC, NON_COOPERATIVE, SimPolicy, simulate, validate

__all__ = ["main"]

_POLICY_NAMES = {"fsu": FSU, "min-alloc": MIN_ALLOC, "nc": NON_COOPERATIVE}


def _writer():
    return csv.writer(sys.stdout, lineterminator="\n")


def _require_grid(scenario: Scenario, name: str) -> tuple:
    grid = getattr(scenario, name)
    if not grid:
        raise ScenarioError(f"{name} is empty; nothing to sweep")
    return grid


def _cmd_solve(scenario: Scenario, args: argparse.Namespace) -> int:
    config = scenario.config_at()
    report = compute_kpis(config)
    w = _writer()
    w.writerow(
        [
            "m", "n", "c_min", "r", "lambda_p", "mu_p", "lambda_s", "mu_s",
            "rho_p", "p_block", "p_ft", "c_avg_unconditioned", "c_avg_conditional",
        ]
    )
    w.writerow(
        [
            config.bands, config.channels_per_band, config.min_channels,
            config.reserved, config.pu_arrival_rate, config.pu_service_rate,
            config.su_arrival_rate, config.su_service_rate, config.pu_load,
            report.p_block, report.p_ft, report.c_avg, report.c_avg_conditional,
        ]
    )
    return 0


def _cmd_simulate(scenario: Scenario, args: argparse.Namespace) -> int:
    config = scenario.config_at()
    policy = SimPolicy(_POLICY_NAMES[args.policy])
    report = simulate(config, policy, scenario.horizon, scenario.replications, scenario.seed)
    w = _writer()
    w.writerow(
        [
            "policy", "r", "horizon", "replications", "seed",
            "su_arrivals", "su_admitted", "su_blocked", "ft_events",
            "su_force_terminated",
            "p_block", "p_block_half_width", "p_ft", "p_ft_half_width",
            "c_avg_unconditioned", "c_avg_unconditioned_half_width",
            "c_avg_conditional", "c_avg_conditional_half_width",
        ]
    )
    w.writerow(
        [
            report.policy.kind, report.config.reserved, report.horizon,
            report.replications, report.seed,
            report.su_arrivals, report.su_admitted, report.su_blocked,
            report.ft_events, report.su_force_terminated,
            report.p_block, report.p_block_half_width,
            report.p_ft, report.p_ft_half_width,
            report.c_avg, report.c_avg_half_width,
            report.c_avg_conditional, report.c_avg_conditional_half_width,
        ]
    )
    for note in report.warnings:
        print(f"warning: {note}", file=sys.stderr)
    return 0


def _cmd_validate(scenario: Scenario, args: argparse.Namespace) -> int:
    config = scenario.config_at()
    report = validate(config, scenario.horizon, scenario.replications, scenario.seed)
    w = _writer()
    w.writerow(["kpi", "analytical", "simulated", "ci_half_width", "abs_gap", "rel_gap", "covered"])
    for row in report.comparisons:
        w.writerow(
            [
                row.kpi, row.analytical, row.simulated, row.ci_half_width,
                row.abs_gap, row.rel_gap, str(row.covered).lower(),
            ]
        )
    return 0 if report.passed else 1


def _cmd_optimize(scenario: Scenario, args: argparse.Namespace) -> int:
    lambda_grid = _require_grid(scenario, "lambda_p_grid")
    rho_grid = _require_grid(scenario, "rho_s_grid")
    table = reservation_sweep(scenario.config_at(), scenario.alpha, lambda_grid, rho_grid)
    w = _writer()
    w.writerow(["lambda_p", "rho_s", "alpha", "r_star", "zeta_star"])
    for point in table:
        w.writerow(
            [
                point.pu_arrival_rate, point.su_load, scenario.alpha,
                point.policy.r_star, point.policy.zeta_star,
            ]
        )
    return 0


def _cmd_sweep(scenario: Scenario, args: argparse.Namespace) -> int:
    axis_grid = _require_grid(scenario, f"{args.axis}_grid")
    r_grid = _require_grid(scenario, "r_grid")
    w = _writer()
    w.writerow(
        [args.axis, "rho_p", "r", "p_block", "p_ft", "c_avg_unconditioned", "c_avg_conditional"]
    )
    for value in axis_grid:
        for r in r_grid:
            config = scenario.config_at(**{args.axis: value}, r=r)
            report = compute_kpis(config)
            w.writerow(
                [
                    value, config.pu_load, r, report.p_block, report.p_ft,
                    report.c_avg, report.c_avg_conditional,
                ]
            )
    return 0


def _cmd_drift(scenario: Scenario, args: argparse.Namespace) -> int:
    fsu_report, baseline_report = drift_comparison(scenario.config_at())
    w = _writer()
    w.writerow(["n_p", "n_s", "drift_fsu", "drift_baseline", "drift_fsu_strict4"])
    for i, state in enumerate(fsu_report.states):
        w.writerow(
            [
                state.pu, state.su, float(fsu_report.drift[i]),
                float(baseline_report.drift[i]), float(fsu_report.drift_strict[i]),
            ]
        )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", metavar="FILE", help="scenario file (defaults when omitted)")
    common.add_argument("--alpha", type=float, help="termination-vs-blocking cost weight")
    common.add_argument("--seed", type=int, help="master seed for simulation commands")
    common.add_argument("--horizon", type=float, help="simulated time per replication")
    common.add_argument("--reps", type=int, help="replication count")

    parser = argparse.ArgumentParser(
        prog="crvirtres",
        description="Spectrum-sharing model with virtual reservation: solve, simulate, optimize.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    solve = sub.add_parser("solve", parents=[common], help="KPIs of the base configuration")
    solve.set_defaults(handler=_cmd_solve)

    sim = sub.add_parser("simulate", parents=[common], help="event simulation of one policy")
    sim.add_argument(
        "--policy",
        choices=sorted(_POLICY_NAMES),
        default="fsu",
        help="allocation policy to play (default: fsu)",
    )
    sim.set_defaults(handler=_cmd_simulate)

    val = sub.add_parser("validate", parents=[common], help="simulation vs closed-form cross-check")
    val.set_defaults(handler=_cmd_validate)

    opt = sub.add_parser("optimize", parents=[common], help="best reservation level per grid point")
    opt.set_defaults(handler=_cmd_optimize)

    for name, axis, blurb in (
        ("sweep-pft", "lambda_p", "termination probability against primary arrival rate"),
        ("sweep-pb", "lambda_p", "blocking probability against primary arrival rate"),
        ("sweep-throughput", "lambda_p", "throughput against primary arrival rate"),
        ("sweep-mu1", "mu1", "KPIs against per-channel primary service rate"),
        ("sweep-cmin", "c_min", "KPIs against the session channel minimum"),
    ):
        p = sub.add_parser(name, parents=[common], help=blurb)
        p.set_defaults(handler=_cmd_sweep, axis=axis)

    drift = sub.add_parser("drift", parents=[common], help="per-state drift of both policies")
    drift.set_defaults(handler=_cmd_drift)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        scenario = parse_scenario(args.scenario) if args.scenario else Scenario()
        scenario = with_overrides(
            scenario,
            alpha=args.alpha,
            seed=args.seed,
            horizon=args.horizon,
            replications=args.reps,
        )
        return args.handler(scenario, args)
    except (ScenarioError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
