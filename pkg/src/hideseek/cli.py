"""Command-line front end: solve, voi, sweep, simulate, and verify.

Exit codes are stable: 0 success, 2 usage error, 3 instance error,
4 numerical/solver failure. Output is deterministic byte-for-byte for
identical invocations.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .experiments import MODELS, simulate, sweep, sweep_to_csv, verify_bounds
from .instance import Instance, InstanceError, load_instance
from .matrixgame import GameSolution, SolverError, solve_zero_sum
from .payoff import (
    CONVENTIONS,
    FEEDBACK_MODES,
    PayoffMatrix,
    SwitchConfig,
    base_matrix,
    dump_matrix,
    feedback_matrix,
    lift_feedback,
    switch_matrix,
)
from .routes import RouteSet, enumerate_routes, prefix_classes
from .voi import CSTAR_VARIANTS, build_voi_report, report_to_csv

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INSTANCE = 3
EXIT_SOLVER = 4


class UsageError(Exception):
    pass


def _fmt(x: float, prec: int) -> str:
    x = float(x)
    if x == 0:
        x = 0.0  # avoid "-0.0000"
    return f"{x:.{prec}f}"


def _parse_floats(text: str, flag: str) -> list[float]:
    items = [s for s in text.split(",") if s.strip()]
    try:
        return [float(s) for s in items]
    except ValueError as exc:
        raise UsageError(f"bad value in {flag}: {exc}") from exc


def _parse_ints(text: str, flag: str) -> list[int]:
    items = [s for s in text.split(",") if s.strip()]
    try:
        return [int(s) for s in items]
    except ValueError as exc:
        raise UsageError(f"bad value in {flag}: {exc}") from exc


def _check_t(t: int, n: int) -> None:
    if not 1 <= t <= n - 1:
        raise UsageError(f"--t-reveal must be in 1..{n - 1} for this instance, got {t}")


def _strategy_lines(weights, labels, prec: int) -> list[str]:
    lines = []
    for idx, w in enumerate(weights):
        if w > 1e-9:
            lines.append(f"  {labels[idx]}: {_fmt(w, prec)}")
    return lines


def _route_labels(rs: RouteSet) -> list[str]:
    return [f"r{j + 1}=({','.join(str(v) for v in r)})" for j, r in enumerate(rs.routes)]


def _prefix_labels(classes) -> list[str]:
    return [f"h=({','.join(str(v) for v in s.prefix.nodes)})" for s in classes]


def _print_solution(out, title: str, sol: GameSolution, row_labels, col_labels, prec: int):
    out.write(f"model: {title}\n")
    out.write(f"value: {_fmt(sol.value, prec)}\n")
    out.write(f"row gap: {sol.row_gap:.3e}\n")
    out.write(f"col gap: {sol.col_gap:.3e}\n")
    out.write("seeker mix:\n")
    out.write("\n".join(_strategy_lines(sol.row_strategy.weights, row_labels, prec)) + "\n")
    out.write("hider mix:\n")
    out.write("\n".join(_strategy_lines(sol.col_strategy.weights, col_labels, prec)) + "\n")


def _model_matrix(inst: Instance, rs: RouteSet, args) -> tuple[PayoffMatrix, list[str]]:
    A = base_matrix(inst, rs)
    if args.model == "base":
        if args.t_reveal is not None or args.cost is not None:
            raise UsageError("--t-reveal/--cost apply only to restricted or feedback models")
        return A, _route_labels(rs)
    t = 1 if args.t_reveal is None else args.t_reveal
    c = 1.0 if args.cost is None else args.cost
    _check_t(t, rs.n)
    if c < 0:
        raise UsageError(f"--cost must be >= 0, got {c}")
    cfg = SwitchConfig(t, c, convention=args.convention, feedback_mode=args.feedback_mode)
    if args.model == "restricted":
        return switch_matrix(A, rs, cfg), _route_labels(rs)
    classes, _ = prefix_classes(rs, t)
    return feedback_matrix(A, rs, cfg), _prefix_labels(classes)


def cmd_solve(args, out) -> int:
    inst = load_instance(args.instance)
    rs = enumerate_routes(inst.n)
    matrix, row_labels = _model_matrix(inst, rs, args)
    sol = solve_zero_sum(matrix)
    col_labels = [str(i) for i in range(1, rs.n + 1)]
    _print_solution(out, args.model, sol, row_labels, col_labels, args.precision)
    if args.emit_matrix:
        out.write("payoff matrix:\n")
        out.write(dump_matrix(matrix))
    return EXIT_OK


def cmd_voi(args, out) -> int:
    inst = load_instance(args.instance)
    rs = enumerate_routes(inst.n)
    _check_t(args.t_reveal, rs.n)
    if args.cost < 0:
        raise UsageError(f"--cost must be >= 0, got {args.cost}")
    cfg = SwitchConfig(args.t_reveal, args.cost, convention=args.convention)
    z = None
    if args.hider_mix:
        z = np.array(_parse_floats(args.hider_mix, "--hider-mix"))
        if len(z) != rs.n or z.min() < 0 or abs(z.sum() - 1.0) > 1e-9:
            raise UsageError(f"--hider-mix must be {rs.n} nonnegative weights summing to 1")
    report = build_voi_report(inst, rs, cfg, variant=args.cstar_variant, z=z)
    if args.csv:
        out.write(report_to_csv(report))
        return EXIT_OK
    p = args.precision
    out.write(f"t_reveal: {cfg.t_reveal}\ncost: {_fmt(cfg.c, p)}\n")
    out.write(f"voi matrix ({rs.m}x{rs.n}), nonzero cells:\n")
    nonzero = [
        f"  r{j + 1},{i + 1}: {_fmt(report.voi_matrix[j, i], p)}"
        for j, i in np.argwhere(report.voi_matrix > 1e-12)
    ]
    out.write("\n".join(nonzero) + ("\n" if nonzero else "(none)\n"))
    out.write("worst-case voi per location: ")
    out.write(" ".join(_fmt(v, p) for v in report.bar_voi) + "\n")
    out.write(f"expected voi: {_fmt(report.expected_voi, p)}\n")
    out.write(f"route-averaged voi: {_fmt(report.route_averaged_voi, p)}\n")
    out.write(f"cstar table (variant={report.variant}):\n")
    for j, row in enumerate(report.cstar_matrix):
        cells = " ".join("--".rjust(p + 3) if np.isnan(v) else _fmt(v, p).rjust(p + 3) for v in row)
        out.write(f"  r{j + 1}: {cells}\n")
    out.write(f"cstar global: {_fmt(report.cstar_global, p)}\n")
    out.write(f"expected-voi bound at this cost: {_fmt(report.bound, p)}\n")
    return EXIT_OK


def cmd_sweep(args, out) -> int:
    inst = load_instance(args.instance)
    n = inst.n
    t_list = None
    if args.t_list:
        t_list = _parse_ints(args.t_list, "--t-list")
        for t in t_list:
            _check_t(t, n)
    c_grid = None
    if args.costs is not None:
        c_grid = _parse_floats(args.costs, "--costs")
        if not c_grid:
            raise UsageError("--costs is empty")
        if min(c_grid) < 0:
            raise UsageError("--costs must be nonnegative")
    rows = sweep(inst, t_list=t_list, c_grid=c_grid, convention=args.convention,
                 feedback_mode=args.feedback_mode)
    out.write(sweep_to_csv(rows))
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    inst = load_instance(args.instance)
    rs = enumerate_routes(inst.n)
    if args.trials < 1:
        raise UsageError(f"--trials must be >= 1, got {args.trials}")
    if args.cost < 0:
        raise UsageError(f"--cost must be >= 0, got {args.cost}")
    if not 1 <= args.t_reveal <= rs.n:
        raise UsageError(f"--t-reveal must be in 1..{rs.n} for simulation, got {args.t_reveal}")
    A = base_matrix(inst, rs)
    cfg = SwitchConfig(min(args.t_reveal, rs.n - 1) if rs.n > 1 else 1, args.cost)
    if args.model == "base" or args.t_reveal == rs.n:
        sol = solve_zero_sum(A)
    elif args.model == "restricted":
        sol = solve_zero_sum(switch_matrix(A, rs, cfg))
    else:
        _, pi = prefix_classes(rs, cfg.t_reveal)
        sol = solve_zero_sum(lift_feedback(feedback_matrix(A, rs, cfg), pi))
    result = simulate(
        inst, rs, args.model, sol.row_strategy, sol.col_strategy,
        args.t_reveal, args.cost, args.trials, args.seed, workers=args.workers,
    )
    p = args.precision
    out.write(f"model: {result.model}\n")
    out.write(f"trials: {result.trials}\nseed: {result.seed}\n")
    out.write(f"game value: {_fmt(sol.value, p)}\n")
    out.write(f"mean payoff: {_fmt(result.mean_payoff, p)}\n")
    out.write(f"stderr: {_fmt(result.payoff_stderr, p)}\n")
    out.write(f"ended by t: {_fmt(result.empirical_end_by_t, p)}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    inst = load_instance(args.instance)
    n = inst.n
    t_list = None
    if args.t_list:
        t_list = _parse_ints(args.t_list, "--t-list")
        for t in t_list:
            _check_t(t, n)
    c_grid = _parse_floats(args.costs, "--costs") if args.costs is not None else None
    if c_grid is not None and not c_grid:
        raise UsageError("--costs is empty")
    rows = sweep(inst, t_list=t_list, c_grid=c_grid, convention=args.convention,
                 feedback_mode=args.feedback_mode)
    report = verify_bounds(rows, inst=inst, convention=args.convention)
    for check in report.checks:
        out.write(f"{'PASS' if check.passed else 'FAIL'} {check.name}: {check.detail}\n")
    out.write("all checks passed\n" if report.passed else "some checks FAILED\n")
    return EXIT_OK if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hideseek",
        description="Two-stage hide-and-seek games with partial route revelation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("instance", help="path to an instance JSON file")
        p.add_argument("--precision", type=int, default=4, help="decimals in printed values")
        p.add_argument("--output", default=None, help="write output to this file instead of stdout")
        p.add_argument("--convention", choices=CONVENTIONS, default="total")

    p_solve = sub.add_parser("solve", help="solve one game model by LP")
    common(p_solve)
    p_solve.add_argument("--model", choices=MODELS, default="base")
    p_solve.add_argument("--t-reveal", type=int, default=None)
    p_solve.add_argument("--cost", type=float, default=None)
    p_solve.add_argument("--feedback-mode", choices=FEEDBACK_MODES, default="mixed_subgame")
    p_solve.add_argument("--emit-matrix", action="store_true")
    p_solve.set_defaults(func=cmd_solve)

    p_voi = sub.add_parser("voi", help="value-of-information report")
    common(p_voi)
    p_voi.add_argument("--t-reveal", type=int, default=1)
    p_voi.add_argument("--cost", type=float, default=1.0)
    p_voi.add_argument("--cstar-variant", choices=CSTAR_VARIANTS, default="infoset")
    p_voi.add_argument("--hider-mix", default=None, help="override z: comma-separated weights")
    p_voi.add_argument("--csv", action="store_true", help="emit the CSV serialization")
    p_voi.set_defaults(func=cmd_voi)

    p_sweep = sub.add_parser("sweep", help="cost/reveal-time sweep as CSV")
    common(p_sweep)
    p_sweep.add_argument("--t-list", default=None, help="comma-separated reveal times")
    p_sweep.add_argument("--costs", default=None, help="comma-separated switching costs")
    p_sweep.add_argument("--feedback-mode", choices=FEEDBACK_MODES, default="mixed_subgame")
    p_sweep.set_defaults(func=cmd_sweep)

    p_sim = sub.add_parser("simulate", help="Monte Carlo playout at equilibrium")
    common(p_sim)
    p_sim.add_argument("--model", choices=MODELS, default="base")
    p_sim.add_argument("--t-reveal", type=int, default=1)
    p_sim.add_argument("--cost", type=float, default=1.0)
    p_sim.add_argument("--trials", type=int, default=100000)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--workers", type=int, default=1)
    p_sim.set_defaults(func=cmd_simulate)

    p_verify = sub.add_parser("verify", help="run the bound checks over a sweep")
    common(p_verify)
    p_verify.add_argument("--t-list", default=None)
    p_verify.add_argument("--costs", default=None)
    p_verify.add_argument("--feedback-mode", choices=FEEDBACK_MODES, default="mixed_subgame")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        if args.output:
            with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
                return args.func(args, fh)
        return args.func(args, sys.stdout)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InstanceError as exc:
        print(f"instance error: {exc}", file=sys.stderr)
        return EXIT_INSTANCE
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
