"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 solver failure, 3 verification
threshold failure. Errors are written to stderr as ``{"code", "message"}``.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from .algebra import SIGMA_Z, frobenius
from .config import DEFAULT_TOL
from .continuation import solve_continuation
from .errors import BranchAmbiguity, IdentityTarget, InputError, NoRoot, SolverError, ZermeloError
from .fixedpoint import solve_fixedpoint, spin_half_closed_form
from .geodesic import covering_map_su2, sample_trajectory, write_covering_csv, write_gate_csv
from .problem import METHODS, ControlSolution, NavigationProblem, dump_json, load_json
from .verify import verify_solution

logger = logging.getLogger("qzermelo")

EXIT_OK, EXIT_INPUT, EXIT_SOLVER, EXIT_THRESHOLD = 0, 1, 2, 3
FIGURE_OMEGAS = (0.0, 0.25, 0.5, 0.75, 1.0)


def _fail(code: str, message: str, status: int) -> int:
    sys.stderr.write(json.dumps({"code": code, "message": message}) + "\n")
    return status


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_problem(path: str, args) -> NavigationProblem:
    overrides = {}
    for flag, key in (("method", "method"), ("steps", "steps"), ("quad_nodes", "quad_nodes"), ("seed", "seed")):
        val = getattr(args, flag, None)
        if val is not None:
            overrides[key] = val
    if getattr(args, "polish", False):
        overrides["polish"] = True
    if getattr(args, "allow_strong_wind", False):
        overrides["allow_strong_wind"] = True
    return NavigationProblem.from_json(
        load_json(path), project_traceless_H0=getattr(args, "project_traceless", False), **overrides
    )


def solve_problem(problem: NavigationProblem) -> ControlSolution:
    """Dispatch on ``problem.options.method``; ``auto`` tries the fixed point first."""
    opts = problem.options
    try:
        if opts.method == "fixedpoint":
            return solve_fixedpoint(problem)
        if opts.method == "continuation":
            return solve_continuation(problem)
        try:
            sol = solve_fixedpoint(problem)
            if sol.endpoint_error <= DEFAULT_TOL.endpoint_success:
                return sol
            logger.info("fixed point missed the target (%.3e); using continuation", sol.endpoint_error)
        except (NoRoot, BranchAmbiguity) as exc:
            logger.info("fixed point failed (%s); using continuation", exc.code)
        return solve_continuation(problem)
    except IdentityTarget:
        return ControlSolution(
            H1_0=None,
            T=0.0,
            method=opts.method,
            endpoint_error=frobenius(problem.U_I - problem.U_F),
        )


def cmd_solve(args) -> int:
    try:
        problem = _load_problem(args.problem, args)
    except InputError as exc:
        return _fail(exc.code, str(exc), EXIT_INPUT)
    try:
        sol = solve_problem(problem)
    except SolverError as exc:
        return _fail(exc.code, str(exc), EXIT_SOLVER)
    _emit(dump_json(sol.to_json()), args.out)
    if not sol.endpoint_error <= DEFAULT_TOL.endpoint_success:
        return _fail("endpoint_error", f"endpoint error {sol.endpoint_error:.3e} exceeds {DEFAULT_TOL.endpoint_success:g}", EXIT_SOLVER)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        problem = _load_problem(args.problem, args)
        sol = ControlSolution.from_json(load_json(args.solution))
        report = verify_solution(problem, sol, grid=args.grid, seed=problem.options.seed)
    except InputError as exc:
        return _fail(exc.code, str(exc), EXIT_INPUT)
    _emit(dump_json(report.to_json()), args.out)
    if not report.passed:
        return _fail("threshold", "failed checks: " + ", ".join(report.failures()), EXIT_THRESHOLD)
    return EXIT_OK


def _omega_path(base: Path, omega: float, multiple: bool) -> Path:
    if not multiple:
        return base
    return base.with_name(f"{base.stem}_omega{omega:g}{base.suffix or '.csv'}")


def figure_curves(omegas, samples: int) -> dict[float, np.ndarray]:
    """Covering-map curves of the spin-1/2 optimal trajectories, keyed by omega."""
    curves = {}
    for omega in omegas:
        sol = spin_half_closed_form(omega)
        traj = sample_trajectory(-omega * SIGMA_Z, sol.H1_0, np.eye(2, dtype=complex), sol.T, samples)
        curves[omega] = np.array([covering_map_su2(U) for U in traj.gates])
    return curves


def render_svg(curves: dict[float, np.ndarray], path: str | Path, size: int = 480) -> None:
    """Orthographic view of the rotation ball (radius pi) with the given curves."""
    # screen axes for a view from the (1, 1, 1) direction
    e_u = np.array([-1.0, 1.0, 0.0]) / math.sqrt(2)
    e_v = np.array([-1.0, -1.0, 2.0]) / math.sqrt(6)
    scale = 0.42 * size / math.pi
    c = size / 2

    def xy(p):
        return c + scale * float(p @ e_u), c - scale * float(p @ e_v)

    colors = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<circle cx="{c:.3f}" cy="{c:.3f}" r="{scale * math.pi:.3f}" fill="none" stroke="#999" stroke-dasharray="4 3"/>',
    ]
    for axis, label in ((np.eye(3)[0], "x"), (np.eye(3)[1], "y"), (np.eye(3)[2], "z")):
        x1, y1 = xy(axis * math.pi * 1.1)
        parts.append(f'<line x1="{c:.3f}" y1="{c:.3f}" x2="{x1:.3f}" y2="{y1:.3f}" stroke="#ccc"/>')
        parts.append(f'<text x="{x1:.3f}" y="{y1:.3f}" font-size="12" fill="#666">{label}</text>')
    for i, (omega, pts) in enumerate(curves.items()):
        coords = " ".join("{:.3f},{:.3f}".format(*xy(p)) for p in pts)
        col = colors[i % len(colors)]
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{col}" stroke-width="1.8"><title>omega={omega:g}</title></polyline>')
    for p, name in ((np.zeros(3), "U_I"), (np.array([math.pi, 0, 0]), "U_F")):
        x, y = xy(p)
        parts.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="3" fill="black"/><text x="{x + 5:.3f}" y="{y - 5:.3f}" font-size="12">{name}</text>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")


def cmd_demo(args) -> int:
    if args.samples < 2:
        return _fail("invalid_input", "samples must be at least 2", EXIT_INPUT)
    omegas = args.omega if args.omega else list(FIGURE_OMEGAS)
    curves = figure_curves(omegas, args.samples)
    base = Path(args.out)
    times = np.linspace(0.0, spin_half_closed_form(0.0).T, args.samples)
    for omega, pts in curves.items():
        lines = ["t,x,y,z"]
        lines += [",".join(repr(float(v)) for v in (t, *p)) for t, p in zip(times, pts)]
        _omega_path(base, omega, len(omegas) > 1).write_text("\n".join(lines) + "\n")
    if args.svg:
        render_svg(curves, args.svg)
    return EXIT_OK


def cmd_trajectory(args) -> int:
    try:
        problem = _load_problem(args.problem, args)
        sol = ControlSolution.from_json(load_json(args.solution))
        if sol.H1_0 is None:
            raise InputError("identity-target solution has no trajectory")
        traj = sample_trajectory(problem.H0, sol.H1_0, problem.U_I, sol.T, args.samples)
        if args.covering:
            write_covering_csv(traj, args.out)
        else:
            write_gate_csv(traj, args.out)
    except ZermeloError as exc:
        return _fail(exc.code, str(exc), EXIT_INPUT)
    except ValueError as exc:
        return _fail("invalid_input", str(exc), EXIT_INPUT)
    return EXIT_OK


def _problem_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--allow-strong-wind", action="store_true", help="accept tr(H0^2) >= 1")
    p.add_argument("--project-traceless", action="store_true", help="subtract tr(H0)/N instead of rejecting")
    p.add_argument("--seed", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qzermelo", description="Time-optimal unitary control under a background Hamiltonian.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute H1(0) and T for a problem file")
    p.add_argument("problem")
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--steps", type=int)
    p.add_argument("--quad-nodes", dest="quad_nodes", type=int)
    p.add_argument("--polish", action="store_true", help="Newton-polish the continuation result")
    p.add_argument("--out", help="write the solution here instead of stdout")
    _problem_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a solution against independent oracles")
    p.add_argument("problem")
    p.add_argument("solution")
    p.add_argument("--grid", type=int, default=401)
    p.add_argument("--out")
    _problem_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("demo", help="spin-1/2 covering-map curves for several wind strengths")
    p.add_argument("--omega", type=float, action="append", help="repeatable; default 0, 0.25, 0.5, 0.75, 1")
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--out", default="zermelo_demo.csv", help="CSV path (suffixed per omega when several)")
    p.add_argument("--svg", help="also write a static SVG projection")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("trajectory", help="sample the optimal trajectory of a solved problem")
    p.add_argument("problem")
    p.add_argument("solution")
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--out", required=True)
    p.add_argument("--covering", action="store_true", help="N = 2 only: write t,x,y,z rotation vectors")
    _problem_flags(p)
    p.set_defaults(func=cmd_trajectory)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else (logging.INFO if args.verbose == 1 else logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
