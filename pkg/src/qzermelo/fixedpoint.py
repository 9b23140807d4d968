"""Scalar root-finding on the closed-form boundary relation.

Since ``U_F = exp(-i H0 T) exp(-i H1(0) T) U_I``, the control must satisfy
``H1(0) T = log(exp(i H0 T) U_F U_I^-1)``; the unit-norm constraint leaves one
scalar equation ``g(T) = ||L(T)||_F - T = 0``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .algebra import SIGMA_X, SIGMA_Y, SIGMA_Z, dagger, frobenius, traceless_log, unitary_exp
from .config import DEFAULTS
from .continuation import windfree_seed
from .errors import BranchAmbiguity, NoRoot
from .geodesic import evolve
from .problem import ControlSolution, NavigationProblem, normalize_control

logger = logging.getLogger(__name__)

SPIN_HALF_T = math.pi / math.sqrt(2.0)


@dataclass(frozen=True)
class RootBracket:
    lo: float
    hi: float
    g_lo: float
    g_hi: float

    @property
    def bracketed(self) -> bool:
        return np.sign(self.g_lo) != np.sign(self.g_hi)


def boundary_log(problem: NavigationProblem, T: float) -> np.ndarray:
    """``L(T) = log(exp(i H0 T) U_F U_I^-1)``; at a root ``H1(0) = L(T) / T``."""
    V = unitary_exp(problem.H0, -T) @ problem.U_F @ dagger(problem.U_I)
    try:
        return traceless_log(V)
    except BranchAmbiguity as exc:
        raise BranchAmbiguity(f"{exc} (at T = {T:.12g})", T=T) from None


def boundary_residual(problem: NavigationProblem, T: float) -> float:
    return frobenius(boundary_log(problem, T)) - T


def _damped_iteration(problem, T, damping, tol, max_iter):
    for it in range(1, max_iter + 1):
        g = boundary_residual(problem, T)
        if abs(g) < tol:
            return T, it
        T = T + damping * g
        if T <= 0:
            return None, it
    return None, max_iter


def _scan_roots(problem, T_guess, points):
    grid = np.linspace(T_guess / 2, 2 * T_guess, points)
    vals = []
    for T in grid:
        try:
            vals.append((T, boundary_residual(problem, T)))
        except BranchAmbiguity:
            vals.append((T, None))
    roots = []
    for (a, ga), (b, gb) in zip(vals, vals[1:]):
        if ga is None or gb is None:
            continue
        if ga == 0.0:
            roots.append(a)
            continue
        br = RootBracket(a, b, ga, gb)
        if not br.bracketed:
            continue
        try:
            r = bisect(lambda x: boundary_residual(problem, x), a, b, xtol=1e-15, maxiter=200)
            # a sign change across a branch jump of the logarithm is not a root
            if abs(boundary_residual(problem, r)) < 1e-9:
                roots.append(float(r))
        except BranchAmbiguity:
            continue
    return roots


def solve_fixedpoint(
    problem: NavigationProblem,
    T_guess: float | None = None,
    damping: float = DEFAULTS.fixedpoint_damping,
    tol: float = DEFAULTS.fixedpoint_tol,
    max_iter: int = DEFAULTS.fixedpoint_max_iter,
    scan_points: int = DEFAULTS.scan_points,
) -> ControlSolution:
    """Solve ``g(T) = 0`` by damped iteration ``T <- T + damping * g(T)``.

    The window ``[T_guess/2, 2 T_guess]`` is also scanned for sign changes;
    the smallest root found wins and the others are reported as alternate
    geodesics. The default guess is the wind-free transit time.
    """
    if T_guess is None:
        T_guess = windfree_seed(problem.U_I, problem.U_F).T
    if T_guess <= 0:
        raise ValueError("T_guess must be positive")
    if problem.strong_wind:
        logger.warning("fixed-point solve under strong wind (tr(H0^2) = %.4g)", problem.wind_strength)

    ambiguity = None
    try:
        T_iter, iters = _damped_iteration(problem, T_guess, damping, tol, max_iter)
    except BranchAmbiguity as exc:
        T_iter, iters, ambiguity = None, 0, exc
    roots = _scan_roots(problem, T_guess, scan_points)
    if T_iter is not None:
        roots.append(T_iter)
    if not roots:
        if ambiguity is not None:
            raise ambiguity
        raise NoRoot(f"no root of the boundary residual near T = {T_guess:.6g}; try continuation")

    roots = sorted(roots)
    distinct = [roots[0]]
    for r in roots[1:]:
        if r - distinct[-1] > 1e-8 * max(1.0, r):
            distinct.append(r)
    T = distinct[0]
    # prefer the iterate when it is the same root (tighter residual)
    if T_iter is not None and abs(T_iter - T) <= 1e-8 * max(1.0, T):
        T = T_iter
    K = normalize_control(boundary_log(problem, T))
    return ControlSolution(
        H1_0=K,
        T=float(T),
        method="fixedpoint",
        endpoint_error=problem.endpoint_error(K, T),
        iterations=iters,
        alternate_roots=[float(r) for r in distinct[1:]],
        extra={"residual": float(abs(boundary_residual(problem, T)))},
    )


def spin_half_closed_form(omega: float) -> ControlSolution:
    """Optimal control for ``H0 = -omega sigma_z``, ``U_I = 1``, ``U_F = -i sigma_x``.

    ``T = pi / sqrt(2)`` for every ``omega`` and
    ``H1(0) = (cos(omega T) sigma_x + sin(omega T) sigma_y) / sqrt(2)``.
    """
    T = SPIN_HALF_T
    H1 = (math.cos(omega * T) * SIGMA_X + math.sin(omega * T) * SIGMA_Y) / math.sqrt(2.0)
    err = frobenius(evolve(-omega * SIGMA_Z, H1, np.eye(2), T) - (-1j * SIGMA_X))
    return ControlSolution(H1_0=H1, T=T, method="closed_form", endpoint_error=err)
