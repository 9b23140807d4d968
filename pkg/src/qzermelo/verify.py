"""Independent checks of a computed control.

The Schrodinger oracle integrates ``i dU/dt = (H0 + H1(t)) U`` with classic
RK4, sampling the advected control through ``controls_at`` only; it never uses
the two-exponential propagator. ``verify_solution`` gathers the oracle and the
geometric residuals into one report.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import gmpy2
import numpy as np

from . import _highprec as hp
from .algebra import frobenius
from .config import DEFAULTS
from .errors import DimensionMismatch
from .geodesic import controls_at, evolve
from .geometry import (
    conserved_quantity_residuals,
    euler_poincare_residual,
    finsler_norm,
    first_variation,
    random_variation,
)
from .problem import ControlSolution, NavigationProblem

THRESHOLDS = {
    "endpoint_error": 1e-6,
    "oracle_gate_error": 1e-7,
    "norm_drift": 1e-12,
    "conservation_residual": 1e-7,
    "ep_residual": 1e-7,
    "finsler_deviation": 1e-10,
    "first_variation": 1e-5,
}


def polar_unitary(U: np.ndarray, iterations: int = 3) -> np.ndarray:
    """Unitary polar factor of a nearly unitary ``U`` (Newton-Schulz)."""
    n = U.shape[0]
    I = np.eye(n) if U.dtype != object else hp.eye(n)
    for _ in range(iterations):
        U = U @ (1.5 * I - 0.5 * (U.conj().T @ U))
    return U


def rk4_propagate(generators, U0: np.ndarray, h, reunitarize_every: int = DEFAULTS.reunitarize_every) -> np.ndarray:
    """Classic RK4 for ``dU/dt = A(t) U``.

    ``generators`` holds ``A`` on the half-step grid ``t_k = k h / 2``
    (``2 * steps + 1`` entries). Works on complex arrays and on object arrays
    of extended-precision numbers alike.
    """
    steps = (len(generators) - 1) // 2
    U = U0
    half = h / 2
    for n in range(steps):
        A1, A2, A3 = generators[2 * n], generators[2 * n + 1], generators[2 * n + 2]
        k1 = A1 @ U
        k2 = A2 @ (U + half * k1)
        k3 = A2 @ (U + half * k2)
        k4 = A3 @ (U + h * k3)
        U = U + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        if reunitarize_every and (n + 1) % reunitarize_every == 0:
            U = polar_unitary(U)
    return U


def integrate_schrodinger(
    H0: np.ndarray,
    H1_0: np.ndarray,
    U_I: np.ndarray,
    T: float,
    steps: int = DEFAULTS.oracle_steps,
    reunitarize_every: int = DEFAULTS.reunitarize_every,
) -> np.ndarray:
    if steps < 10:
        raise ValueError("the oracle needs at least 10 steps")
    times = np.linspace(0.0, T, 2 * steps + 1)
    gens = -1j * (H0[None] + controls_at(H0, H1_0, times))
    return rk4_propagate(gens, np.asarray(U_I, dtype=complex), T / steps, reunitarize_every)


def _precise_generators(H0, H1_0, T, steps):
    """``-i (H0 + H1(t_k))`` at ``t_k = k T / (2 steps)``, advecting by repeated products."""
    H0m, H1m = hp.to_mp(H0), hp.to_mp(H1_0)
    dt = gmpy2.mpfr(T) / (2 * steps)
    E_half = hp.expm(H0m * gmpy2.mpc(0, -1) * dt)
    E = hp.eye(H0.shape[0])
    gens = []
    minus_i = gmpy2.mpc(0, -1)
    for k in range(2 * steps + 1):
        if k:
            E = E_half @ E
        gens.append(minus_i * (H0m + E @ H1m @ hp.adjoint(E)))
    return gens


@dataclass(frozen=True)
class OrderMeasurement:
    order: float
    error_coarse: float
    error_fine: float
    coarse: int
    fine: int
    precise: bool


def convergence_order(
    H0,
    H1_0,
    U_I,
    T: float,
    coarse: int = 1000,
    fine: int = 2000,
    precise: bool = True,
    precision_bits: int = 128,
    reunitarize_every: int = DEFAULTS.reunitarize_every,
) -> OrderMeasurement:
    """Observed order ``log2(err_coarse / err_fine)`` of the RK4 oracle.

    Errors are measured against ``evolve``. With ``precise=True`` both the
    oracle and the reference run at ``precision_bits`` so that truncation
    errors far below double rounding are still resolved.
    """
    if fine % coarse:
        raise ValueError("fine step count must be a multiple of the coarse one")
    stride = fine // coarse
    if not precise:
        ref = evolve(H0, H1_0, U_I, T)
        e_c = frobenius(integrate_schrodinger(H0, H1_0, U_I, T, coarse, reunitarize_every) - ref)
        e_f = frobenius(integrate_schrodinger(H0, H1_0, U_I, T, fine, reunitarize_every) - ref)
    else:
        with hp.precision(precision_bits):
            gens = _precise_generators(H0, H1_0, T, fine)
            # re-unitarization would otherwise also remove U_I's own rounding defect
            U0 = polar_unitary(hp.to_mp(U_I), iterations=5)
            Tm = gmpy2.mpfr(T)
            minus_i = gmpy2.mpc(0, -1)
            ref = hp.expm(hp.to_mp(H0) * minus_i * Tm) @ hp.expm(hp.to_mp(H1_0) * minus_i * Tm) @ U0
            U_f = rk4_propagate(gens, U0, Tm / fine, reunitarize_every)
            U_c = rk4_propagate(gens[::stride], U0, Tm / coarse, reunitarize_every)
            e_f = frobenius(hp.to_complex(U_f - ref))
            e_c = frobenius(hp.to_complex(U_c - ref))
    order = math.log(e_c / e_f) / math.log(fine / coarse) if e_f > 0 and e_c > 0 else float("nan")
    return OrderMeasurement(order, e_c, e_f, coarse, fine, precise)


@dataclass
class VerificationReport:
    endpoint_error: float
    finsler_deviation: float | None
    norm_drift: float
    conservation_residual: float
    ep_residual: float
    first_variation_samples: list[float] | None
    oracle_gate_error: float
    seed: int = 0
    grid: int = DEFAULTS.quadrature_nodes
    strong_wind: bool = False
    notes: list[str] = field(default_factory=list)

    def failures(self, thresholds: dict[str, float] = THRESHOLDS) -> list[str]:
        bad = []
        for name in ("endpoint_error", "oracle_gate_error", "norm_drift", "conservation_residual", "ep_residual", "finsler_deviation"):
            val = getattr(self, name)
            if val is not None and not val <= thresholds[name]:
                bad.append(name)
        if self.first_variation_samples and not max(self.first_variation_samples) <= thresholds["first_variation"]:
            bad.append("first_variation")
        return bad

    @property
    def passed(self) -> bool:
        return not self.failures()

    def to_json(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        out["failures"] = self.failures()
        return out


def verify_solution(
    problem: NavigationProblem,
    solution: ControlSolution,
    grid: int = DEFAULTS.quadrature_nodes,
    seed: int = 0,
    oracle_steps: int = DEFAULTS.oracle_steps,
    variation_fields: int = DEFAULTS.variation_fields,
) -> VerificationReport:
    H0, U_I, U_F = problem.H0, problem.U_I, problem.U_F
    if solution.H1_0 is None:
        err = frobenius(U_I - U_F)
        return VerificationReport(err, 0.0, 0.0, 0.0, 0.0, [], err, seed, grid, problem.strong_wind, ["identity target"])
    if solution.H1_0.shape != H0.shape:
        raise DimensionMismatch(f"solution is {solution.H1_0.shape}, problem is {H0.shape}")

    H1_0, T = solution.H1_0, solution.T
    endpoint = frobenius(evolve(H0, H1_0, U_I, T) - U_F)
    cons, drift = conserved_quantity_residuals(H0, H1_0, T, grid)
    ts = np.linspace(0.0, T, grid)
    ep = max(euler_poincare_residual(H0, H1_0, t, 1e-5 * max(1.0, T)) for t in ts)
    oracle = frobenius(integrate_schrodinger(H0, H1_0, U_I, T, oracle_steps) - U_F)

    notes = []
    if problem.strong_wind:
        finsler_dev = None
        fv = None
        notes.append("strong wind: Randers-norm checks not applicable")
    else:
        controls = controls_at(H0, H1_0, ts)
        finsler_dev = max(abs(finsler_norm(H0 + H1, H0) - 1.0) for H1 in controls)
        fv = []
        for j in range(variation_fields):
            var = random_variation(H0.shape[0], T, grid, seed=seed + j)
            fv.append(abs(first_variation(H0, H1_0, T, var)) / var.max_norm())
    return VerificationReport(
        endpoint_error=endpoint,
        finsler_deviation=finsler_dev,
        norm_drift=drift,
        conservation_residual=cons,
        ep_residual=ep,
        first_variation_samples=fv,
        oracle_gate_error=oracle,
        seed=seed,
        grid=grid,
        strong_wind=problem.strong_wind,
        notes=notes,
    )
