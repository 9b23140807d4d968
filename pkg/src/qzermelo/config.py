"""Numerical tolerances and solver defaults, kept in one place."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-12  # relative, ||M - M^+||_F / max(1, ||M||_F)
    unitary: float = 1e-10  # ||U^+U - 1||_F
    determinant: float = 1e-10  # |det U - 1|
    traceless: float = 1e-10  # |tr H0| accepted by the problem loader
    branch: float = 1e-9  # distance of an eigenphase from pi that counts as ambiguous
    identity_target: float = 1e-12  # ||log(U_F U_I^-1)||_F below which T = 0
    wind: float = 1e-12  # margin on tr(H0^2) < 1
    singular_condition: float = 1e12
    endpoint_success: float = 1e-6  # CLI exit-code threshold


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class SolverDefaults:
    steps: int = 100
    quad_nodes: int = 32
    polish: bool = False
    fd_step_newton: float = 1e-7
    newton_tol: float = 1e-11
    newton_max_iter: int = 25
    fixedpoint_damping: float = 0.5
    fixedpoint_tol: float = 1e-12
    fixedpoint_max_iter: int = 200
    scan_points: int = 64
    quadrature_nodes: int = 401
    oracle_steps: int = 2000
    reunitarize_every: int = 50
    variation_fields: int = 5


DEFAULTS = SolverDefaults()
