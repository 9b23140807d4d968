"""Wind homotopy: follow the optimal ``(H1(0), T)`` as the wind grows from 0 to H0.

For wind ``lam * H0`` the geodesic is
``U_lam(t) = exp(-i lam H0 t) exp(-i K t) U_I`` with ``K = H1(0, lam)``.
Requiring ``U_lam(T_lam) = U_F`` for all ``lam`` and conjugating by ``U_I``
gives a linear equation for ``(K', T')``::

    0 = int_0^T exp(iKt) (H0 + i t [K, H0] + K') exp(-iKt) dt
        + T' (exp(iKT) lam H0 exp(-iKT) + K)

closed by ``tr(K K') = 0``. The t-integral uses Gauss-Legendre nodes.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .algebra import (
    commutator,
    dagger,
    from_coords,
    frobenius,
    hermitian_eigh,
    orthonormal_basis,
    to_coords,
    traceless_log,
    unitary_exp,
)
from .config import DEFAULT_TOL, DEFAULTS
from .errors import IdentityTarget, NoConvergence, SingularSystem
from .problem import ControlSolution, NavigationProblem, normalize_control

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HomotopyState:
    lam: float
    H1_0: np.ndarray
    T: float


@dataclass(frozen=True)
class DerivativeSystem:
    """Rows: ``N^2 - 1`` basis projections, then the constraint row.
    Columns: coordinates of ``H1'(0)`` in ``basis``, then ``T'``."""

    matrix: np.ndarray
    rhs: np.ndarray
    basis: np.ndarray
    condition: float


def windfree_seed(U_I: np.ndarray, U_F: np.ndarray) -> HomotopyState:
    L = traceless_log(U_F @ dagger(U_I))
    T = frobenius(L)
    if T <= DEFAULT_TOL.identity_target:
        raise IdentityTarget("U_F equals U_I; nothing to steer")
    return HomotopyState(0.0, L / T, T)


@functools.lru_cache(maxsize=16)
def _legendre_nodes(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(nodes)


def _gauss_legendre(T: float, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = _legendre_nodes(nodes)
    return 0.5 * T * (x + 1.0), 0.5 * T * w


def assemble_derivative_system(
    state: HomotopyState, H0: np.ndarray, quad_nodes: int = DEFAULTS.quad_nodes
) -> DerivativeSystem:
    K, T, lam = state.H1_0, state.T, state.lam
    n = K.shape[0]
    basis = orthonormal_basis(n)
    d = len(basis)
    t, wt = _gauss_legendre(T, quad_nodes)

    w, V = hermitian_eigh(K)
    Vh = dagger(V)
    # exp(iKt) A exp(-iKt) = V ((V^+ A V) * exp(i (w_a - w_b) t)) V^+
    phase = np.exp(1j * np.subtract.outer(w, w)[None] * t[:, None, None])
    W0 = np.einsum("m,mab->ab", wt, phase)
    W1 = np.einsum("m,mab->ab", wt * t, phase)

    def conj_in(A):
        return Vh @ A @ V

    def conj_out(A):
        X = V @ A @ Vh
        return 0.5 * (X + dagger(X))

    H0e = conj_in(H0)
    R0 = conj_out(H0e * W0 + conj_in(1j * commutator(K, H0)) * W1)
    cols = conj_out(np.einsum("ab,kab->kab", W0, Vh[None] @ basis @ V[None]))
    endT = np.exp(1j * np.subtract.outer(w, w) * T)
    D = conj_out(lam * H0e * endT) + K

    A = np.zeros((d + 1, d + 1))
    b = np.zeros(d + 1)
    A[:d, :d] = to_coords(cols, basis).T
    A[:d, d] = to_coords(D, basis)
    b[:d] = -to_coords(R0, basis)
    A[d, :d] = to_coords(K, basis)
    return DerivativeSystem(A, b, basis, float(np.linalg.cond(A)))


def homotopy_rhs(
    state: HomotopyState, H0: np.ndarray, quad_nodes: int = DEFAULTS.quad_nodes
) -> tuple[np.ndarray, float, float]:
    """``(dH1_0/dlam, dT/dlam, condition number)`` at ``state``."""
    sys_ = assemble_derivative_system(state, H0, quad_nodes)
    if not np.isfinite(sys_.condition) or sys_.condition > DEFAULT_TOL.singular_condition:
        raise SingularSystem(
            f"derivative system is singular at lambda = {state.lam:.6g} (cond = {sys_.condition:.3e})",
            lam=state.lam,
            condition=sys_.condition,
        )
    lu = scipy.linalg.lu_factor(sys_.matrix)
    x = scipy.linalg.lu_solve(lu, sys_.rhs)
    return from_coords(x[:-1], sys_.basis), float(x[-1]), sys_.condition


def _integrate(problem: NavigationProblem, seed: HomotopyState, steps: int, quad_nodes: int, record=None):
    H0 = problem.H0
    K, T = seed.H1_0, seed.T
    h = 1.0 / steps
    cond_max = 0.0
    drift_max = 0.0
    for i in range(steps):
        lam = i * h

        def f(l, Kc, Tc):
            nonlocal cond_max
            dK, dT, c = homotopy_rhs(HomotopyState(l, Kc, Tc), H0, quad_nodes)
            cond_max = max(cond_max, c)
            return dK, dT

        k1 = f(lam, K, T)
        k2 = f(lam + h / 2, K + h / 2 * k1[0], T + h / 2 * k1[1])
        k3 = f(lam + h / 2, K + h / 2 * k2[0], T + h / 2 * k2[1])
        k4 = f(lam + h, K + h * k3[0], T + h * k3[1])
        K = K + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        T = T + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        drift_max = max(drift_max, abs(frobenius(K) ** 2 - 1.0))
        K = normalize_control(K)
        if record is not None:
            record.append(HomotopyState((i + 1) * h, K, T))
    return K, T, cond_max, drift_max


def solve_continuation(
    problem: NavigationProblem,
    steps: int | None = None,
    quad_nodes: int | None = None,
    polish: bool | None = None,
    record: list | None = None,
) -> ControlSolution:
    """Integrate the homotopy from the wind-free seed to the full wind with RK4 in lambda.

    If ``record`` is a list, the state after every step is appended to it.
    """
    opts = problem.options
    steps = opts.steps if steps is None else steps
    quad_nodes = opts.quad_nodes if quad_nodes is None else quad_nodes
    polish = opts.polish if polish is None else polish
    if problem.strong_wind:
        logger.warning("continuation under strong wind (tr(H0^2) = %.4g)", problem.wind_strength)

    seed = windfree_seed(problem.U_I, problem.U_F)
    if record is not None:
        record.append(seed)
    if frobenius(problem.H0) == 0.0:
        K, T, cond_max, drift = seed.H1_0, seed.T, None, 0.0
    else:
        try:
            K, T, cond_max, drift = _integrate(problem, seed, steps, quad_nodes, record)
        except SingularSystem as exc:
            logger.error("continuation failed at lambda = %s", exc.lam)
            raise
    sol = ControlSolution(
        H1_0=K,
        T=float(T),
        method="continuation",
        endpoint_error=problem.endpoint_error(K, T),
        iterations=steps,
        condition_max=cond_max,
        extra={"norm_drift_max": float(drift), "quad_nodes": int(quad_nodes)},
    )
    if polish:
        polished = newton_polish(problem, sol.H1_0, sol.T)
        polished.method = "continuation+newton"
        polished.condition_max = cond_max
        polished.extra = {**sol.extra, "newton_iterations": polished.iterations, "unpolished_T": sol.T}
        polished.iterations = steps
        return polished
    return sol


def _endpoint_log(problem: NavigationProblem, K: np.ndarray, T: float) -> np.ndarray:
    U = unitary_exp(problem.H0, T) @ unitary_exp(K, T) @ problem.U_I
    return to_coords(traceless_log(dagger(problem.U_F) @ U))


def newton_polish(
    problem: NavigationProblem,
    H1_0: np.ndarray,
    T: float,
    tol: float = DEFAULTS.newton_tol,
    max_iter: int = DEFAULTS.newton_max_iter,
    fd_step: float = DEFAULTS.fd_step_newton,
) -> ControlSolution:
    """Newton iteration on ``log(U_F^+ U(T))`` over the unit sphere of controls and ``T``.

    The sphere is charted at each iterate by its tangent plane (``N^2 - 2``
    coordinates) plus ``T``, so the Jacobian is square; it is built by
    forward differences.
    """
    K = normalize_control(H1_0)
    T = float(T)
    basis = orthonormal_basis(K.shape[0])
    R = _endpoint_log(problem, K, T)
    it = 0
    while np.linalg.norm(R) > tol:
        if it >= max_iter:
            raise NoConvergence(f"Newton polish did not converge in {max_iter} iterations (|R| = {np.linalg.norm(R):.3e})")
        k0 = to_coords(K, basis)
        Q = scipy.linalg.null_space(k0[None])

        def chart(z):
            k = k0 + Q @ z[:-1]
            return from_coords(k / np.linalg.norm(k), basis), z[-1]

        z0 = np.zeros(len(k0))
        z0[-1] = T
        J = np.empty((len(R), len(z0)))
        for j in range(len(z0)):
            z = z0.copy()
            z[j] += fd_step
            J[:, j] = (_endpoint_log(problem, *chart(z)) - R) / fd_step
        dz = np.linalg.solve(J, -R)
        K, T = chart(z0 + dz)
        if T <= 0:
            raise NoConvergence("Newton polish drove the transit time non-positive")
        R = _endpoint_log(problem, K, T)
        it += 1
    K = normalize_control(K)
    return ControlSolution(
        H1_0=K,
        T=float(T),
        method="newton",
        endpoint_error=problem.endpoint_error(K, T),
        iterations=it,
        extra={"residual": float(np.linalg.norm(R))},
    )
