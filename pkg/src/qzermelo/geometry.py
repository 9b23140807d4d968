"""Quantum Randers norm, journey time, and optimality diagnostics.

Tangent vectors of SU(N) are represented by Hermitian ``H`` with
``xi = -i H``; the wind is ``-i H0``. Traces below follow that convention.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .algebra import commutator, dagger, frobenius, random_traceless_hermitian, trace_inner
from .config import DEFAULT_TOL, DEFAULTS
from .errors import EndpointViolation, WindTooStrong
from .geodesic import Trajectory, control_at, controls_at


def _ctrace(A: np.ndarray, B: np.ndarray) -> complex:
    return complex(np.sum(A * B.T))


def _wind_margin(H0: np.ndarray) -> float:
    a = trace_inner(H0, H0)
    if a >= 1.0 - DEFAULT_TOL.wind:
        raise WindTooStrong(f"tr(H0^2) = {a:.6g} >= 1: the Randers norm is undefined")
    return 1.0 - a


def _randers_root(xi: np.ndarray, H0: np.ndarray, one_minus_a: float) -> tuple[complex, complex]:
    """Return ``(sqrt(...), tr(xi H0))`` with the root branch making ``i*sqrt`` positive."""
    t_xh = _ctrace(xi, H0)
    S = t_xh**2 + _ctrace(xi, xi) * one_minus_a
    if S.real > 1e-12 * max(1.0, abs(S)):
        raise ArithmeticError(f"Randers radicand has positive real part {S.real:.3e}")
    r = cmath.sqrt(S)
    if (1j * r).real < 0:
        r = -r
    return r, t_xh


def finsler_norm(H_total: np.ndarray, H0: np.ndarray) -> float:
    """Randers norm of ``xi = -i H_total`` under wind ``-i H0``.

    Equals 1 whenever ``H_total = H0 + H1`` with ``tr(H1^2) = 1``.
    """
    om = _wind_margin(H0)
    xi = -1j * np.asarray(H_total)
    r, t_xh = _randers_root(xi, H0, om)
    return float((1j * (r - t_xh) / om).real)


def finsler_differential(H_total: np.ndarray, H0: np.ndarray, K: np.ndarray) -> float:
    """Directional derivative of the norm at ``xi = -i H_total`` along ``nu = -i K``."""
    om = _wind_margin(H0)
    xi = -1j * np.asarray(H_total)
    nu = -1j * np.asarray(K)
    r, t_xh = _randers_root(xi, H0, om)
    t_nh = _ctrace(nu, H0)
    val = -1j * t_nh / om + 1j * (t_xh * t_nh + om * _ctrace(xi, nu)) / (om * r)
    return float(val.real)


def journey_time(traj: Trajectory, H0: np.ndarray | None = None) -> float:
    """Composite-Simpson integral of the Randers norm along the sampled path."""
    if H0 is None:
        H0 = traj.H0
    if len(traj) < 2 or traj.times[-1] == traj.times[0]:
        return 0.0
    F = np.array([finsler_norm(H0 + H1, H0) for H1 in traj.controls])
    return float(simpson(F, x=traj.times))


def _fd_step(T: float = 1.0) -> float:
    return 1e-5 * max(1.0, T)


def euler_poincare_residual(H0, H1_0, t: float, h: float | None = None) -> float:
    """``||dH1/dt + i[H0, H1]||_F`` with dH1/dt from central differences of ``control_at``."""
    h = _fd_step() if h is None else h
    H1 = control_at(H0, H1_0, t)
    dH1 = (control_at(H0, H1_0, t + h) - control_at(H0, H1_0, t - h)) / (2 * h)
    return frobenius(dH1 + 1j * commutator(H0, H1))


def euler_poincare_residual_analytic(H0, H1_0, t: float) -> float:
    H1 = control_at(H0, H1_0, t)
    dH1 = -1j * commutator(H0, H1)
    return frobenius(dH1 + 1j * commutator(H0, H1))


def conserved_quantity_residuals(H0, H1_0, T: float, samples: int, h: float | None = None) -> tuple[float, float]:
    """``(max |tr(H0 dH1/dt)|, max |tr(H1(t)^2) - 1|)`` over a uniform grid."""
    h = _fd_step(T) if h is None else h
    ts = np.linspace(0.0, T, samples)
    H1 = controls_at(H0, H1_0, ts)
    dH1 = (controls_at(H0, H1_0, ts + h) - controls_at(H0, H1_0, ts - h)) / (2 * h)
    cons = max(abs(trace_inner(H0, d)) for d in dH1)
    norm = max(abs(trace_inner(X, X) - 1.0) for X in H1)
    return float(cons), float(norm)


@dataclass(frozen=True)
class VariationField:
    """Sampled su(N) variation ``eta(t)`` (Hermitian, traceless) and its time derivative."""

    times: np.ndarray
    values: np.ndarray
    derivatives: np.ndarray
    endpoint_fixed: bool = True

    def max_norm(self) -> float:
        return float(np.max(np.linalg.norm(self.values, axis=(1, 2))))


def _sine_modes(T: float, nodes: int, amplitudes: np.ndarray) -> VariationField:
    ts = np.linspace(0.0, T, nodes)
    k = np.arange(1, len(amplitudes) + 1)
    arg = np.pi * np.outer(ts, k) / T
    s = np.sin(arg)
    ds = np.cos(arg) * (np.pi * k / T)
    vals = np.einsum("mk,kij->mij", s, amplitudes)
    ders = np.einsum("mk,kij->mij", ds, amplitudes)
    vals[0] = 0.0
    vals[-1] = 0.0
    return VariationField(ts, vals, ders, True)


def random_variation(n: int, T: float, nodes: int = DEFAULTS.quadrature_nodes, seed: int = 0, modes: int = 3) -> VariationField:
    """Smooth endpoint-fixed variation: a few sine modes with random traceless amplitudes."""
    rng = np.random.default_rng(seed)
    amps = np.array([random_traceless_hermitian(n, rng) * rng.normal() / k for k in range(1, modes + 1)])
    return _sine_modes(T, nodes, amps)


def bump_variation(direction: np.ndarray, T: float, nodes: int = DEFAULTS.quadrature_nodes) -> VariationField:
    """``eta(t) = sin(pi t / T) * direction``."""
    return _sine_modes(T, nodes, np.asarray(direction)[None])


def _check_endpoints(variation: VariationField) -> None:
    ends = max(frobenius(variation.values[0]), frobenius(variation.values[-1]))
    if not variation.endpoint_fixed or ends > 1e-14:
        raise EndpointViolation(f"variation must vanish at both endpoints (max endpoint norm {ends:.3e})")


def first_variation_along(H0: np.ndarray, controls: np.ndarray, variation: VariationField) -> float:
    """First variation of the energy ``1/2 int F^2 dt`` along a sampled path.

    ``controls`` holds ``H1`` at ``variation.times``. The admissible change of
    the velocity is ``delta xi = d(eta_hat)/dt - [xi, eta_hat]`` with
    ``eta_hat = -i eta``, i.e. the Hermitian direction ``deta/dt + i[H, eta]``.
    """
    _check_endpoints(variation)
    if not np.any(variation.values) and not np.any(variation.derivatives):
        return 0.0
    vals = np.empty(len(variation.times))
    for m, (H1, eta, deta) in enumerate(zip(controls, variation.values, variation.derivatives)):
        H = H0 + H1
        K = deta + 1j * commutator(H, eta)
        K = 0.5 * (K + dagger(K))
        vals[m] = finsler_norm(H, H0) * finsler_differential(H, H0, K)
    return float(simpson(vals, x=variation.times))


def first_variation(H0, H1_0, T: float, variation: VariationField) -> float:
    """First variation along the advected-control path through ``H1_0``."""
    _check_endpoints(variation)
    controls = controls_at(H0, H1_0, variation.times)
    return first_variation_along(H0, controls, variation)
