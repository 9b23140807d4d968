"""Closed-form optimal evolution.

The optimal control is the initial control advected by the wind,
``H1(t) = exp(-i H0 t) H1(0) exp(i H0 t)``, and the propagator factorizes as
``U(t) = exp(-i H0 t) exp(-i H1(0) t) U_I``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .algebra import SIGMA_X, SIGMA_Y, SIGMA_Z, commutator, dagger, hermitian_eigh, unitary_exp
from .config import DEFAULT_TOL
from .errors import DimensionMismatch


def control_at(H0: np.ndarray, H1_0: np.ndarray, t: float) -> np.ndarray:
    if not np.any(commutator(H0, H1_0)):
        return np.array(H1_0, dtype=complex)  # stationary control, avoid rounding
    E = unitary_exp(H0, t)
    H1 = E @ H1_0 @ dagger(E)
    return 0.5 * (H1 + dagger(H1))


def controls_at(H0: np.ndarray, H1_0: np.ndarray, times) -> np.ndarray:
    """Vectorized ``control_at`` over an array of times, shape ``(M, N, N)``."""
    times = np.asarray(times, dtype=float)
    if not np.any(commutator(H0, H1_0)):
        return np.repeat(np.asarray(H1_0, dtype=complex)[None], len(times), axis=0)
    w, V = hermitian_eigh(H0)
    K = dagger(V) @ H1_0 @ V
    # in the eigenbasis of H0, entry (a, b) picks up exp(-i (w_a - w_b) t)
    phase = np.exp(-1j * np.subtract.outer(w, w)[None, :, :] * times[:, None, None])
    H1 = V @ (K * phase) @ dagger(V)
    return 0.5 * (H1 + dagger(H1))


def _check_shapes(*mats) -> None:
    shape = np.shape(mats[0])
    if any(np.shape(M) != shape for M in mats[1:]):
        raise DimensionMismatch("H0, H1(0) and U_I must share one dimension: " + ", ".join(str(np.shape(M)) for M in mats))


def evolve(H0: np.ndarray, H1_0: np.ndarray, U_I: np.ndarray, t: float) -> np.ndarray:
    _check_shapes(H0, H1_0, U_I)
    return unitary_exp(H0, t) @ unitary_exp(H1_0, t) @ U_I


def evolve_many(H0: np.ndarray, H1_0: np.ndarray, U_I: np.ndarray, times) -> np.ndarray:
    _check_shapes(H0, H1_0, U_I)
    times = np.asarray(times, dtype=float)
    w0, V0 = hermitian_eigh(H0)
    w1, V1 = hermitian_eigh(H1_0)
    E0 = (V0[None] * np.exp(-1j * w0[None, :] * times[:, None])[:, None, :]) @ dagger(V0)
    E1 = (V1[None] * np.exp(-1j * w1[None, :] * times[:, None])[:, None, :]) @ dagger(V1)
    return E0 @ E1 @ U_I


@dataclass(frozen=True)
class Trajectory:
    """Samples ``(t, U(t), H1(t))`` on ``[0, T]`` plus the data that generated them."""

    T: float
    times: np.ndarray
    gates: np.ndarray
    controls: np.ndarray
    H0: np.ndarray
    H1_0: np.ndarray
    U_I: np.ndarray

    @property
    def dim(self) -> int:
        return self.H0.shape[0]

    def __len__(self) -> int:
        return len(self.times)

    def total_hamiltonians(self) -> np.ndarray:
        return self.H0[None] + self.controls


def sample_trajectory(H0, H1_0, U_I, T: float, count: int) -> Trajectory:
    if count < 2:
        raise ValueError("a trajectory needs at least two samples")
    times = np.linspace(0.0, T, count)
    gates = evolve_many(H0, H1_0, U_I, times)
    gates[0] = U_I
    controls = controls_at(H0, H1_0, times)
    controls[0] = H1_0
    return Trajectory(float(T), times, gates, controls, H0, H1_0, U_I)


def covering_map_su2(U: np.ndarray, tol: float = DEFAULT_TOL.branch) -> np.ndarray:
    """Rotation vector ``theta * n`` (``|theta| <= pi``) of a 2x2 special unitary.

    Writes ``U = cos(theta/2) - i sin(theta/2) n.sigma``. ``U`` and ``-U`` give
    the same rotation; on the sphere ``theta = pi`` the axis sign is fixed so
    that its first nonzero component is positive.
    """
    U = np.asarray(U, dtype=complex)
    if U.shape != (2, 2):
        raise DimensionMismatch(f"covering map is defined for 2x2 gates, got {U.shape}")
    a0 = 0.5 * np.real(np.trace(U))
    a = np.array([0.5 * np.real(1j * np.trace(s @ U)) for s in (SIGMA_X, SIGMA_Y, SIGMA_Z)])
    if abs(a0) <= tol:
        nz = np.flatnonzero(np.abs(a) > tol)
        if nz.size and a[nz[0]] < 0:
            a = -a
        a0 = 0.0
    elif a0 < 0:
        a0, a = -a0, -a
    s = float(np.linalg.norm(a))
    if s == 0.0:
        return np.zeros(3)
    theta = 2.0 * math.atan2(s, a0)
    return theta * a / s


def write_covering_csv(traj: Trajectory, path: str | Path) -> None:
    if traj.dim != 2:
        raise DimensionMismatch("covering-map export needs N = 2")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "x", "y", "z"])
        for t, U in zip(traj.times, traj.gates):
            w.writerow([repr(float(t))] + [repr(float(v)) for v in covering_map_su2(U)])


def _entry_label(j: int, k: int, n: int) -> str:
    return f"{j}{k}" if n <= 10 else f"{j}_{k}"


def write_gate_csv(traj: Trajectory, path: str | Path) -> None:
    """Row-major ``t,re_jk,im_jk,...`` export of the sampled gates."""
    n = traj.dim
    header = ["t"]
    for j in range(n):
        for k in range(n):
            lab = _entry_label(j, k, n)
            header += [f"re_{lab}", f"im_{lab}"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for t, U in zip(traj.times, traj.gates):
            row = [repr(float(t))]
            for z in U.ravel():
                row += [repr(float(z.real)), repr(float(z.imag))]
            w.writerow(row)
