"""Dense complex-matrix foundation for su(N) computations.

Matrices are plain ``numpy`` complex arrays. Hermitian operators are stored
exactly symmetrized; unitary gates are checked on entry. Units have hbar = 1,
so ``unitary_exp(H, t)`` is the propagator ``exp(-i H t)``.
"""

from __future__ import annotations

import functools
import logging
import math

import numpy as np
import scipy.linalg

from .config import DEFAULT_TOL
from .errors import (
    BranchAmbiguity,
    DimensionMismatch,
    EigensolverFailure,
    InputError,
    NotHermitian,
    NotUnitary,
)

logger = logging.getLogger(__name__)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


def dagger(A: np.ndarray) -> np.ndarray:
    return np.swapaxes(A, -1, -2).conj()


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B - B @ A


def frobenius(A: np.ndarray) -> float:
    return float(np.linalg.norm(A))


def _as_square(M, name: str = "matrix") -> np.ndarray:
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise DimensionMismatch(f"{name} must be a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InputError(f"{name} has non-finite entries")
    return A


def _check_same_dim(A: np.ndarray, B: np.ndarray) -> None:
    if A.shape != B.shape:
        raise DimensionMismatch(f"dimension mismatch: {A.shape} vs {B.shape}")


def make_hermitian(M, tol: float = DEFAULT_TOL.hermitian, name: str = "matrix") -> np.ndarray:
    """Validate ``M`` as Hermitian and return its exact symmetrization."""
    A = _as_square(M, name)
    defect = frobenius(A - dagger(A)) / max(1.0, frobenius(A))
    if defect > tol:
        raise NotHermitian(f"{name} is not Hermitian (relative defect {defect:.3e} > {tol:.1e})")
    return 0.5 * (A + dagger(A))


def make_special_unitary(
    M,
    unitary_tol: float = DEFAULT_TOL.unitary,
    det_tol: float = DEFAULT_TOL.determinant,
    name: str = "matrix",
) -> np.ndarray:
    U = _as_square(M, name)
    n = U.shape[0]
    defect = frobenius(dagger(U) @ U - np.eye(n))
    if defect > unitary_tol:
        raise NotUnitary(f"{name} is not unitary (||U^+U - 1||_F = {defect:.3e})")
    det = np.linalg.det(U)
    if abs(det - 1.0) > det_tol:
        raise NotUnitary(f"{name} does not have unit determinant (det = {det:.6g})")
    return U


def project_traceless(H: np.ndarray) -> np.ndarray:
    n = H.shape[-1]
    tr = np.trace(H, axis1=-2, axis2=-1)
    return H - (tr / n)[..., None, None] * np.eye(n)


def trace_inner(A: np.ndarray, B: np.ndarray) -> float:
    """``tr(A B)`` for Hermitian A, B (real by construction)."""
    A = np.asarray(A)
    B = np.asarray(B)
    _check_same_dim(A, B)
    # tr(AB) = sum_ij A_ij B_ji; the real part drops rounding-level imaginary noise
    return float(np.real(np.sum(A * B.T)))


def hermitian_eigh(H: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    try:
        w, V = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise EigensolverFailure(f"Hermitian eigensolver failed: {exc}") from exc
    return w, V


def unitary_exp(H: np.ndarray, t: float = 1.0) -> np.ndarray:
    """Return ``exp(-i H t)`` via the Hermitian eigendecomposition of ``H``.

    A nonzero trace is kept: the result then has determinant
    ``exp(-i t tr H)`` rather than 1.
    """
    w, V = hermitian_eigh(H)
    if abs(np.sum(w)) > DEFAULT_TOL.traceless:
        logger.debug("unitary_exp: tr(H) = %.3e, determinant phase %.6g", np.sum(w), -t * np.sum(w))
    return (V * np.exp(-1j * w * t)) @ dagger(V)


def traceless_log(U: np.ndarray, branch_tol: float = DEFAULT_TOL.branch) -> np.ndarray:
    """Minimal-norm traceless Hermitian ``L`` with ``exp(-i L) = U``.

    Principal eigenphases in (-pi, pi] are shifted by -2pi*sign(m) on the
    |m| eigenvalues whose shift costs least, where ``sum(phases) = 2 pi m``.
    """
    U = np.asarray(U, dtype=complex)
    n = U.shape[0]
    try:
        Tri, Z = scipy.linalg.schur(U, output="complex")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigensolverFailure(f"Schur decomposition failed: {exc}") from exc
    lam = np.diag(Tri)
    # U = Z diag(exp(i theta)) Z^+, so L = Z diag(-theta) Z^+
    theta = np.angle(lam)
    theta[theta <= -math.pi] = math.pi
    m = int(round(np.sum(theta) / (2 * math.pi)))
    shifted = np.zeros(n, dtype=bool)
    if m != 0:
        # shifting the largest phases down (or smallest up) gives the least norm
        order = np.argsort(-theta) if m > 0 else np.argsort(theta)
        idx = order[: abs(m)]
        theta[idx] -= 2 * math.pi * np.sign(m)
        shifted[idx] = True
        left = order[abs(m) - 1]
        nxt = order[abs(m)] if abs(m) < n else None
        if nxt is not None and abs(np.angle(lam[left]) - np.angle(lam[nxt])) < branch_tol:
            raise BranchAmbiguity("degenerate eigenphases make the traceless logarithm non-unique")
    if np.any(np.abs(np.abs(theta) - math.pi) < branch_tol):
        raise BranchAmbiguity("an eigenphase lies at +-pi (antipodal gate); logarithm branch is ambiguous")
    L = (Z * (-theta)) @ dagger(Z)
    L = 0.5 * (L + dagger(L))
    return project_traceless(L)


@functools.lru_cache(maxsize=None)
def _basis_cached(n: int) -> np.ndarray:
    elems = []
    s = 1.0 / math.sqrt(2.0)
    for j in range(n):
        for k in range(j + 1, n):
            sym = np.zeros((n, n), dtype=complex)
            sym[j, k] = sym[k, j] = s
            anti = np.zeros((n, n), dtype=complex)
            anti[j, k] = -1j * s
            anti[k, j] = 1j * s
            elems.extend([sym, anti])
    for l in range(1, n):
        diag = np.zeros(n, dtype=complex)
        diag[:l] = 1.0
        diag[l] = -l
        elems.append(np.diag(diag) / math.sqrt(l * (l + 1)))
    out = np.array(elems)
    out.setflags(write=False)
    return out


def orthonormal_basis(n: int) -> np.ndarray:
    """Generalized Gell-Mann matrices normalized to ``tr(B_j B_k) = delta_jk``.

    Returned as a read-only array of shape ``(n*n - 1, n, n)``; for ``n = 2``
    it is ``(sigma_x, sigma_y, sigma_z) / sqrt(2)``.
    """
    if n < 2:
        raise DimensionMismatch("basis requires N >= 2")
    return _basis_cached(int(n))


def to_coords(H: np.ndarray, basis: np.ndarray | None = None) -> np.ndarray:
    """Real coordinates of a traceless Hermitian ``H`` in the orthonormal basis."""
    if basis is None:
        basis = orthonormal_basis(H.shape[-1])
    # tr(B_k H) for each k
    return np.real(np.einsum("kij,...ji->...k", basis, H))


def from_coords(c: np.ndarray, basis: np.ndarray) -> np.ndarray:
    return np.einsum("...k,kij->...ij", np.asarray(c, dtype=float), basis)


def random_traceless_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    """Traceless Hermitian matrix with unit Frobenius norm, drawn from ``rng``."""
    M = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    H = project_traceless(0.5 * (M + dagger(M)))
    return H / frobenius(H)


def random_unit_hermitian(n: int, seed: int) -> np.ndarray:
    if n < 2:
        raise DimensionMismatch("random_unit_hermitian requires N >= 2")
    return random_traceless_hermitian(n, np.random.default_rng(seed))


def matrix_to_json(A: np.ndarray) -> list[list[list[float]]]:
    """Rows of ``[re, im]`` pairs."""
    A = np.asarray(A, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in A]


def matrix_from_json(data, name: str = "matrix") -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name}: entries must be [re, im] number pairs") from exc
    if arr.ndim != 3 or arr.shape[-1] != 2 or arr.shape[0] != arr.shape[1]:
        raise InputError(f"{name}: expected an N x N array of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]
