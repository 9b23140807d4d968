"""Extended-precision matrix helpers on numpy object arrays of ``gmpy2.mpc``.

Only used to measure the convergence order of the RK4 oracle when its
truncation error is below double-precision rounding.
"""

from __future__ import annotations

import contextlib
import math

import gmpy2
import numpy as np


@contextlib.contextmanager
def precision(bits: int):
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        yield


def to_mp(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    out = np.empty(A.shape, dtype=object)
    for idx, z in np.ndenumerate(A):
        out[idx] = gmpy2.mpc(z.real, z.imag)
    return out


def to_complex(A: np.ndarray) -> np.ndarray:
    out = np.empty(A.shape, dtype=complex)
    for idx, z in np.ndenumerate(A):
        out[idx] = complex(z)
    return out


def eye(n: int) -> np.ndarray:
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = gmpy2.mpc(1 if i == j else 0)
    return out


def adjoint(A: np.ndarray) -> np.ndarray:
    return A.conj().T


def expm(X: np.ndarray) -> np.ndarray:
    """Taylor series with scaling and squaring at the ambient precision."""
    n = X.shape[0]
    norm = float(np.linalg.norm(to_complex(X)))
    s = max(0, math.ceil(math.log2(norm / 0.25))) if norm > 0 else 0
    Y = X / gmpy2.mpfr(2) ** s
    tol = gmpy2.mpfr(2) ** (-gmpy2.get_context().precision - 4)
    result = eye(n)
    term = eye(n)
    k = 1
    while True:
        term = term @ Y / k
        result = result + term
        if max(abs(z) for z in term.ravel()) < tol:
            break
        k += 1
    for _ in range(s):
        result = result @ result
    return result
