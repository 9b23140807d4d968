"""Random test instances with a known optimal answer.

A forward instance picks ``(H0, H1(0), T, U_I)`` and sets ``U_F`` by
evolving, so the control and time the solvers should recover are known.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import project_traceless, random_traceless_hermitian, unitary_exp
from .geodesic import evolve
from .problem import NavigationProblem


@dataclass(frozen=True)
class ForwardInstance:
    problem: NavigationProblem
    H1_0: np.ndarray
    T: float


def random_special_unitary(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    A = random_traceless_hermitian(n, rng) * scale
    return unitary_exp(project_traceless(A), 1.0)


def forward_instance(
    n: int,
    rng: np.random.Generator,
    T_range: tuple[float, float] = (0.2, 1.5),
    wind_range: tuple[float, float] = (0.0, 0.7),
    random_start: bool = True,
    **option_kw,
) -> ForwardInstance:
    H1_0 = random_traceless_hermitian(n, rng)
    T = float(rng.uniform(*T_range))
    H0 = random_traceless_hermitian(n, rng) * rng.uniform(*wind_range)
    U_I = random_special_unitary(n, rng, scale=rng.uniform(0.0, 2.0)) if random_start else np.eye(n, dtype=complex)
    U_F = evolve(H0, H1_0, U_I, T)
    # unitary_exp keeps det = 1 only up to rounding; renormalize the phase
    U_F = U_F / np.linalg.det(U_F) ** (1.0 / n)
    prob = NavigationProblem.create(H0, U_F, U_I, **option_kw)
    return ForwardInstance(prob, H1_0, T)
