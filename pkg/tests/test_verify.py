from __future__ import annotations

import math

import numpy as np
import pytest

from conftest import T_SPIN, spin_half_control, spin_half_wind
from qzermelo.algebra import IDENTITY_2, SIGMA_X, random_traceless_hermitian
from qzermelo.continuation import solve_continuation
from qzermelo.errors import DimensionMismatch
from qzermelo.fixedpoint import spin_half_closed_form
from qzermelo.geodesic import evolve
from qzermelo.instances import forward_instance, random_special_unitary
from qzermelo.problem import ControlSolution, NavigationProblem, spin_half_problem
from qzermelo.verify import (
    THRESHOLDS,
    convergence_order,
    integrate_schrodinger,
    polar_unitary,
    verify_solution,
)


def test_oracle_constant_hamiltonian():
    U = integrate_schrodinger(np.zeros((2, 2)), SIGMA_X / math.sqrt(2), IDENTITY_2, T_SPIN, 2000)
    assert np.linalg.norm(U + 1j * SIGMA_X) < 1e-9


def test_oracle_spin_half_strong_wind():
    omega = 0.75
    H0, H1 = spin_half_wind(omega), spin_half_control(omega)
    U = integrate_schrodinger(H0, H1, IDENTITY_2, T_SPIN, 2000)
    assert np.linalg.norm(U - evolve(H0, H1, IDENTITY_2, T_SPIN)) < 1e-8


def test_oracle_random_start(rng):
    H0 = 0.5 * random_traceless_hermitian(3, rng)
    H1 = random_traceless_hermitian(3, rng)
    H1 /= np.linalg.norm(H1)
    U_I = random_special_unitary(3, rng)
    U = integrate_schrodinger(H0, H1, U_I, 1.2, 2000)
    assert np.linalg.norm(U - evolve(H0, H1, U_I, 1.2)) < 1e-10


def test_oracle_rejects_too_few_steps():
    with pytest.raises(ValueError):
        integrate_schrodinger(np.zeros((2, 2)), SIGMA_X, IDENTITY_2, 1.0, 5)


def test_polar_unitary_projects(rng):
    U = random_special_unitary(3, rng)
    V = polar_unitary(U + 1e-6 * rng.normal(size=(3, 3)))
    assert np.linalg.norm(V.conj().T @ V - np.eye(3)) < 1e-14


def test_order_double_precision_long_time():
    # for a long run the truncation error dominates rounding even in float64
    omega = 0.75
    m = convergence_order(spin_half_wind(omega), spin_half_control(omega), IDENTITY_2, 4 * T_SPIN, precise=False)
    assert 3.7 <= m.order <= 4.3


def test_order_extended_precision():
    m = convergence_order(spin_half_wind(0.5), spin_half_control(0.5), IDENTITY_2, 0.2, precise=True)
    assert m.precise
    assert abs(m.order - 4.0) <= 0.05
    assert m.error_fine < 1e-17


def test_report_spin_half_passes():
    sol = spin_half_closed_form(0.5)
    rep = verify_solution(spin_half_problem(0.5), sol)
    assert rep.passed, rep.failures()
    assert rep.endpoint_error < 1e-12
    assert len(rep.first_variation_samples) == 5
    js = rep.to_json()
    for key in ("endpoint_error", "finsler_deviation", "norm_drift", "conservation_residual",
                "ep_residual", "first_variation_samples", "oracle_gate_error"):
        assert key in js


def test_report_wrong_time_fails():
    sol = spin_half_closed_form(0.5)
    sol.T += 0.1
    rep = verify_solution(spin_half_problem(0.5), sol)
    assert rep.endpoint_error > 1e-2
    assert "endpoint_error" in rep.failures()


def test_report_zero_wind(rng):
    U_I = random_special_unitary(3, rng)
    U_F = random_special_unitary(3, rng, scale=0.6) @ U_I
    prob = NavigationProblem.create(np.zeros((3, 3)), U_F, U_I)
    rep = verify_solution(prob, solve_continuation(prob))
    assert rep.endpoint_error <= 1e-12
    for val in (rep.finsler_deviation, rep.norm_drift, rep.conservation_residual, rep.ep_residual):
        assert val <= 1e-10
    assert max(rep.first_variation_samples) <= 1e-10


def test_report_strong_wind_skips_randers_checks():
    rep = verify_solution(spin_half_problem(1.0), spin_half_closed_form(1.0))
    assert rep.strong_wind
    assert rep.finsler_deviation is None
    assert rep.passed


def test_report_dimension_mismatch():
    sol = ControlSolution(H1_0=np.eye(3) / math.sqrt(3), T=1.0, method="x", endpoint_error=0.0)
    with pytest.raises(DimensionMismatch):
        verify_solution(spin_half_problem(0.5), sol)


def test_report_forward_instances():
    rng = np.random.default_rng(4)
    for n in (2, 3, 4):
        inst = forward_instance(n, rng)
        sol = ControlSolution(inst.H1_0, inst.T, "exact", 0.0)
        rep = verify_solution(inst.problem, sol, seed=3)
        assert rep.passed, rep.failures()
        assert rep.seed == 3


def test_thresholds_cover_report_fields():
    assert set(THRESHOLDS) >= {"endpoint_error", "oracle_gate_error", "first_variation"}
