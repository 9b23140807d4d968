from __future__ import annotations

import math

import numpy as np
import pytest
import scipy.linalg

from conftest import OMEGAS, T_SPIN, spin_half_control, spin_half_wind
from qzermelo.algebra import IDENTITY_2, SIGMA_X, SIGMA_Y, SIGMA_Z, random_traceless_hermitian, unitary_exp
from qzermelo.errors import DimensionMismatch
from qzermelo.geodesic import (
    control_at,
    controls_at,
    covering_map_su2,
    evolve,
    evolve_many,
    sample_trajectory,
    write_covering_csv,
    write_gate_csv,
)
from qzermelo.instances import random_special_unitary


def test_control_at_time_zero(rng):
    H0, H1 = random_traceless_hermitian(3, rng), random_traceless_hermitian(3, rng)
    assert np.array_equal(control_at(H0, H1, 0.0), H1) or np.linalg.norm(control_at(H0, H1, 0.0) - H1) < 1e-15


@pytest.mark.parametrize("omega", [0.3, 1.1])
def test_control_at_pauli_oracle(omega):
    # e^{i w t sz} sx e^{-i w t sz} = cos(2wt) sx - sin(2wt) sy
    H1 = SIGMA_X / math.sqrt(2)
    for t in (0.1, 0.7, 2.3):
        expected = (math.cos(2 * omega * t) * SIGMA_X - math.sin(2 * omega * t) * SIGMA_Y) / math.sqrt(2)
        assert np.linalg.norm(control_at(-omega * SIGMA_Z, H1, t) - expected) < 1e-14


def test_control_at_commuting_is_constant():
    H0 = np.diag([0.2, -0.5, 0.3]).astype(complex)
    H1 = np.diag([0.6, 0.1, -0.7]).astype(complex)
    for t in (0.5, 3.0, 11.0):
        assert np.linalg.norm(control_at(H0, H1, t) - H1) < 1e-14


def test_controls_at_matches_pointwise(rng):
    H0, H1 = random_traceless_hermitian(4, rng), random_traceless_hermitian(4, rng)
    ts = np.linspace(0, 2, 9)
    batch = controls_at(H0, H1, ts)
    for t, C in zip(ts, batch):
        assert np.linalg.norm(C - control_at(H0, H1, t)) < 1e-13


def test_evolve_at_zero_is_start(rng):
    U_I = random_special_unitary(3, rng)
    H0, H1 = random_traceless_hermitian(3, rng), random_traceless_hermitian(3, rng)
    assert np.linalg.norm(evolve(H0, H1, U_I, 0.0) - U_I) < 1e-14


@pytest.mark.parametrize("omega", OMEGAS)
def test_evolve_spin_half_target(omega):
    U = evolve(spin_half_wind(omega), spin_half_control(omega), IDENTITY_2, T_SPIN)
    assert np.linalg.norm(U - (-1j * SIGMA_X)) < 1e-10


def test_evolve_without_wind(rng):
    H1 = random_traceless_hermitian(3, rng)
    U_I = random_special_unitary(3, rng)
    ref = scipy.linalg.expm(-1j * 0.9 * H1) @ U_I
    assert np.linalg.norm(evolve(np.zeros((3, 3)), H1, U_I, 0.9) - ref) < 1e-12


def test_evolve_dimension_check():
    with pytest.raises(DimensionMismatch):
        evolve(np.zeros((3, 3)), SIGMA_X, IDENTITY_2, 1.0)


def test_flow_property(rng):
    for n in (2, 3, 4):
        H0 = 0.5 * random_traceless_hermitian(n, rng)
        H1 = random_traceless_hermitian(n, rng)
        U_I = random_special_unitary(n, rng)
        s, t = 0.37, 0.81
        U_s = evolve(H0, H1, U_I, s)
        restarted = evolve(H0, control_at(H0, H1, s), U_s, t)
        assert np.linalg.norm(evolve(H0, H1, U_I, s + t) - restarted) < 1e-10


def test_closed_form_solves_schrodinger(rng):
    # i dU/dt = (H0 + H1(t)) U checked by central differences
    H0 = 0.6 * random_traceless_hermitian(3, rng)
    H1 = random_traceless_hermitian(3, rng)
    U_I = random_special_unitary(3, rng)
    t, h = 0.7, 1e-5
    dU = (evolve(H0, H1, U_I, t + h) - evolve(H0, H1, U_I, t - h)) / (2 * h)
    rhs = -1j * (H0 + control_at(H0, H1, t)) @ evolve(H0, H1, U_I, t)
    assert np.linalg.norm(dU - rhs) < 1e-8


def test_norm_and_spectrum_conservation(rng):
    H0 = 0.6 * random_traceless_hermitian(4, rng)
    H1 = random_traceless_hermitian(4, rng)
    ev0 = np.linalg.eigvalsh(H1)
    for C in controls_at(H0, H1, np.linspace(0, 10, 101)):
        assert abs(np.linalg.norm(C) - np.linalg.norm(H1)) < 1e-13
        assert np.abs(np.linalg.eigvalsh(C) - ev0).max() < 1e-12


def test_sample_trajectory_endpoints(rng):
    H0, H1 = 0.4 * random_traceless_hermitian(3, rng), random_traceless_hermitian(3, rng)
    U_I = random_special_unitary(3, rng)
    traj = sample_trajectory(H0, H1, U_I, 1.3, 2)
    assert len(traj) == 2
    assert np.allclose(traj.gates[0], U_I, atol=1e-15)
    assert np.linalg.norm(traj.gates[-1] - evolve(H0, H1, U_I, 1.3)) < 1e-14


def test_sample_trajectory_unitary(rng):
    H0, H1 = 0.4 * random_traceless_hermitian(4, rng), random_traceless_hermitian(4, rng)
    traj = sample_trajectory(H0, H1, np.eye(4, dtype=complex), 2.0, 50)
    for U in traj.gates:
        assert np.linalg.norm(U.conj().T @ U - np.eye(4)) < 1e-10
    assert np.allclose(evolve_many(H0, H1, np.eye(4), traj.times), traj.gates, atol=1e-14)


def test_sample_trajectory_radial_without_wind():
    traj = sample_trajectory(np.zeros((2, 2)), SIGMA_X / math.sqrt(2), IDENTITY_2, T_SPIN, 41)
    pts = np.array([covering_map_su2(U) for U in traj.gates])
    assert np.abs(pts[:, 1:]).max() < 1e-12
    assert np.all(np.diff(pts[:, 0]) > 0)
    assert np.linalg.norm(pts[-1] - [math.pi, 0, 0]) < 1e-12


def test_covering_map_values():
    assert np.linalg.norm(covering_map_su2(IDENTITY_2)) == 0
    assert np.linalg.norm(covering_map_su2(-1j * SIGMA_X) - [math.pi, 0, 0]) < 1e-14
    U = unitary_exp(SIGMA_Z, math.pi / 4)
    assert np.linalg.norm(covering_map_su2(U) - [0, 0, math.pi / 2]) < 1e-14


def test_covering_map_antipodal_convention():
    # +i sigma_x and -i sigma_x give the same rotation; both map to the +x pole
    assert np.linalg.norm(covering_map_su2(1j * SIGMA_X) - [math.pi, 0, 0]) < 1e-14
    assert np.linalg.norm(covering_map_su2(1j * SIGMA_Y) - [0, math.pi, 0]) < 1e-14


def test_covering_map_is_a_rotation_vector(rng):
    for _ in range(20):
        U = random_special_unitary(2, rng)
        v = covering_map_su2(U)
        assert np.linalg.norm(v) <= math.pi + 1e-12
        n = v / np.linalg.norm(v)
        th = np.linalg.norm(v)
        back = math.cos(th / 2) * IDENTITY_2 - 1j * math.sin(th / 2) * (n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z)
        assert min(np.linalg.norm(back - U), np.linalg.norm(back + U)) < 1e-12


def test_covering_map_rejects_larger_dims():
    with pytest.raises(DimensionMismatch):
        covering_map_su2(np.eye(3))


def test_csv_writers(tmp_path, rng):
    traj = sample_trajectory(spin_half_wind(0.5), spin_half_control(0.5), IDENTITY_2, T_SPIN, 5)
    p = tmp_path / "c.csv"
    write_covering_csv(traj, p)
    lines = p.read_text().splitlines()
    assert lines[0] == "t,x,y,z"
    assert len(lines) == 6
    assert [float(x) for x in lines[1].split(",")] == [0.0, 0.0, 0.0, 0.0]

    H1 = random_traceless_hermitian(3, rng)
    traj3 = sample_trajectory(np.zeros((3, 3)), H1, np.eye(3, dtype=complex), 1.0, 3)
    q = tmp_path / "g.csv"
    write_gate_csv(traj3, q)
    header = q.read_text().splitlines()[0].split(",")
    assert header[:3] == ["t", "re_00", "im_00"]
    assert len(header) == 1 + 2 * 9
    with pytest.raises(DimensionMismatch):
        write_covering_csv(traj3, tmp_path / "bad.csv")
