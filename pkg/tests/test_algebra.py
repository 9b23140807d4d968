from __future__ import annotations

import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from qzermelo.algebra import (
    IDENTITY_2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    from_coords,
    make_hermitian,
    make_special_unitary,
    matrix_from_json,
    matrix_to_json,
    orthonormal_basis,
    random_traceless_hermitian,
    random_unit_hermitian,
    to_coords,
    trace_inner,
    traceless_log,
    unitary_exp,
)
from qzermelo.errors import BranchAmbiguity, DimensionMismatch, NotHermitian, NotUnitary


def test_make_hermitian_accepts_paulis():
    for s in (SIGMA_Z, SIGMA_Y):
        H = make_hermitian(s)
        assert np.allclose(H, s)
    assert abs(np.trace(make_hermitian(SIGMA_Z))) == 0


def test_make_hermitian_rejects_nilpotent():
    with pytest.raises(NotHermitian) as exc:
        make_hermitian([[0, 1], [0, 0]], tol=1e-12)
    assert exc.value.code == "not_hermitian"


def test_make_hermitian_rejects_non_square():
    with pytest.raises(DimensionMismatch):
        make_hermitian(np.zeros((2, 3)))


def test_make_special_unitary_rejects_non_unitary():
    with pytest.raises(NotUnitary):
        make_special_unitary(2 * IDENTITY_2)


@pytest.mark.parametrize(
    "A,B,expected",
    [
        (SIGMA_X / math.sqrt(2), SIGMA_X / math.sqrt(2), 1.0),
        (SIGMA_X, SIGMA_Z, 0.0),
        (SIGMA_Z, SIGMA_Z, 2.0),
    ],
)
def test_trace_inner_pauli_values(A, B, expected):
    assert trace_inner(A, B) == pytest.approx(expected, abs=1e-15)


def test_trace_inner_symmetric_bilinear_positive(rng):
    for n in (2, 3, 5):
        A, B, C = (random_traceless_hermitian(n, rng) for _ in range(3))
        assert trace_inner(A, B) == pytest.approx(trace_inner(B, A), abs=1e-14)
        assert trace_inner(2 * A + C, B) == pytest.approx(2 * trace_inner(A, B) + trace_inner(C, B), abs=1e-13)
        assert trace_inner(A, A) > 0


def test_unitary_exp_zero_generator():
    assert np.allclose(unitary_exp(np.zeros((2, 2)), 7.0), IDENTITY_2, atol=1e-15)


def test_unitary_exp_half_turn():
    U = unitary_exp(SIGMA_X / math.sqrt(2), math.pi / math.sqrt(2))
    assert np.linalg.norm(U - (-1j * SIGMA_X)) < 1e-14


def test_unitary_exp_matches_pade(rng):
    H = random_traceless_hermitian(3, rng)
    H = H + 0.4 * np.eye(3)  # a trace component must be kept
    ref = scipy.linalg.expm(-1j * 0.3 * H)
    assert np.linalg.norm(unitary_exp(H, 0.3) - ref) < 1e-10


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.floats(-3, 3), st.floats(-3, 3), st.sampled_from([2, 3, 4]))
def test_unitary_exp_group_law(seed, s, t, n):
    H = random_traceless_hermitian(n, np.random.default_rng(seed))
    lhs = unitary_exp(H, s) @ unitary_exp(H, t)
    assert np.linalg.norm(lhs - unitary_exp(H, s + t)) < 1e-10


def test_traceless_log_identity():
    assert np.linalg.norm(traceless_log(IDENTITY_2)) == 0.0


def test_traceless_log_half_turn():
    L = traceless_log(-1j * SIGMA_X)
    assert np.linalg.norm(L - (math.pi / 2) * SIGMA_X) < 1e-12
    assert np.linalg.norm(L) == pytest.approx(math.pi / math.sqrt(2), abs=1e-12)


def test_traceless_log_round_trip_fixed_norm(rng):
    for n in (2, 3, 4):
        A = random_traceless_hermitian(n, rng)
        A *= 0.8 / np.linalg.norm(A)
        assert np.linalg.norm(traceless_log(unitary_exp(A, 1.0)) - A) < 1e-10


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from([2, 3, 4, 5]), st.floats(0.01, 1.0))
def test_traceless_log_round_trip_property(seed, n, scale):
    A = random_traceless_hermitian(n, np.random.default_rng(seed))
    # keep every eigenphase well inside (-pi, pi)
    A *= scale * 2.5 / np.max(np.abs(np.linalg.eigvalsh(A)))
    assert np.linalg.norm(traceless_log(unitary_exp(A, 1.0)) - A) < 1e-9


def test_traceless_log_ambiguous_at_minus_identity():
    # -1 in SU(2): both eigenphases sit on the branch cut
    with pytest.raises(BranchAmbiguity):
        traceless_log(-IDENTITY_2)


def test_traceless_log_central_su3_is_ambiguous():
    # exp(2 pi i / 3) 1 has three equally short traceless generators
    w = np.exp(2j * math.pi / 3)
    with pytest.raises(BranchAmbiguity):
        traceless_log(np.diag([w, w, w]))


def test_traceless_log_minimal_shift_su3():
    # principal phases sum to 2 pi, so the largest one must move down by 2 pi
    phases = np.array([2.5, 2.0, 2 * math.pi - 4.5])
    U = np.diag(np.exp(1j * phases))
    L = traceless_log(U)
    assert abs(np.trace(L)) < 1e-12
    assert np.linalg.norm(unitary_exp(L, 1.0) - U) < 1e-12
    expected = -np.diag(phases - np.array([2 * math.pi, 0, 0]))
    assert np.linalg.norm(L - expected) < 1e-12


def test_orthonormal_basis_n2_is_scaled_pauli():
    B = orthonormal_basis(2)
    expected = np.array([SIGMA_X, SIGMA_Y, SIGMA_Z]) / math.sqrt(2)
    assert np.allclose(B, expected, atol=1e-15)


@pytest.mark.parametrize("n", [3, 4, 6])
def test_orthonormal_basis_gram_and_trace(n):
    B = orthonormal_basis(n)
    assert len(B) == n * n - 1
    gram = np.array([[trace_inner(a, b) for b in B] for a in B])
    assert np.abs(gram - np.eye(len(B))).max() < 1e-12
    assert max(abs(np.trace(b)) for b in B) < 1e-12
    assert all(np.allclose(b, b.conj().T) for b in B)


def test_orthonormal_basis_is_read_only():
    with pytest.raises(ValueError):
        orthonormal_basis(3)[0, 0, 0] = 1.0


def test_basis_completeness(rng):
    for n in (2, 3, 4):
        H = random_traceless_hermitian(n, rng)
        c = to_coords(H)
        assert np.linalg.norm(from_coords(c, orthonormal_basis(n)) - H) < 1e-12
        assert np.linalg.norm(c) == pytest.approx(np.linalg.norm(H), abs=1e-12)


def test_random_unit_hermitian():
    for n in (2, 3, 4):
        H = random_unit_hermitian(n, seed=7)
        assert abs(np.trace(H)) < 1e-14
        assert abs(np.linalg.norm(H) - 1) < 1e-14
        assert np.array_equal(H, random_unit_hermitian(n, seed=7))
    assert not np.allclose(random_unit_hermitian(3, 1), random_unit_hermitian(3, 2))


def test_json_round_trip(rng):
    A = random_traceless_hermitian(3, rng)
    assert np.array_equal(matrix_from_json(matrix_to_json(A)), A)
