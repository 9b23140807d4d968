from __future__ import annotations

import math

import numpy as np
import pytest

from qzermelo.algebra import SIGMA_X, SIGMA_Y, SIGMA_Z

OMEGAS = (0.0, 0.25, 0.5, 0.75, 1.0)
T_SPIN = math.pi / math.sqrt(2.0)


def spin_half_control(omega: float) -> np.ndarray:
    """Known optimal H1(0) for H0 = -omega sigma_z, U_I = 1, U_F = -i sigma_x."""
    c, s = math.cos(omega * T_SPIN), math.sin(omega * T_SPIN)
    return (c * SIGMA_X + s * SIGMA_Y) / math.sqrt(2.0)


def spin_half_wind(omega: float) -> np.ndarray:
    return -omega * SIGMA_Z


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
