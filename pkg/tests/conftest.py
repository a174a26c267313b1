import math

import numpy as np
import pytest

from oscwigner import (BogoliubovPair, CoefficientProfile, integrate_mode,
                       plane_wave_initial_data, static_mode)

# benchmark sweep: omega_i = 2, omega_f = 1, tau = 2
BENCH_TAU = 2.0
BENCH_OMEGA_I = 2.0
BENCH_OMEGA_F = 1.0
BENCH_OMEGA1 = math.sqrt(2.5)
BENCH_OMEGA0 = math.sqrt(1.5)


@pytest.fixture(scope="session")
def tanh_profile():
    return CoefficientProfile.tanh(1.0, BENCH_OMEGA1, BENCH_OMEGA0, BENCH_TAU)


@pytest.fixture(scope="session")
def tanh_ode_solution(tanh_profile):
    """Tight-tolerance integration of the benchmark sweep over [-8tau, 8tau]."""
    grid = np.linspace(-8 * BENCH_TAU, 8 * BENCH_TAU, 801)
    u0, ud0 = plane_wave_initial_data(tanh_profile, float(grid[0]))
    return integrate_mode(tanh_profile, u0, ud0, grid, tol=1e-12)


@pytest.fixture(scope="session")
def ground_mode():
    return static_mode(1.0, 1.0, BogoliubovPair(1.0, 0.0))


@pytest.fixture(scope="session")
def squeezed_mode():
    # exact normalization: 1.25^2 - 0.75^2 = 1
    return static_mode(1.0, 1.0, BogoliubovPair(1.25, 0.75))
