import math

import numpy as np
import pytest

from oscwigner import (CoefficientProfile, ProfileError,
                       asymptotic_frequencies, classical_trajectory,
                       coefficient_derivatives, coefficients)
from tests.conftest import BENCH_OMEGA0, BENCH_OMEGA1, BENCH_TAU


class TestCoefficients:
    def test_static_is_time_independent(self):
        prof = CoefficientProfile.static(1.0, 1.0)
        assert coefficients(prof, 3.7) == (1.0, 0.0, 1.0)
        assert coefficients(prof, -120.0) == (1.0, 0.0, 1.0)

    def test_static_scaling(self):
        prof = CoefficientProfile.static(2.0, 3.0)
        x, y, z = coefficients(prof, 0.0)
        assert (x, y, z) == (0.5, 0.0, 18.0)

    def test_tanh_incoming_asymptote(self, tanh_profile):
        # Z -> m (omega1^2 + omega0^2) = m omega_i^2 at early times
        _, _, z = coefficients(tanh_profile, -40 * BENCH_TAU)
        assert abs(z - 4.0) < 1e-12

    def test_tanh_midpoint(self, tanh_profile):
        # tanh(0) = 0 so Z(0) = m omega1^2
        _, _, z = coefficients(tanh_profile, 0.0)
        assert z == BENCH_OMEGA1 ** 2

    def test_tanh_outgoing_asymptote(self, tanh_profile):
        _, _, z = coefficients(tanh_profile, 40 * BENCH_TAU)
        assert abs(z - 1.0) < 1e-12

    def test_purity(self, tanh_profile):
        assert coefficients(tanh_profile, 0.37) == coefficients(tanh_profile, 0.37)

    def test_vectorized(self, tanh_profile):
        ts = np.array([-1.0, 0.0, 2.0])
        x, y, z = coefficients(tanh_profile, ts)
        assert x.shape == ts.shape
        assert np.all(y == 0.0)


class TestAsymptoticFrequencies:
    def test_benchmark_values(self, tanh_profile):
        wi, wf = asymptotic_frequencies(tanh_profile)
        assert abs(wi - 2.0) < 1e-14
        assert abs(wf - 1.0) < 1e-14

    def test_static_limit(self):
        prof = CoefficientProfile.tanh(1.0, 1.3, 0.0, 2.0)
        wi, wf = asymptotic_frequencies(prof)
        assert wi == wf == 1.3

    def test_ratio_two(self):
        prof = CoefficientProfile.tanh(1.0, math.sqrt(5.0), math.sqrt(3.0), 1.0)
        wi, wf = asymptotic_frequencies(prof)
        assert abs(wi - math.sqrt(8.0)) < 1e-14
        assert abs(wf - math.sqrt(2.0)) < 1e-14
        assert abs(wi / wf - 2.0) < 1e-14

    def test_requires_tanh(self):
        with pytest.raises(ProfileError):
            asymptotic_frequencies(CoefficientProfile.static(1.0, 1.0))


class TestValidation:
    def test_imaginary_outgoing_frequency_rejected(self):
        with pytest.raises(ProfileError):
            CoefficientProfile.tanh(1.0, 1.0, 1.5, 2.0)

    def test_equal_frequencies_rejected(self):
        with pytest.raises(ProfileError):
            CoefficientProfile.tanh(1.0, 1.0, 1.0, 2.0)

    def test_nonpositive_mass_rejected(self):
        with pytest.raises(ProfileError):
            CoefficientProfile.static(0.0, 1.0)

    def test_tabulated_needs_increasing_grid(self):
        t = [0.0, 1.0, 1.0, 2.0]
        with pytest.raises(ProfileError):
            CoefficientProfile.tabulated(t, [1] * 4, [0] * 4, [1] * 4)

    def test_tabulated_rejects_nonpositive_x(self):
        t = np.linspace(0, 1, 8)
        x = np.ones(8)
        x[3] = -0.5
        with pytest.raises(ProfileError):
            CoefficientProfile.tabulated(t, x, np.zeros(8), np.ones(8))

    def test_tabulated_out_of_domain(self):
        t = np.linspace(0, 1, 8)
        prof = CoefficientProfile.tabulated(t, np.ones(8), np.zeros(8), np.ones(8))
        with pytest.raises(ProfileError):
            coefficients(prof, 1.5)


class TestTabulated:
    def make_tanh_table(self, n=401):
        ts = np.linspace(-8.0, 8.0, n)
        x = np.ones(n)
        y = np.zeros(n)
        z = BENCH_OMEGA1 ** 2 - BENCH_OMEGA0 ** 2 * np.tanh(ts / BENCH_TAU)
        return CoefficientProfile.tabulated(ts, x, y, z)

    def test_spline_matches_analytic(self, tanh_profile):
        tab = self.make_tanh_table()
        for t in np.linspace(-7.5, 7.5, 17):
            _, _, z_tab = coefficients(tab, float(t))
            _, _, z_ref = coefficients(tanh_profile, float(t))
            assert abs(z_tab - z_ref) < 1e-6

    def test_spline_derivatives_vanish_for_constant_columns(self):
        tab = self.make_tanh_table()
        xd, yd = coefficient_derivatives(tab, 0.5)
        assert abs(xd) < 1e-12
        assert abs(yd) < 1e-12

    def test_csv_round_trip(self, tmp_path):
        ts = np.linspace(0.0, 3.0, 31)
        path = tmp_path / "profile.csv"
        with open(path, "w") as fh:
            fh.write("t,X,Y,Z\n")
            for t in ts:
                fh.write(f"{t},1.0,0.0,{2.0 + math.sin(t):.17g}\n")
        prof = CoefficientProfile.from_csv(path)
        _, _, z = coefficients(prof, 1.5)
        assert abs(z - (2.0 + math.sin(1.5))) < 1e-7

    def test_csv_header_required(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("0,1,0,1\n1,1,0,1\n")
        with pytest.raises(ProfileError):
            CoefficientProfile.from_csv(path)


class TestClassicalTrajectory:
    def test_static_closed_form(self):
        # q(0)=1, p(0)=0 with m = omega0 = 1 gives q = cos t, p = -sin t
        prof = CoefficientProfile.static(1.0, 1.0)
        ts = np.linspace(0, 10, 201)
        traj = classical_trajectory(prof, 1.0, 0.0, ts, tol=1e-11)
        assert np.max(np.abs(traj.q - np.cos(ts))) < 1e-9
        assert np.max(np.abs(traj.p + np.sin(ts))) < 1e-9

    def test_fixed_point(self, tanh_profile):
        ts = np.linspace(-4, 4, 41)
        traj = classical_trajectory(tanh_profile, 0.0, 0.0, ts)
        assert np.all(traj.q == 0.0)
        assert np.all(traj.p == 0.0)

    def test_linearity(self, tanh_profile):
        ts = np.linspace(-4, 4, 81)
        base = classical_trajectory(tanh_profile, 0.4, -0.2, ts, tol=1e-11)
        scaled = classical_trajectory(tanh_profile, 2.0, -1.0, ts, tol=1e-11)
        assert np.max(np.abs(scaled.q - 5.0 * base.q)) < 1e-7
        assert np.max(np.abs(scaled.p - 5.0 * base.p)) < 1e-7

    def test_static_energy_conservation(self):
        prof = CoefficientProfile.static(2.0, 1.5)
        ts = np.linspace(0, 12, 301)
        traj = classical_trajectory(prof, 0.7, -0.3, ts, tol=1e-11)
        energy = traj.p ** 2 / 4.0 + 2.0 * 1.5 ** 2 * traj.q ** 2 / 2.0
        assert np.max(np.abs(energy - energy[0])) < 1e-8 * energy[0]

    def test_matches_mode_built_center(self, tanh_profile, tanh_ode_solution):
        # cross-module consistency: the coherent-state center
        # sqrt(hbar)(u z + u* z*) solves the same Hamilton equations
        import oscwigner as ow
        z = 0.8 - 0.3j
        state = ow.GaussianState(tanh_ode_solution, math.inf, 2.0, z)
        ts = tanh_ode_solution.times
        q0, p0 = ow.coherent_center(state, float(ts[0]))
        traj = classical_trajectory(tanh_profile, q0, p0, ts, tol=1e-11)
        centers = np.array([ow.coherent_center(state, float(t))
                            for t in ts[::50]])
        assert np.max(np.abs(traj.q[::50] - centers[:, 0])) < 2e-6
        assert np.max(np.abs(traj.p[::50] - centers[:, 1])) < 2e-6

    def test_to_csv(self, tmp_path):
        prof = CoefficientProfile.static(1.0, 1.0)
        ts = np.linspace(0, 1, 11)
        traj = classical_trajectory(prof, 1.0, 0.0, ts)
        path = tmp_path / "traj.csv"
        traj.to_csv(path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "t,q_c,p_c"
        assert len(lines) == 12
