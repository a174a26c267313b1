import cmath
import math

import numpy as np
import pytest

from oscwigner import (HyperbolicInvariantError, OrientationError,
                       QuadraticInvariant, canonicalize, recompose)


class TestCanonicalize:
    def test_already_canonical(self):
        canon = canonicalize(QuadraticInvariant(0j, 1.0, 0j, 0.0))
        assert canon.pair.mu == 1.0
        assert canon.pair.nu == 0.0
        assert canon.hbar_omega0 == 1.0
        assert canon.delta == 0.0
        assert canon.epsilon == 0.5

    def test_closed_form_case(self):
        # A=3, B=5: the root with |r|<1 is r = (-5+4)/3 = -1/3, so
        # mu = 3/(2 sqrt 2), nu = -1/(2 sqrt 2), hbar_omega0 = sqrt(B^2-|A|^2) = 4
        canon = canonicalize(QuadraticInvariant(3 + 0j, 5.0, 0j, 0.0))
        assert abs(canon.pair.mu - 3 / (2 * math.sqrt(2))) < 1e-14
        assert abs(canon.pair.nu + 1 / (2 * math.sqrt(2))) < 1e-14
        assert abs(canon.hbar_omega0 - 4.0) < 1e-12
        assert abs(canon.epsilon - 2.0) < 1e-12

    def test_pair_norm_exact_by_construction(self):
        rng = np.random.RandomState(3)
        for _ in range(40):
            b = rng.uniform(0.5, 5.0)
            a = b * rng.uniform(0.0, 0.95) * cmath.exp(1j * rng.uniform(0, 7))
            inv = QuadraticInvariant(a, b, complex(*rng.randn(2)), rng.randn())
            canon = canonicalize(inv)
            assert canon.pair.norm_residual < 5e-16

    def test_round_trip(self):
        rng = np.random.RandomState(11)
        for _ in range(40):
            b = rng.uniform(0.5, 5.0)
            a = b * rng.uniform(0.0, 0.9) * cmath.exp(1j * rng.uniform(0, 7))
            d = complex(*rng.randn(2))
            e = float(rng.randn())
            inv = QuadraticInvariant(a, b, d, e)
            canon = canonicalize(inv)
            back = recompose(canon)
            scale = abs(a) + b
            assert abs(back.A - a) < 1e-12 * scale
            assert abs(back.B - b) < 1e-12 * scale
            assert abs(back.D - d) < 1e-12 * (1 + abs(d))
            assert abs(back.E - e) < 1e-12 * (1 + abs(e))

    def test_energy_scale_real_and_positive(self):
        rng = np.random.RandomState(5)
        for _ in range(30):
            b = rng.uniform(0.1, 10.0)
            a = b * rng.uniform(0.0, 0.99) * cmath.exp(1j * rng.uniform(0, 7))
            canon = canonicalize(QuadraticInvariant(a, b, 0j, 0.0))
            assert canon.hbar_omega0 > 0
            # analytic value for the elliptic case
            assert abs(canon.hbar_omega0
                       - math.sqrt(b * b - abs(a) ** 2)) < 1e-10 * b

    def test_phase_covariance(self):
        # A -> A e^{2 i phi}, D -> D e^{i phi} leaves hbar_omega0 and |delta|
        # unchanged
        a, b, d, e = 1.2 + 0.4j, 3.0, 0.7 - 0.2j, 0.5
        base = canonicalize(QuadraticInvariant(a, b, d, e))
        for phi in (0.3, 1.2, 2.9):
            rot = canonicalize(QuadraticInvariant(
                a * cmath.exp(2j * phi), b, d * cmath.exp(1j * phi), e))
            assert abs(rot.hbar_omega0 - base.hbar_omega0) < 1e-12
            assert abs(abs(rot.delta) - abs(base.delta)) < 1e-12

    def test_displacement_relation(self):
        canon = canonicalize(QuadraticInvariant(0j, 2.0, 1 + 1j, 0.0))
        assert abs(canon.displacement + canon.delta / canon.hbar_omega0) < 1e-15

    def test_hyperbolic_rejected(self):
        with pytest.raises(HyperbolicInvariantError):
            canonicalize(QuadraticInvariant(3 + 0j, 2.0, 0j, 0.0))
        with pytest.raises(HyperbolicInvariantError):
            canonicalize(QuadraticInvariant(2 + 0j, 2.0, 0j, 0.0))

    def test_negative_orientation_flagged(self):
        with pytest.raises(OrientationError):
            canonicalize(QuadraticInvariant(1 + 0j, -5.0, 0j, 0.0))
