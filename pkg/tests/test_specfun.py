import cmath
import math

import numpy as np
import pytest
import scipy.special as sp

from oscwigner import (GammaPoleError, Hyp2f1Request, SpecialFunctionError,
                       hyp2f1, hyp2f1_value, log_gamma)

# mpmath oracle values, frozen at 30 digits (a = -3i, b = -i, c = 1 - 4i is
# the benchmark tanh parameter set; the second set is tau=1.5, wi=3, wf=2)
FROZEN_2F1 = [
    (-3j, -1j, 1 - 4j, -0.3, 1.0272791415245406 + 0.19873667164155795j),
    (-3j, -1j, 1 - 4j, -3.0, 0.5276506661615078 + 1.1112160089058107j),
    (-3j, -1j, 1 - 4j, -50.0, -1.249117743467082 - 0.6238292284289948j),
    (-3j, -1j, 1 - 4j, -8886110.520507872,
     -1.4139203691827522 + 0.05492156005852791j),
    (-3.75j, -0.75j, 1 - 4.5j, -0.47,
     1.019180819088091 + 0.24739955872202699j),
    (-3.75j, -0.75j, 1 - 4.5j, -6.2,
     0.2622870777377415 + 1.149478399185684j),
]

FROZEN_LOG_GAMMA = [
    (0.3 + 2j, -2.359449355937571 - 0.9169076135186698j),
    (-4.7 + 0.3j, -3.4352212997010856 - 15.70399235597224j),
    (10 - 40j, -26.780956023147976 - 121.36097759201601j),
]


class TestLogGamma:
    def test_at_one(self):
        assert log_gamma(1.0) == 0.0

    def test_at_half(self):
        assert abs(log_gamma(0.5) - math.log(math.sqrt(math.pi))) < 1e-14

    @pytest.mark.parametrize("z,expected", FROZEN_LOG_GAMMA)
    def test_frozen_values(self, z, expected):
        assert abs(log_gamma(z) - expected) < 1e-12 * max(1.0, abs(expected))

    def test_imaginary_axis_modulus_identity(self):
        # |Gamma(iy)|^2 = pi / (y sinh(pi y)), an oracle independent of the
        # Lanczos coefficients
        for y in (0.1, 0.5, 1.0, 3.7, 12.0, 25.0):
            lg = log_gamma(1j * y)
            lhs = math.exp(2.0 * lg.real)
            rhs = math.pi / (y * math.sinh(math.pi * y))
            assert abs(lhs - rhs) <= 1e-12 * rhs

    def test_against_scipy_on_grid(self):
        res = np.linspace(-20, 20, 41)
        ims = np.linspace(-50, 50, 41)
        worst = 0.0
        for re in res:
            for im in ims:
                z = complex(re, im)
                if im == 0 and re <= 0 and re == round(re):
                    continue
                diff = abs(cmath.exp(log_gamma(z) - sp.loggamma(z)) - 1.0)
                worst = max(worst, diff)
        assert worst < 1e-12

    def test_conjugation_symmetry(self):
        z = 2.3 - 4.1j
        assert log_gamma(z) == log_gamma(z.conjugate()).conjugate()

    @pytest.mark.parametrize("z", [0.0, -1.0, -7.0])
    def test_poles_raise(self, z):
        with pytest.raises(GammaPoleError):
            log_gamma(z)


class TestHyp2f1:
    def test_at_zero(self):
        assert hyp2f1_value(-3j, -1j, 1 - 4j, 0.0) == 1.0

    def test_zero_parameter(self):
        assert hyp2f1_value(0.0, -1j, 1 - 4j, -5.0) == 1.0
        assert hyp2f1_value(-3j, 0.0, 1 - 4j, -77.0) == 1.0

    def test_elementary_log_identity(self):
        # 2F1(1,1;2;x) = -log(1-x)/x at x = -1 gives log 2
        value = hyp2f1_value(1.0, 1.0, 2.0, -1.0)
        assert abs(value - math.log(2.0)) < 1e-12

    @pytest.mark.parametrize("a,b,c,x,expected", FROZEN_2F1)
    def test_frozen_oracle_values(self, a, b, c, x, expected):
        result = hyp2f1(Hyp2f1Request(a, b, c, x))
        assert abs(result.value - expected) < 1e-11 * abs(expected)
        assert result.error_estimate < 1e-10

    def test_pfaff_consistency_band(self):
        # where the direct series still converges (|x| < 1) it must agree
        # with the Pfaff-transformed route used by the dispatcher
        a, b, c = -3j, -1j, 1 - 4j
        from oscwigner.specfun import _series
        for x in np.linspace(-0.98, -0.5, 7):
            direct, _, _ = _series(a, b, c, x, 1e-13)
            routed = hyp2f1_value(a, b, c, float(x))
            assert abs(direct - routed) < 1e-11 * abs(direct)

    def test_conjugation_symmetry(self):
        a, b, c, x = -2.2j, -0.7j, 1 - 3.1j, -4.4
        lhs = hyp2f1_value(a.conjugate(), b.conjugate(), c.conjugate(), x)
        rhs = hyp2f1_value(a, b, c, x).conjugate()
        assert abs(lhs - rhs) < 1e-13 * abs(rhs)

    def test_derivative_contiguous_relation(self):
        # (d/dx) 2F1(a,b;c;x) = (ab/c) 2F1(a+1,b+1;c+1;x) against five-point
        # central differences at x = -0.3
        a, b, c, x = -3j, -1j, 1 - 4j, -0.3
        h = 1e-3
        stencil = (hyp2f1_value(a, b, c, x - 2 * h)
                   - 8 * hyp2f1_value(a, b, c, x - h)
                   + 8 * hyp2f1_value(a, b, c, x + h)
                   - hyp2f1_value(a, b, c, x + 2 * h)) / (12 * h)
        closed = (a * b / c) * hyp2f1_value(a + 1, b + 1, c + 1, x)
        assert abs(stencil - closed) < 1e-6 * abs(closed)

    def test_positive_argument_rejected(self):
        with pytest.raises(SpecialFunctionError):
            Hyp2f1Request(-3j, -1j, 1 - 4j, 0.25)

    def test_nonpositive_integer_c_rejected(self):
        with pytest.raises(SpecialFunctionError):
            Hyp2f1Request(-3j, -1j, -2.0, -0.5)

    def test_terminating_polynomial(self):
        # a = -2 terminates: 2F1(-2, b; c; x) = 1 - 2bx/c + b(b+1)x^2/(c(c+1))
        b, c, x = 0.7 - 0.2j, 1.4 + 0.3j, -9.0
        expected = 1 - 2 * b * x / c + b * (b + 1) * x * x / (c * (c + 1))
        assert abs(hyp2f1_value(-2.0, b, c, x) - expected) < 1e-12 * abs(expected)

    def test_routes_agree_at_the_switch_point(self):
        # at x = -8 the dispatcher switches from Pfaff to the inversion
        # formula; evaluate both routes at the same point and compare
        import cmath
        from oscwigner.specfun import _inversion, _series
        a, b, c, x = -3j, -1j, 1 - 4j, -8.0
        inv_val, inv_err, _ = _inversion(a, b, c, x, 1e-13)
        pf_val, pf_err, _ = _series(a, c - b, c, x / (x - 1.0), 1e-13)
        pf_val *= cmath.exp(-a * math.log(1.0 - x))
        assert abs(inv_val - pf_val) < 1e-11 * abs(inv_val)
        assert inv_err < 1e-10 and pf_err < 1e-10
