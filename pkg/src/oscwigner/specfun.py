"""Complex special functions for the closed-form oscillator solution.

Two functions are provided: principal-branch ``log_gamma`` for complex
argument, and the Gauss hypergeometric function ``hyp2f1`` with complex
parameters restricted to real argument x <= 0.  That restriction covers the
entire need of the tanh-profile mode solution, whose argument is
-exp(2t/tau) < 0, and lets every evaluation be routed to a uniformly
convergent power series:

* |x| <= 1/2          direct defining series,
* -8  <  x < -1/2     Pfaff map w = x/(x-1) into (1/3, 8/9),
* x  <= -8            inversion formula in 1/x with log-Gamma prefactors.

The inversion route is required in practice: for the asymptotic regime the
argument grows like exp(2t/tau) and the Pfaff series alone would need far
more terms than the cap allows.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import GammaPoleError, Hyp2f1ConvergenceError, SpecialFunctionError

LOG_SQRT_2PI = 0.9189385332046727417803297364056176
LOG_PI = 1.1447298858494001741434273513530587

# Lanczos approximation, g = 7, n = 9.  Relative accuracy of
# exp(log_gamma) is ~2e-13 on |z| <= 50 away from the poles.
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

DEFAULT_PRECISION = 1e-12
MAX_TERMS = 100_000
_SERIES_CUT = 0.5       # |x| below which the defining series is used
_INVERSION_CUT = -8.0   # x at or below which the 1/x formula is used


def _lanczos_log_gamma(z: complex) -> complex:
    """Lanczos core, valid for Re(z) >= 0.5."""
    acc = _LANCZOS[0]
    for k in range(1, 9):
        acc += _LANCZOS[k] / (z - 1.0 + k)
    t = z + 6.5
    return LOG_SQRT_2PI + (z - 0.5) * cmath.log(t) - t + cmath.log(acc)


def log_gamma(z: complex) -> complex:
    """Principal-branch log Gamma for complex z.

    Raises :class:`GammaPoleError` at the poles z = 0, -1, -2, ...
    Arguments on the negative real axis are treated as approached from the
    upper half-plane (the standard branch-cut convention).
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == round(z.real):
        raise GammaPoleError(f"log_gamma pole at z = {z.real:g}")
    if z.real >= 0.5:
        return _lanczos_log_gamma(z)
    if z.imag < 0.0:
        return log_gamma(z.conjugate()).conjugate()
    # reflection in the (closed) upper half-plane; the rewrite
    # sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 pi i z}) keeps every log on
    # its principal branch because |e^{2 pi i z}| <= 1 there.
    log_sin = (0.5j * math.pi - math.log(2.0) - 1j * math.pi * z
               + cmath.log(1.0 - cmath.exp(2j * math.pi * z)))
    return LOG_PI - log_sin - _lanczos_log_gamma(1.0 - z)


@dataclass(frozen=True)
class Hyp2f1Request:
    """Validated request for a 2F1 evaluation at real argument x <= 0."""

    a: complex
    b: complex
    c: complex
    x: float
    target_precision: float = DEFAULT_PRECISION

    def __post_init__(self):
        c = complex(self.c)
        if c.imag == 0.0 and c.real <= 0.0 and c.real == round(c.real):
            raise SpecialFunctionError(
                f"2F1 undefined: c = {c.real:g} is a non-positive integer")
        if self.x > 0.0:
            raise SpecialFunctionError(
                f"2F1 argument restricted to x <= 0, got x = {self.x:g}")
        if not (0.0 < self.target_precision < 1.0):
            raise SpecialFunctionError("target_precision must be in (0, 1)")


@dataclass(frozen=True)
class Hyp2f1Result:
    value: complex
    error_estimate: float
    terms: int


def _series(a, b, c, x, tol, max_terms=MAX_TERMS):
    value, rel, n, status = _kernels.hyp2f1_series(
        complex(a), complex(b), complex(c), float(x), float(tol), max_terms)
    if status != 0:
        raise Hyp2f1ConvergenceError(
            f"2F1 series did not converge within {max_terms} terms "
            f"(a={a}, b={b}, c={c}, x={x:g}); last relative term {rel:.2e}")
    return value, rel, n

def _is_nonpositive_int(z: complex, eps=1e-12) -> bool:
    return abs(z.imag) < eps and z.real < 0.5 and abs(z.real - round(z.real)) < eps


def _inversion(a, b, c, x, tol):
    """DLMF 15.8.2: expansion in 1/x for large negative x.

    Needs b - a away from the integers; for the oscillator family
    b - a = i*tau*omega_f, which is never a nonzero real integer, and the
    a = b = 0 degeneracies are handled before routing.
    """
    inv = 1.0 / x
    lg = log_gamma
    g1 = cmath.exp(lg(c) + lg(b - a) - lg(b) - lg(c - a))
    g2 = cmath.exp(lg(c) + lg(a - b) - lg(a) - lg(c - b))
    s1, e1, n1 = _series(a, a - c + 1.0, a - b + 1.0, inv, tol)
    s2, e2, n2 = _series(b, b - c + 1.0, b - a + 1.0, inv, tol)
    lnx = math.log(-x)
    t1 = g1 * cmath.exp(-a * lnx) * s1
    t2 = g2 * cmath.exp(-b * lnx) * s2
    value = t1 + t2
    scale = abs(t1) + abs(t2)
    denom = abs(value)
    if denom == 0.0:
        raise SpecialFunctionError("2F1 inversion cancelled to zero")
    err = (scale / denom) * (e1 + e2 + 1e-13)
    return value, err, n1 + n2


def hyp2f1(req: Hyp2f1Request) -> Hyp2f1Result:
    """Evaluate 2F1(a, b; c; x) for real x <= 0 with an error estimate.

    The returned ``error_estimate`` is a relative figure; it is not a hard
    bound but tracks the truncation of the underlying series plus the
    conditioning of any connection formula used.
    """
    a, b, c, x = complex(req.a), complex(req.b), complex(req.c), float(req.x)
    tol = req.target_precision
    if a == 0.0 or b == 0.0 or x == 0.0:
        return Hyp2f1Result(1.0 + 0.0j, 0.0, 0)
    if _is_nonpositive_int(a) or _is_nonpositive_int(b):
        # terminating polynomial case: the direct series is exact
        n_cap = int(-min(a.real, b.real)) + 2
        value, err, n = _series(a, b, c, x, tol, max_terms=max(n_cap, 4))
        return Hyp2f1Result(value, err, n)
    if abs(x) <= _SERIES_CUT:
        value, err, n = _series(a, b, c, x, tol)
        return Hyp2f1Result(value, err, n)
    if x > _INVERSION_CUT:
        # Pfaff: 2F1(a,b;c;x) = (1-x)^(-a) 2F1(a, c-b; c; x/(x-1))
        w = x / (x - 1.0)
        value, err, n = _series(a, c - b, c, w, tol)
        pref = cmath.exp(-a * math.log(1.0 - x))
        return Hyp2f1Result(pref * value, err, n)
    if abs((a - b).imag) < 1e-9 and abs((a - b).real - round((a - b).real)) < 1e-9:
        # degenerate inversion denominator; retry the Pfaff route, which
        # converges (slowly) for any finite x < 0, and report honestly if
        # the cap is hit.
        w = x / (x - 1.0)
        value, err, n = _series(a, c - b, c, w, tol)
        pref = cmath.exp(-a * math.log(1.0 - x))
        return Hyp2f1Result(pref * value, err, n)
    value, err, n = _inversion(a, b, c, x, tol)
    return Hyp2f1Result(value, err, n)


def hyp2f1_value(a, b, c, x, target_precision=DEFAULT_PRECISION) -> complex:
    """Convenience wrapper returning only the value."""
    return hyp2f1(Hyp2f1Request(a, b, c, x, target_precision)).value


def gamma(z: complex) -> complex:
    """Gamma function via exp(log_gamma)."""
    return cmath.exp(log_gamma(z))


def gamma_ratio(numerators, denominators) -> complex:
    """exp(sum log_gamma(numerators) - sum log_gamma(denominators)).

    Keeps ratios of large Gamma values in range; used for the asymptotic
    Bogoliubov coefficients.
    """
    acc = 0.0 + 0.0j
    for z in numerators:
        acc += log_gamma(z)
    for z in denominators:
        acc -= log_gamma(z)
    return cmath.exp(acc)


def hyp2f1_grid(a, b, c, xs, target_precision=DEFAULT_PRECISION):
    """Vectorized helper: evaluate one parameter set on an array of x."""
    xs = np.asarray(xs, dtype=float)
    out = np.empty(xs.shape, dtype=complex)
    flat = xs.reshape(-1)
    res = out.reshape(-1)
    for i in range(flat.shape[0]):
        res[i] = hyp2f1_value(a, b, c, flat[i], target_precision)
    return out
