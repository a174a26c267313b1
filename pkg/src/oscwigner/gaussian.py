"""Displaced-thermal Gaussian states over a mode solution.

A state is defined by a normalized mode solution u(t), an inverse
temperature beta (may be +inf for the vacuum), the canonical energy scale
hbar*omega0 of the underlying invariant, and a complex displacement z.  Its
Wigner function is the positive Gaussian

    P(q, p) = [tanh(beta hbar w0 / 2) / (pi hbar)]
              * exp[-(2 tanh(beta hbar w0 / 2) / (hbar w0)) H_E(q - q_c, p - p_c)]

whose contour quadratic form H_E has constant determinant: the canonical
coefficients satisfy lambda_+ lambda_- = 1 at every time, so the contour
ellipse keeps its area while its center rides the classical trajectory and
its axes rotate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AxisOrderingError, ModeError, OscwignerError
from .modes import ModeSolution
from .profiles import coefficients

_trapz = getattr(np, "trapezoid", np.trapz)


def mean_occupation(beta: float, hbar_omega0: float) -> float:
    """Bose-Einstein mean occupation 1/(e^{beta hbar w0} - 1).

    ``beta = math.inf`` selects the vacuum exactly (returns 0.0).
    """
    if hbar_omega0 <= 0:
        raise OscwignerError(f"hbar_omega0 must be positive, got {hbar_omega0:g}")
    if beta == math.inf:
        return 0.0
    x = beta * hbar_omega0
    if x <= 0:
        raise OscwignerError("beta * hbar_omega0 must be positive")
    if x > 40.0:
        # 1/expm1 underflows gracefully, but the direct form is exact here
        return math.exp(-x)
    return 1.0 / math.expm1(x)


@dataclass(frozen=True)
class GaussianState:
    """Displaced thermal state riding a mode solution."""

    mode: ModeSolution
    beta: float
    hbar_omega0: float
    z: complex
    hbar: float = 1.0

    def __post_init__(self):
        if self.hbar <= 0:
            raise OscwignerError("hbar must be positive")
        if self.hbar_omega0 <= 0:
            raise OscwignerError("hbar_omega0 must be positive")
        if self.beta != math.inf and self.beta <= 0:
            raise OscwignerError("beta must be positive or +inf")

    @property
    def n_bar(self) -> float:
        return mean_occupation(self.beta, self.hbar_omega0)

    @property
    def tanh_half(self) -> float:
        """tanh(beta hbar w0 / 2); 1 exactly for the vacuum."""
        if self.beta == math.inf:
            return 1.0
        return math.tanh(0.5 * self.beta * self.hbar_omega0)

    @staticmethod
    def vacuum(mode: ModeSolution, hbar_omega0: float = 1.0,
               z: complex = 0.0, hbar: float = 1.0) -> "GaussianState":
        return GaussianState(mode, math.inf, hbar_omega0, complex(z), hbar)


@dataclass(frozen=True)
class Moments:
    """First moments and central second moments at a fixed time."""

    q_mean: float
    p_mean: float
    sigma_qq: float
    sigma_pp: float
    sigma_qp: float

    @property
    def det(self) -> float:
        return self.sigma_qq * self.sigma_pp - self.sigma_qp ** 2


@dataclass(frozen=True)
class QuadraticForm:
    """Coefficients of H_E = c_qq q^2 + 2 c_qp qp + c_pp p^2."""

    c_qq: float
    c_qp: float
    c_pp: float

    @property
    def det(self) -> float:
        return self.c_qq * self.c_pp - self.c_qp ** 2

    def __call__(self, q, p):
        return self.c_qq * q * q + 2.0 * self.c_qp * q * p + self.c_pp * p * p


@dataclass(frozen=True)
class EllipseForm:
    """Canonical contour-ellipse data: H_E = (w0/2)(l+ p~^2 + l- q~^2)."""

    lambda_plus: float
    lambda_minus: float
    theta: float
    center: tuple

    @property
    def axis_ratio(self) -> float:
        return math.sqrt(self.lambda_minus / self.lambda_plus)

    @property
    def eccentricity(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.lambda_minus / self.lambda_plus))

    @property
    def area_product(self) -> float:
        """lambda_+ lambda_-, identically 1 up to rounding."""
        return self.lambda_plus * self.lambda_minus


def coherent_center(state: GaussianState, t):
    """Classical center (q_c, p_c) of the displaced state at time t.

    q_c = sqrt(hbar) (u z + u* z*) and
    p_c = -(Y/X) q_c + (sqrt(hbar)/X)(u' z + u'* z*); both satisfy the
    classical Hamilton equations in t.
    """
    u, ud = state.mode.at(t)
    x, y, _ = coefficients(state.mode.profile, t)
    rh = math.sqrt(state.hbar)
    qc = rh * 2.0 * np.real(u * state.z)
    pc = (rh * 2.0 * np.real((ud - y * u) * state.z)) / x
    return qc, pc


def covariance(state: GaussianState, t) -> Moments:
    """First and central second moments at time t.

    The centrals are the thermal ones scaled by (1 + 2 n_bar); the
    displacement moves only the means.  det Sigma = (hbar/2)^2 (1+2 n_bar)^2
    follows from the Wronskian condition.
    """
    u, ud = state.mode.at(t)
    x, y, _ = coefficients(state.mode.profile, t)
    hbar = state.hbar
    weight = 1.0 + 2.0 * state.n_bar
    g = ud - y * u
    sqq = hbar * abs(u) ** 2 * weight
    spp = hbar * abs(g) ** 2 / (x * x) * weight
    sqp = hbar * (g * np.conj(u)).real / x * weight
    qc, pc = coherent_center(state, t)
    return Moments(float(qc), float(pc), float(sqq), float(spp), float(sqp))


def h_ellipse(state: GaussianState, t) -> QuadraticForm:
    """Quadratic form H_E of the Wigner exponent, centered at (q_c, p_c).

    Written directly from the thermal second moments:
    c_pp = w0 |u|^2, c_qp = -w0 Re[(u' - Yu) u*]/X, c_qq = w0 |u' - Yu|^2/X^2.
    For Y = 0 this is the textbook completed square
    w0 |u|^2 (p - g q / X)^2 + w0 q^2/(4|u|^2) with g = Re(u* u')/|u|^2,
    and det H_E = w0^2/4 exactly.
    """
    u, ud = state.mode.at(t)
    x, y, _ = coefficients(state.mode.profile, t)
    uu = abs(u) ** 2
    if uu == 0.0:
        raise ModeError("mode vanishes at t; solution is not normalized")
    w0 = state.hbar_omega0 / state.hbar
    g = ud - y * u
    return QuadraticForm(c_qq=w0 * abs(g) ** 2 / (x * x),
                         c_qp=-w0 * (g * np.conj(u)).real / x,
                         c_pp=w0 * uu)


def ellipse_canonical(form: QuadraticForm, center=(0.0, 0.0)) -> EllipseForm:
    """Diagonalize H_E into (w0/2)(l+ p~^2 + l- q~^2).

    The energy scale is recovered from the form itself via
    det H_E = (w0/2)^2, so lambda_+ lambda_- = 1 by construction.  theta is
    the rotation angle of the new axes, with the lambda_+ coefficient
    attached to the rotated momentum direction; for a circle theta = 0.
    """
    det = form.det
    if det <= 0 or form.c_pp <= 0:
        raise OscwignerError("H_E form must be positive definite")
    half_w0 = math.sqrt(det)
    mean = 0.5 * (form.c_qq + form.c_pp)
    diff = 0.5 * (form.c_qq - form.c_pp)
    r = math.hypot(diff, form.c_qp)
    lam_plus = (mean + r) / half_w0
    lam_minus = (mean - r) / half_w0
    if r <= 1e-14 * mean:
        theta = 0.0
    else:
        # eigenvector of the larger eigenvalue, written as (-sin, cos) theta
        if form.c_qp == 0.0:
            vq, vp = (1.0, 0.0) if diff > 0.0 else (0.0, 1.0)
        elif abs(diff + r) >= abs(form.c_qp):
            vq, vp = diff + r, form.c_qp
        else:
            vq, vp = form.c_qp, r - diff
        if vp < 0.0:
            vq, vp = -vq, -vp
        if vp == 0.0:
            theta = 0.5 * math.pi
        else:
            theta = math.atan2(-vq, vp)
    return EllipseForm(float(lam_plus), float(lam_minus), float(theta),
                       (float(center[0]), float(center[1])))


def ellipse_track(state: GaussianState, times) -> list:
    """EllipseForm at each time, centered on the classical trajectory."""
    out = []
    for t in np.asarray(times, dtype=float):
        form = h_ellipse(state, float(t))
        out.append(ellipse_canonical(form, coherent_center(state, float(t))))
    return out


def wigner(state: GaussianState, t, q, p):
    """Wigner density at phase-space point(s) (q, p) and time t.

    Strictly positive and normalized to one over the plane; the peak value
    is tanh(beta hbar w0/2)/(pi hbar) at the classical center.
    """
    form = h_ellipse(state, t)
    qc, pc = coherent_center(state, t)
    th = state.tanh_half
    pref = th / (math.pi * state.hbar)
    w0 = state.hbar_omega0 / state.hbar
    expo = -(2.0 * th / (state.hbar * w0)) * form(np.asarray(q) - qc,
                                                  np.asarray(p) - pc)
    out = pref * np.exp(expo)
    if np.ndim(q) == 0 and np.ndim(p) == 0:
        return float(out)
    return out


def density_matrix(state: GaussianState, t, q, q_prime):
    """Position-representation kernel rho(q, q') of the state at time t.

    Closed Gaussian form fixed by requiring that the transform
    P(q, p) = (1/pi hbar) Int dy rho(q - y, q + y) e^{2ipy/hbar} reproduces
    the Wigner function; Hermitian, unit trace, with the displacement
    entering through the phase e^{i p_c (q - q')/hbar} and the shift of the
    thermal kernel to the classical center.
    """
    mom = covariance(state, t)
    hbar = state.hbar
    sqq, sqp, det = mom.sigma_qq, mom.sigma_qp, mom.det
    q = np.asarray(q, dtype=float)
    qp = np.asarray(q_prime, dtype=float)
    qbar = 0.5 * (q + qp) - mom.q_mean
    s = qp - q
    amp = 1.0 / math.sqrt(2.0 * math.pi * sqq)
    expo = (-0.5 * qbar * qbar / sqq
            - 0.5 * det * s * s / (hbar * hbar * sqq)
            - 1j * (sqp / sqq) * qbar * s / hbar
            - 1j * mom.p_mean * s / hbar)
    out = amp * np.exp(expo)
    if q.ndim == 0 and qp.ndim == 0:
        return complex(out)
    return out


def wigner_from_density_matrix(state: GaussianState, t, q, p,
                               n_y: int = 2001, span_sigmas: float = 10.0):
    """Quadrature transform of the density matrix back to the Wigner function.

    Independent of :func:`wigner`; used as the round-trip certificate.
    """
    mom = covariance(state, t)
    hbar = state.hbar
    # Gaussian width of rho(q - y, q + y) in y
    y_std = 0.5 * hbar * math.sqrt(mom.sigma_qq / mom.det)
    ys = np.linspace(-span_sigmas * y_std, span_sigmas * y_std, n_y)
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    scalar = q.ndim == 0 and p.ndim == 0
    qf = np.atleast_1d(q).reshape(-1)
    pf = np.atleast_1d(p).reshape(-1)
    out = np.empty(qf.shape)
    for i in range(qf.size):
        rho = density_matrix(state, t, qf[i] - ys, qf[i] + ys)
        integrand = rho * np.exp(2j * pf[i] * ys / hbar)
        out[i] = _trapz(integrand, ys).real / (math.pi * hbar)
    if scalar:
        return float(out[0])
    return out.reshape(q.shape if q.ndim else p.shape)


def nu_from_eccentricities(e_i: float, e_f: float) -> float:
    """|nu| of the basis Bogoliubov pair from two contour eccentricities.

    |nu| = |sqrt(1-e_i^2) - sqrt(1-e_f^2)| / (2 [(1-e_i^2)(1-e_f^2)]^(1/4)).
    Assumes both ellipses carry their minor axis along the same phase-space
    coordinate; see :func:`nu_from_ellipse_forms` for the guarded version.
    """
    for name, e in (("e_i", e_i), ("e_f", e_f)):
        if not 0.0 <= e < 1.0:
            raise OscwignerError(f"{name} must lie in [0, 1), got {e:g}")
    ri = math.sqrt(1.0 - e_i * e_i)
    rf = math.sqrt(1.0 - e_f * e_f)
    return abs(ri - rf) / (2.0 * math.sqrt(ri * rf))


def _axis_orientation(form: EllipseForm, tol: float = 1e-12) -> str:
    """'circle', or the coordinate axis ('q'/'p') closest to the long axis.

    The contour semi-axis is longer where the quadratic-form coefficient is
    smaller, i.e. along the lambda_minus direction.
    """
    if form.lambda_plus - form.lambda_minus <= tol * form.lambda_plus:
        return "circle"
    # lambda_+ sits on the rotated momentum axis at angle theta from p
    return "q" if abs(form.theta) > 0.25 * math.pi else "p"


def nu_from_ellipse_forms(form_i: EllipseForm, form_f: EllipseForm) -> float:
    """Eccentricity-based |nu| with an axis-ordering guard.

    Raises :class:`AxisOrderingError` when the two ellipses have their
    principal axes ordered oppositely (e.g. m*omega crossing 1 between the
    in and out states); the relation is not defined by the geometry alone
    in that case and callers should fall back to the direct Wronskian-based
    Bogoliubov computation.
    """
    oi, of_ = _axis_orientation(form_i), _axis_orientation(form_f)
    if "circle" not in (oi, of_) and oi != of_:
        raise AxisOrderingError(
            f"incompatible principal-axis ordering: squeezed along "
            f"'{oi}' vs '{of_}'")
    return nu_from_eccentricities(form_i.eccentricity, form_f.eccentricity)
