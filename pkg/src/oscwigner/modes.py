"""Wronskian-normalized complex mode solutions and Bogoliubov coefficients.

The mode equation d/dt(u'/X) + [XZ - Y^2 + (X'Y - XY')/X] (u/X) = 0 is
integrated in first-order form with the state (u, w), w = u'/X, so no
derivative of X enters the state update.  A solution is normalized when

    Wr{u*, u} = (u u'* - u* u') / X = i,

which is the conserved quantity monitored as the primary accuracy
diagnostic.  Closed forms are provided for the static oscillator and for
the tanh frequency sweep (hypergeometric).
"""

from __future__ import annotations

import cmath
import csv
import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels, specfun
from .errors import (IntegrationError, ModeError, NormalizationError,
                     WronskianDriftError)
from .profiles import (CoefficientProfile, asymptotic_frequencies,
                       coefficients, _validate_grid)

DEFAULT_NORM_TOL = 1e-9


def wronskian(u: complex, u_dot: complex, x: float) -> complex:
    """(u u'* - u* u') / X; purely imaginary for any input pair."""
    if x == 0:
        raise ModeError("Wronskian undefined for X = 0")
    u = complex(u)
    ud = complex(u_dot)
    return (u * ud.conjugate() - u.conjugate() * ud) / x


def normalize_mode(u0: complex, u_dot0: complex, x: float):
    """Rescale (and conjugate if needed) initial data to Wronskian +i.

    Raises :class:`NormalizationError` when the input Wronskian vanishes,
    i.e. when u0 and u_dot0 are proportional to a real solution.
    """
    u0 = complex(u0)
    ud0 = complex(u_dot0)
    w = wronskian(u0, ud0, x)
    wim = w.imag
    if wim == 0.0:
        raise NormalizationError(
            "zero Wronskian: initial data spans only a real solution")
    if wim < 0.0:
        u0, ud0 = u0.conjugate(), ud0.conjugate()
        wim = -wim
    scale = 1.0 / math.sqrt(wim)
    return u0 * scale, ud0 * scale


@dataclass(frozen=True)
class BogoliubovPair:
    """Complex pair (mu, nu) relating two mode bases, |mu|^2 - |nu|^2 = 1."""

    mu: complex
    nu: complex

    @property
    def norm_residual(self) -> float:
        return abs(abs(self.mu) ** 2 - abs(self.nu) ** 2 - 1.0)

    def gauge_fixed(self) -> "BogoliubovPair":
        """Rotate the overall phase so that mu is real and positive."""
        if self.mu == 0:
            return self
        phase = self.mu / abs(self.mu)
        return BogoliubovPair(abs(self.mu), self.nu * phase.conjugate())

    def compose(self, outer: "BogoliubovPair") -> "BogoliubovPair":
        """Pair for u -> w given self: u -> v and outer: v -> w."""
        mu = outer.mu * self.mu + outer.nu * self.nu.conjugate()
        nu = outer.mu * self.nu + outer.nu * self.mu.conjugate()
        return BogoliubovPair(mu, nu)

    def check(self, tol: float = DEFAULT_NORM_TOL) -> "BogoliubovPair":
        if self.norm_residual > tol:
            raise ModeError(
                f"|mu|^2 - |nu|^2 deviates from 1 by {self.norm_residual:.3e} "
                f"(tolerance {tol:g})")
        return self


class ModeSolution:
    """Base class: a normalized complex solution u(t) of the mode equation."""

    profile: CoefficientProfile

    def at(self, t):
        """(u, u') at time t; scalar t gives complex scalars."""
        raise NotImplementedError

    def wronskian_at(self, t) -> complex:
        u, ud = self.at(t)
        x, _, _ = coefficients(self.profile, t)
        return wronskian(u, ud, x)

    def drift_at(self, t) -> float:
        return abs(self.wronskian_at(t) - 1j)

    def transformed(self, pair: BogoliubovPair) -> "ModeSolution":
        """New solution u = mu * v + nu* . v*  built on this one (v)."""
        return CombinedModeSolution(self, pair)

    def sample_grid(self):
        """Stored sample times, or None for closed forms."""
        return None

    def describe(self) -> dict:
        raise NotImplementedError

    def to_csv(self, path, times=None, header_path=None):
        """Write (t, Re u, Im u, Re u', Im u', wronskian drift) plus a JSON
        header with profile parameters and tolerances."""
        if times is None:
            times = self.sample_grid()
            if times is None:
                raise ModeError("closed-form solution needs explicit times")
        times = np.asarray(times, dtype=float)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "re_u", "im_u", "re_udot", "im_udot",
                             "wronskian_drift"])
            for t in times:
                u, ud = self.at(float(t))
                drift = self.drift_at(float(t))
                writer.writerow([format(v, ".17g") for v in
                                 (t, u.real, u.imag, ud.real, ud.imag, drift)])
        if header_path is None:
            header_path = str(path) + ".json"
        with open(header_path, "w") as fh:
            json.dump({"profile": self.profile.describe(),
                       "solution": self.describe()}, fh, indent=2,
                      sort_keys=True)
            fh.write("\n")


class GridModeSolution(ModeSolution):
    """Numerically integrated solution stored on a fixed time grid."""

    def __init__(self, profile, times, u, u_dot, rtol):
        self.profile = profile
        self.times = np.asarray(times, dtype=float)
        self.u = np.asarray(u, dtype=complex)
        self.u_dot = np.asarray(u_dot, dtype=complex)
        self.rtol = float(rtol)
        x = coefficients(profile, self.times)[0]
        wr = (self.u * np.conj(self.u_dot) - np.conj(self.u) * self.u_dot) / x
        self.drift = np.abs(wr - 1j)

    @property
    def max_drift(self) -> float:
        return float(self.drift.max())

    def sample_grid(self):
        return self.times

    def _index_of(self, t: float) -> int:
        idx = int(np.searchsorted(self.times, t))
        for j in (idx - 1, idx, idx + 1):
            if 0 <= j < self.times.size and \
                    abs(self.times[j] - t) <= 1e-9 * max(1.0, abs(t)):
                return j
        raise ModeError(
            f"t = {t:g} is not a stored sample of this integrated solution")

    def at(self, t):
        if np.ndim(t) == 0:
            j = self._index_of(float(t))
            return complex(self.u[j]), complex(self.u_dot[j])
        ts = np.asarray(t, dtype=float).reshape(-1)
        idx = np.array([self._index_of(v) for v in ts])
        return self.u[idx], self.u_dot[idx]

    def transformed(self, pair: BogoliubovPair) -> "GridModeSolution":
        u = pair.mu * self.u + np.conj(pair.nu) * np.conj(self.u)
        ud = pair.mu * self.u_dot + np.conj(pair.nu) * np.conj(self.u_dot)
        out = GridModeSolution(self.profile, self.times, u, ud, self.rtol)
        return out

    def describe(self) -> dict:
        return {"kind": "integrated", "rtol": self.rtol,
                "max_wronskian_drift": self.max_drift,
                "t_start": float(self.times[0]), "t_stop": float(self.times[-1]),
                "samples": int(self.times.size)}


class StaticModeSolution(ModeSolution):
    """u(t) = [mu e^{-i w0 t} + nu e^{+i w0 t}] / sqrt(2 m w0)."""

    def __init__(self, m, omega0, pair: BogoliubovPair,
                 norm_tol=DEFAULT_NORM_TOL):
        if m <= 0 or omega0 <= 0:
            raise ModeError("static mode needs m > 0 and omega0 > 0")
        if norm_tol is not None:
            pair.check(norm_tol)
        self.profile = CoefficientProfile.static(m, omega0)
        self.m = float(m)
        self.omega0 = float(omega0)
        self.pair = pair

    def at(self, t):
        w0 = self.omega0
        norm = 1.0 / np.sqrt(2.0 * self.m * w0)
        phase = np.exp(-1j * w0 * np.asarray(t, dtype=float))
        em, ep = phase, np.conj(phase)
        u = (self.pair.mu * em + self.pair.nu * ep) * norm
        ud = 1j * w0 * (-self.pair.mu * em + self.pair.nu * ep) * norm
        if np.ndim(t) == 0:
            return complex(u), complex(ud)
        return u, ud

    def transformed(self, pair: BogoliubovPair) -> "StaticModeSolution":
        mu = pair.mu * self.pair.mu + np.conj(pair.nu) * np.conj(self.pair.nu)
        nu = pair.mu * self.pair.nu + np.conj(pair.nu) * np.conj(self.pair.mu)
        return StaticModeSolution(self.m, self.omega0,
                                  BogoliubovPair(mu, nu), norm_tol=None)

    def describe(self) -> dict:
        return {"kind": "static", "m": self.m, "omega0": self.omega0,
                "mu": [self.pair.mu.real, self.pair.mu.imag],
                "nu": [self.pair.nu.real, self.pair.nu.imag]}


class TanhModeSolution(ModeSolution):
    """Hypergeometric closed form for the tanh profile, evaluated on demand."""

    def __init__(self, profile: CoefficientProfile,
                 target_precision=specfun.DEFAULT_PRECISION):
        if profile.kind != _kernels.PROFILE_TANH:
            raise ModeError("closed form requires a tanh profile")
        self.profile = profile
        self.target_precision = float(target_precision)
        m, _, _, tau = profile.params
        wi, wf = asymptotic_frequencies(profile)
        self.m, self.tau, self.omega_i, self.omega_f = m, tau, wi, wf
        self.a = -0.5j * tau * (wi + wf)
        self.b = -0.5j * tau * (wi - wf)
        self.c = 1.0 - 1j * tau * wi
        if tau * wi > 50.0:
            warnings.warn(
                f"tau*omega_i = {tau * wi:.3g} > 50: hypergeometric accuracy "
                "degrades for large parameters; check reported error estimates",
                stacklevel=2)

    def at(self, t):
        if np.ndim(t) != 0:
            ts = np.asarray(t, dtype=float).reshape(-1)
            vals = [self.at(float(v)) for v in ts]
            return (np.array([v[0] for v in vals]),
                    np.array([v[1] for v in vals]))
        t = float(t)
        x = -math.exp(2.0 * t / self.tau)
        f = specfun.hyp2f1_value(self.a, self.b, self.c, x,
                                 self.target_precision)
        fp = specfun.hyp2f1_value(self.a + 1, self.b + 1, self.c + 1, x,
                                  self.target_precision)
        dfdt = (self.a * self.b / self.c) * fp * (2.0 / self.tau) * x
        pre = cmath.exp(-1j * self.omega_i * t) / math.sqrt(
            2.0 * self.m * self.omega_i)
        return pre * f, pre * (-1j * self.omega_i * f + dfdt)

    def describe(self) -> dict:
        return {"kind": "tanh_closed_form",
                "target_precision": self.target_precision,
                "omega_i": self.omega_i, "omega_f": self.omega_f}


class CombinedModeSolution(ModeSolution):
    """Linear combination u = mu * v + nu* . v* over an arbitrary base v."""

    def __init__(self, base: ModeSolution, pair: BogoliubovPair):
        self.base = base
        self.pair = pair
        self.profile = base.profile

    def at(self, t):
        u, ud = self.base.at(t)
        mu, nuc = self.pair.mu, np.conj(self.pair.nu)
        return mu * u + nuc * np.conj(u), mu * ud + nuc * np.conj(ud)

    def sample_grid(self):
        return self.base.sample_grid()

    def describe(self) -> dict:
        return {"kind": "combined", "base": self.base.describe(),
                "mu": [self.pair.mu.real, self.pair.mu.imag],
                "nu": [self.pair.nu.real, self.pair.nu.imag]}


def static_mode(m: float, omega0: float, pair: BogoliubovPair,
                norm_tol=DEFAULT_NORM_TOL) -> StaticModeSolution:
    """General static-oscillator solution for a normalized (mu, nu) pair."""
    return StaticModeSolution(m, omega0, pair, norm_tol=norm_tol)


def tanh_mode(profile: CoefficientProfile, t,
              target_precision=specfun.DEFAULT_PRECISION):
    """(u, u') of the hypergeometric closed form at time t."""
    return TanhModeSolution(profile, target_precision).at(t)


def tanh_mode_solution(profile: CoefficientProfile,
                       target_precision=specfun.DEFAULT_PRECISION):
    return TanhModeSolution(profile, target_precision)


def plane_wave_initial_data(profile: CoefficientProfile, t0: float):
    """Incoming plane-wave data u = e^{-i w_i t}/sqrt(2 m w_i) at t0."""
    wi, _ = asymptotic_frequencies(profile)
    m = profile.mass
    u0 = cmath.exp(-1j * wi * t0) / math.sqrt(2.0 * m * wi)
    return u0, -1j * wi * u0


def integrate_mode(profile: CoefficientProfile, u0: complex, u_dot0: complex,
                   t_grid, tol: float = 1e-9,
                   drift_factor: float = 1e3) -> GridModeSolution:
    """Integrate the mode equation over t_grid from normalized initial data.

    The Wronskian is monitored (never silently renormalized); if the
    maximum drift exceeds ``drift_factor * tol`` the run aborts with a
    diagnostic.
    """
    ts = _validate_grid(t_grid)
    profile.check_domain(ts)
    x0 = coefficients(profile, ts[0])[0]
    w = wronskian(u0, u_dot0, x0)
    if abs(w - 1j) > 1e-6:
        raise NormalizationError(
            f"initial data not normalized: Wr = {w:.6g}, expected i "
            "(use normalize_mode first)")
    u0 = complex(u0)
    ud0 = complex(u_dot0)
    w0 = ud0 / x0
    y0 = np.array([u0.real, u0.imag, w0.real, w0.imag], dtype=float)
    out, steps, status = _kernels.rk45_grid(
        *profile.kernel_args(), _kernels.SYSTEM_MODE, y0, ts,
        float(tol), float(tol) * 1e-3, 10_000_000)
    if status == _kernels.STATUS_STEP_UNDERFLOW:
        raise IntegrationError("step size underflow in mode integration")
    if status == _kernels.STATUS_STEP_BUDGET:
        raise IntegrationError("step budget exceeded in mode integration")
    u = out[:, 0] + 1j * out[:, 1]
    wv = out[:, 2] + 1j * out[:, 3]
    xs = coefficients(profile, ts)[0]
    sol = GridModeSolution(profile, ts, u, xs * wv, tol)
    threshold = drift_factor * tol
    if sol.max_drift > threshold:
        raise WronskianDriftError(
            f"Wronskian drift {sol.max_drift:.3e} exceeds {threshold:.3e} "
            f"({drift_factor:g} x tol); integration not trustworthy",
            max_drift=sol.max_drift, threshold=threshold)
    return sol


def alpha_coefficients(tau: float, omega_i: float, omega_f: float):
    """Asymptotic expansion coefficients (alpha_plus, alpha_minus).

    alpha_pm = Gamma(1 - i w_i tau) Gamma(-+ i w_f tau) /
               [Gamma(1 - i (tau/2)(w_i +- w_f)) Gamma(-i (tau/2)(w_i +- w_f))]

    They satisfy |alpha_plus|^2 - |alpha_minus|^2 = w_i/w_f, and
    |alpha_minus| -> 0 in the adiabatic limit tau -> inf.
    """
    if tau <= 0:
        raise ModeError(f"tau must be positive, got {tau:g}")
    if omega_f <= 0 or omega_i < omega_f:
        raise ModeError("need omega_i >= omega_f > 0")
    if omega_i == omega_f:
        return 1.0 + 0.0j, 0.0 + 0.0j
    wi, wf = omega_i, omega_f
    a_plus = specfun.gamma_ratio(
        [1.0 - 1j * wi * tau, -1j * wf * tau],
        [1.0 - 0.5j * tau * (wi + wf), -0.5j * tau * (wi + wf)])
    a_minus = specfun.gamma_ratio(
        [1.0 - 1j * wi * tau, 1j * wf * tau],
        [1.0 - 0.5j * tau * (wi - wf), -0.5j * tau * (wi - wf)])
    return a_plus, a_minus


def alpha_pair(tau: float, omega_i: float, omega_f: float) -> BogoliubovPair:
    """Bogoliubov pair between the outgoing static basis and the evolved
    incoming mode, expressed through the alpha coefficients.

    With u_f = e^{-i w_f t}/sqrt(2 m w_f) the evolved solution behaves as
    u -> sqrt(w_f/w_i) [alpha_plus u_f + alpha_minus u_f*], which gives
    mu = sqrt(w_f/w_i) alpha_plus*, nu = -sqrt(w_f/w_i) alpha_minus*.
    """
    ap, am = alpha_coefficients(tau, omega_i, omega_f)
    s = math.sqrt(omega_f / omega_i)
    return BogoliubovPair(s * ap.conjugate(), -s * am.conjugate())


def bogoliubov(u_sol: ModeSolution, v_sol: ModeSolution, t: float,
               norm_tol: float = 1e-6) -> BogoliubovPair:
    """Pair (mu, nu) with v = mu* u - nu* u*, from Wronskians at time t.

    mu = i Wr{u, v*} and nu = i Wr{u*, v*}.  Both solutions must be
    normalized and share the kinetic coefficient X at t (the Wronskian is
    taken with a single X).
    """
    xu = coefficients(u_sol.profile, t)[0]
    xv = coefficients(v_sol.profile, t)[0]
    if abs(xu - xv) > 1e-9 * abs(xu):
        raise ModeError(
            f"mode bases have different kinetic coefficients at t = {t:g}: "
            f"{xu:g} vs {xv:g}")
    u, ud = u_sol.at(t)
    v, vd = v_sol.at(t)
    vc, vdc = np.conj(v), np.conj(vd)
    mu = 1j * (vc * ud - u * vdc) / xu
    nu = 1j * (vc * np.conj(ud) - np.conj(u) * vdc) / xu
    pair = BogoliubovPair(complex(mu), complex(nu))
    if pair.norm_residual > norm_tol:
        raise ModeError(
            f"extracted pair violates |mu|^2 - |nu|^2 = 1 by "
            f"{pair.norm_residual:.3e} (tolerance {norm_tol:g}); inputs are "
            "unnormalized or the integration drifted")
    return pair
