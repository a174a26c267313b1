"""Oscillator coefficient profiles and the classical Hamilton trajectory.

A profile supplies the time-dependent coefficients (X, Y, Z) of the
quadratic Hamiltonian H = X p^2/2 + Y (pq+qp)/2 + Z q^2/2.  Three kinds are
supported: a static oscillator, the exactly solvable tanh frequency sweep,
and tabulated data interpolated with natural cubic splines (the mode
equation needs X' and Y', so the interpolant must be C2).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from . import _kernels
from ._kernels import PROFILE_STATIC, PROFILE_TABULATED, PROFILE_TANH
from .errors import IntegrationError, ProfileError

_EMPTY = np.empty(0)
_EMPTY_C = np.empty((4, 0))
_KIND_NAMES = {PROFILE_STATIC: "static", PROFILE_TANH: "tanh",
               PROFILE_TABULATED: "tabulated"}


@dataclass(frozen=True)
class CoefficientProfile:
    """Immutable coefficient profile; construct via the factory methods."""

    kind: int
    params: np.ndarray
    knots: np.ndarray = field(default_factory=lambda: _EMPTY)
    coeff_x: np.ndarray = field(default_factory=lambda: _EMPTY_C)
    coeff_y: np.ndarray = field(default_factory=lambda: _EMPTY_C)
    coeff_z: np.ndarray = field(default_factory=lambda: _EMPTY_C)

    # -- factories ---------------------------------------------------------

    @staticmethod
    def static(m: float, omega0: float) -> "CoefficientProfile":
        """Constant-coefficient oscillator: X = 1/m, Y = 0, Z = m omega0^2."""
        if m <= 0:
            raise ProfileError(f"mass must be positive, got {m:g}")
        if omega0 <= 0:
            raise ProfileError(f"omega0 must be positive, got {omega0:g}")
        return CoefficientProfile(PROFILE_STATIC,
                                  np.array([m, omega0], dtype=float))

    @staticmethod
    def tanh(m: float, omega1: float, omega0: float,
             tau: float) -> "CoefficientProfile":
        """Frequency sweep Z = m [omega1^2 - omega0^2 tanh(t/tau)].

        Requires omega1 > omega0 >= 0 so that the outgoing frequency
        omega_f = sqrt(omega1^2 - omega0^2) stays real; omega0 = 0 is the
        static limit.
        """
        if m <= 0:
            raise ProfileError(f"mass must be positive, got {m:g}")
        if tau <= 0:
            raise ProfileError(f"tau must be positive, got {tau:g}")
        if omega0 < 0:
            raise ProfileError(f"omega0 must be nonnegative, got {omega0:g}")
        if omega1 <= omega0:
            raise ProfileError(
                f"tanh profile needs omega1 > omega0 for a real outgoing "
                f"frequency, got omega1 = {omega1:g}, omega0 = {omega0:g}")
        return CoefficientProfile(PROFILE_TANH,
                                  np.array([m, omega1, omega0, tau], dtype=float))

    @staticmethod
    def tabulated(t, x, y, z) -> "CoefficientProfile":
        """Sampled coefficients on a strictly increasing grid."""
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        z = np.asarray(z, dtype=float)
        if t.ndim != 1 or t.size < 4:
            raise ProfileError("tabulated profile needs at least 4 samples")
        if not (x.shape == y.shape == z.shape == t.shape):
            raise ProfileError("tabulated columns must share the time grid shape")
        if np.any(np.diff(t) <= 0):
            raise ProfileError("tabulated time grid must be strictly increasing")
        if np.any(x <= 0):
            raise ProfileError("kinetic coefficient X must be positive everywhere")
        sx = CubicSpline(t, x, bc_type="natural")
        sy = CubicSpline(t, y, bc_type="natural")
        sz = CubicSpline(t, z, bc_type="natural")
        # the spline can undershoot between positive samples
        fine = np.linspace(t[0], t[-1], max(8 * t.size, 256))
        if np.any(sx(fine) <= 0):
            raise ProfileError(
                "interpolated X(t) crosses zero between samples; profiles "
                "with vanishing kinetic coefficient are rejected")
        return CoefficientProfile(
            PROFILE_TABULATED, np.empty(0), t.copy(),
            np.ascontiguousarray(sx.c), np.ascontiguousarray(sy.c),
            np.ascontiguousarray(sz.c))

    @staticmethod
    def from_csv(path) -> "CoefficientProfile":
        """Read a tabulated profile from CSV columns t,X,Y,Z (header row)."""
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip().lower() for h in header[:4]] != \
                    ["t", "x", "y", "z"]:
                raise ProfileError(
                    f"{path}: expected CSV header 't,X,Y,Z'")
            rows = [[float(v) for v in row[:4]] for row in reader if row]
        if not rows:
            raise ProfileError(f"{path}: no data rows")
        data = np.asarray(rows, dtype=float)
        return CoefficientProfile.tabulated(data[:, 0], data[:, 1],
                                            data[:, 2], data[:, 3])

    # -- queries -----------------------------------------------------------

    @property
    def kind_name(self) -> str:
        return _KIND_NAMES[self.kind]

    @property
    def domain(self):
        """(t_min, t_max) for tabulated profiles, infinite otherwise."""
        if self.kind == PROFILE_TABULATED:
            return float(self.knots[0]), float(self.knots[-1])
        return -math.inf, math.inf

    @property
    def mass(self) -> float:
        if self.kind == PROFILE_TABULATED:
            raise ProfileError("tabulated profiles have no single mass parameter")
        return float(self.params[0])

    def check_domain(self, t):
        lo, hi = self.domain
        t = np.asarray(t, dtype=float)
        if np.any(t < lo) or np.any(t > hi):
            raise ProfileError(
                f"time outside tabulated domain [{lo:g}, {hi:g}]")

    def kernel_args(self):
        return (self.kind, self.params, self.knots,
                self.coeff_x, self.coeff_y, self.coeff_z)

    def describe(self) -> dict:
        """JSON-serializable parameter summary."""
        if self.kind == PROFILE_STATIC:
            return {"kind": "static", "m": self.params[0],
                    "omega0": self.params[1]}
        if self.kind == PROFILE_TANH:
            return {"kind": "tanh", "m": self.params[0],
                    "omega1": self.params[1], "omega0": self.params[2],
                    "tau": self.params[3]}
        return {"kind": "tabulated", "t_min": float(self.knots[0]),
                "t_max": float(self.knots[-1]), "samples": int(self.knots.size)}


def coefficients(profile: CoefficientProfile, t):
    """Coefficients (X, Y, Z) at time t (scalar or array)."""
    profile.check_domain(t)
    args = profile.kernel_args()
    if np.ndim(t) == 0:
        x, y, z = _kernels.profile_xyz(*args, float(t))
        if x <= 0:
            raise ProfileError(f"X({float(t):g}) = {x:g} is not positive")
        return x, y, z
    ts = np.asarray(t, dtype=float)
    out = np.empty((3,) + ts.shape)
    flat_t = ts.reshape(-1)
    fx, fy, fz = (out[0].reshape(-1), out[1].reshape(-1), out[2].reshape(-1))
    for i in range(flat_t.size):
        fx[i], fy[i], fz[i] = _kernels.profile_xyz(*args, flat_t[i])
    if np.any(out[0] <= 0):
        raise ProfileError("X(t) is not positive on the requested times")
    return out[0], out[1], out[2]


def coefficient_derivatives(profile: CoefficientProfile, t):
    """(X', Y') at time t; identically zero for the analytic kinds."""
    profile.check_domain(t)
    args = profile.kernel_args()
    if np.ndim(t) == 0:
        return _kernels.profile_xy_dot(*args, float(t))
    ts = np.asarray(t, dtype=float).reshape(-1)
    xd = np.empty(ts.shape)
    yd = np.empty(ts.shape)
    for i in range(ts.size):
        xd[i], yd[i] = _kernels.profile_xy_dot(*args, ts[i])
    return xd, yd


def asymptotic_frequencies(profile: CoefficientProfile):
    """(omega_i, omega_f) of a tanh profile.

    omega_i = sqrt(omega1^2 + omega0^2) is the incoming frequency at
    t -> -inf and omega_f = sqrt(omega1^2 - omega0^2) the outgoing one.
    """
    if profile.kind != PROFILE_TANH:
        raise ProfileError("asymptotic frequencies are defined for tanh profiles")
    _, w1, w0, _ = profile.params
    return math.sqrt(w1 * w1 + w0 * w0), math.sqrt(w1 * w1 - w0 * w0)


@dataclass(frozen=True)
class ClassicalTrajectory:
    """Sampled solution of the classical Hamilton equations."""

    times: np.ndarray
    q: np.ndarray
    p: np.ndarray
    rtol: float
    n_steps: int

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "q_c", "p_c"])
            for i in range(self.times.size):
                writer.writerow([format(v, ".17g") for v in
                                 (self.times[i], self.q[i], self.p[i])])


def _validate_grid(t_grid) -> np.ndarray:
    ts = np.asarray(t_grid, dtype=float)
    if ts.ndim != 1 or ts.size < 2:
        raise ProfileError("time grid must be 1-D with at least 2 points")
    if np.any(np.diff(ts) <= 0):
        raise ProfileError("time grid must be strictly increasing")
    return ts


def classical_trajectory(profile: CoefficientProfile, q0: float, p0: float,
                         t_grid, tol: float = 1e-9) -> ClassicalTrajectory:
    """Integrate q' = Xp + Yq, p' = -Yp - Zq over t_grid.

    The local error per step is controlled by the relative tolerance
    ``tol`` (absolute floor tol * 1e-3).
    """
    ts = _validate_grid(t_grid)
    profile.check_domain(ts)
    y0 = np.array([q0, p0], dtype=float)
    out, steps, status = _kernels.rk45_grid(
        *profile.kernel_args(), _kernels.SYSTEM_HAMILTON, y0, ts,
        float(tol), float(tol) * 1e-3, 10_000_000)
    if status == _kernels.STATUS_STEP_UNDERFLOW:
        raise IntegrationError("step size underflow in classical trajectory")
    if status == _kernels.STATUS_STEP_BUDGET:
        raise IntegrationError("step budget exceeded in classical trajectory")
    return ClassicalTrajectory(ts, out[:, 0].copy(), out[:, 1].copy(),
                               float(tol), int(steps))
