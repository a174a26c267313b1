"""Hot numerical kernels.

Everything here is written in plain scalar-loop style so the same source
compiles under numba ``@njit`` and also runs as ordinary Python/NumPy when
the fallback path is selected (see :mod:`oscwigner._accel`).  Kernels return
status codes instead of raising; the wrapping modules translate them into
exceptions.

Profile encoding shared with :mod:`oscwigner.profiles`:

* kind 0: static,   params = (m, omega0)
* kind 1: tanh,     params = (m, omega1, omega0, tau)
* kind 2: tabulated cubic splines, knots plus scipy-layout coefficient
  blocks (4, n-1) for X, Y, Z

System encoding for the adaptive integrator:

* system 0: complex mode equation in first-order form, state
  (Re u, Im u, Re w, Im w) with w = u'/X
* system 1: classical Hamilton equations, state (q, p)
"""

import numpy as np

from ._accel import jit

STATUS_OK = 0
STATUS_STEP_UNDERFLOW = 1
STATUS_STEP_BUDGET = 2

PROFILE_STATIC = 0
PROFILE_TANH = 1
PROFILE_TABULATED = 2

SYSTEM_MODE = 0
SYSTEM_HAMILTON = 1


@jit
def _spline_interval(knots, t):
    """Index i with knots[i] <= t < knots[i+1], clamped to valid segments."""
    n = knots.shape[0]
    if t <= knots[0]:
        return 0
    if t >= knots[n - 1]:
        return n - 2
    lo = 0
    hi = n - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if knots[mid] <= t:
            lo = mid
        else:
            hi = mid
    return lo


@jit
def _spline_eval(knots, coeffs, t):
    i = _spline_interval(knots, t)
    dx = t - knots[i]
    return ((coeffs[0, i] * dx + coeffs[1, i]) * dx + coeffs[2, i]) * dx + coeffs[3, i]


@jit
def _spline_deriv(knots, coeffs, t):
    i = _spline_interval(knots, t)
    dx = t - knots[i]
    return (3.0 * coeffs[0, i] * dx + 2.0 * coeffs[1, i]) * dx + coeffs[2, i]


@jit
def profile_xyz(kind, params, knots, cx, cy, cz, t):
    """Coefficients (X, Y, Z) of the quadratic Hamiltonian at time t."""
    if kind == PROFILE_STATIC:
        m = params[0]
        w0 = params[1]
        return 1.0 / m, 0.0, m * w0 * w0
    elif kind == PROFILE_TANH:
        m = params[0]
        w1 = params[1]
        w0 = params[2]
        tau = params[3]
        return 1.0 / m, 0.0, m * (w1 * w1 - w0 * w0 * np.tanh(t / tau))
    else:
        return (
            _spline_eval(knots, cx, t),
            _spline_eval(knots, cy, t),
            _spline_eval(knots, cz, t),
        )


@jit
def profile_xy_dot(kind, params, knots, cx, cy, cz, t):
    """Time derivatives (X', Y'); analytic kinds have constant X and Y = 0."""
    if kind == PROFILE_TABULATED:
        return _spline_deriv(knots, cx, t), _spline_deriv(knots, cy, t)
    return 0.0, 0.0


@jit
def _rhs(system, kind, params, knots, cx, cy, cz, t, y, dy):
    x, yc, z = profile_xyz(kind, params, knots, cx, cy, cz, t)
    if system == SYSTEM_MODE:
        xd, yd = profile_xy_dot(kind, params, knots, cx, cy, cz, t)
        # u' = X w ;  w' = -Q u with Q = Z - Y^2/X + (X'Y - XY')/X^2
        q = z - yc * yc / x + (xd * yc - x * yd) / (x * x)
        dy[0] = x * y[2]
        dy[1] = x * y[3]
        dy[2] = -q * y[0]
        dy[3] = -q * y[1]
    else:
        # q' = X p + Y q ;  p' = -Y p - Z q
        dy[0] = x * y[1] + yc * y[0]
        dy[1] = -yc * y[1] - z * y[0]


@jit
def _error_norm(err, y_old, y_new, rtol, atol):
    dim = err.shape[0]
    acc = 0.0
    for i in range(dim):
        ya = abs(y_old[i])
        yb = abs(y_new[i])
        scale = atol + rtol * (ya if ya > yb else yb)
        e = err[i] / scale
        acc += e * e
    return np.sqrt(acc / dim)


@jit
def rk45_grid(kind, params, knots, cx, cy, cz, system, y0, t_grid, rtol, atol,
              max_steps):
    """Adaptive Dormand-Prince 5(4) integration sampled exactly on t_grid.

    Returns (samples, n_steps, status).  Steps are clamped so every grid
    time is hit exactly; no dense-output interpolation is involved.
    """
    n = t_grid.shape[0]
    dim = y0.shape[0]
    out = np.empty((n, dim))
    y = y0.copy()
    for i in range(dim):
        out[0, i] = y[i]

    k1 = np.empty(dim)
    k2 = np.empty(dim)
    k3 = np.empty(dim)
    k4 = np.empty(dim)
    k5 = np.empty(dim)
    k6 = np.empty(dim)
    k7 = np.empty(dim)
    ytmp = np.empty(dim)
    ynew = np.empty(dim)
    yerr = np.empty(dim)

    t = t_grid[0]
    _rhs(system, kind, params, knots, cx, cy, cz, t, y, k1)

    # starting step size, Hairer-style
    d0 = 0.0
    d1 = 0.0
    for i in range(dim):
        scale = atol + rtol * abs(y[i])
        d0 += (y[i] / scale) ** 2
        d1 += (k1[i] / scale) ** 2
    d0 = np.sqrt(d0 / dim)
    d1 = np.sqrt(d1 / dim)
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    for i in range(dim):
        ytmp[i] = y[i] + h0 * k1[i]
    _rhs(system, kind, params, knots, cx, cy, cz, t + h0, ytmp, k2)
    d2 = 0.0
    for i in range(dim):
        scale = atol + rtol * abs(y[i])
        d2 += ((k2[i] - k1[i]) / scale) ** 2
    d2 = np.sqrt(d2 / dim) / h0
    dm = d1 if d1 > d2 else d2
    if dm > 1e-15:
        h1 = (0.01 / dm) ** 0.2
    else:
        h1 = h0 * 1e3 if h0 * 1e3 > 1e-6 else 1e-6
    h_free = 100.0 * h0 if 100.0 * h0 < h1 else h1
    span = t_grid[n - 1] - t_grid[0]
    if h_free > span:
        h_free = span

    steps = 0
    for ig in range(1, n):
        t_target = t_grid[ig]
        while t < t_target:
            if steps >= max_steps:
                return out, steps, STATUS_STEP_BUDGET
            remaining = t_target - t
            clamped = h_free >= remaining
            h = remaining if clamped else h_free
            if h < 1e-14 * (1.0 if abs(t) < 1.0 else abs(t)):
                return out, steps, STATUS_STEP_UNDERFLOW

            for i in range(dim):
                ytmp[i] = y[i] + h * 0.2 * k1[i]
            _rhs(system, kind, params, knots, cx, cy, cz, t + 0.2 * h, ytmp, k2)
            for i in range(dim):
                ytmp[i] = y[i] + h * (0.075 * k1[i] + 0.225 * k2[i])
            _rhs(system, kind, params, knots, cx, cy, cz, t + 0.3 * h, ytmp, k3)
            for i in range(dim):
                ytmp[i] = y[i] + h * ((44.0 / 45.0) * k1[i]
                                      - (56.0 / 15.0) * k2[i]
                                      + (32.0 / 9.0) * k3[i])
            _rhs(system, kind, params, knots, cx, cy, cz, t + 0.8 * h, ytmp, k4)
            for i in range(dim):
                ytmp[i] = y[i] + h * ((19372.0 / 6561.0) * k1[i]
                                      - (25360.0 / 2187.0) * k2[i]
                                      + (64448.0 / 6561.0) * k3[i]
                                      - (212.0 / 729.0) * k4[i])
            _rhs(system, kind, params, knots, cx, cy, cz, t + (8.0 / 9.0) * h,
                 ytmp, k5)
            for i in range(dim):
                ytmp[i] = y[i] + h * ((9017.0 / 3168.0) * k1[i]
                                      - (355.0 / 33.0) * k2[i]
                                      + (46732.0 / 5247.0) * k3[i]
                                      + (49.0 / 176.0) * k4[i]
                                      - (5103.0 / 18656.0) * k5[i])
            _rhs(system, kind, params, knots, cx, cy, cz, t + h, ytmp, k6)
            for i in range(dim):
                ynew[i] = y[i] + h * ((35.0 / 384.0) * k1[i]
                                      + (500.0 / 1113.0) * k3[i]
                                      + (125.0 / 192.0) * k4[i]
                                      - (2187.0 / 6784.0) * k5[i]
                                      + (11.0 / 84.0) * k6[i])
            _rhs(system, kind, params, knots, cx, cy, cz, t + h, ynew, k7)
            for i in range(dim):
                yerr[i] = h * ((71.0 / 57600.0) * k1[i]
                               - (71.0 / 16695.0) * k3[i]
                               + (71.0 / 1920.0) * k4[i]
                               - (17253.0 / 339200.0) * k5[i]
                               + (22.0 / 525.0) * k6[i]
                               - (1.0 / 40.0) * k7[i])

            err = _error_norm(yerr, y, ynew, rtol, atol)
            steps += 1
            if err <= 1.0:
                t = t + h
                for i in range(dim):
                    y[i] = ynew[i]
                    k1[i] = k7[i]
                if err == 0.0:
                    factor = 5.0
                else:
                    factor = 0.9 * err ** -0.2
                    if factor > 5.0:
                        factor = 5.0
                    elif factor < 0.2:
                        factor = 0.2
                if clamped:
                    grown = h * factor
                    if grown > h_free:
                        h_free = grown
                else:
                    h_free = h * factor
            else:
                factor = 0.9 * err ** -0.2
                if factor < 0.1:
                    factor = 0.1
                h_free = h * factor
        for i in range(dim):
            out[ig, i] = y[i]
    return out, steps, STATUS_OK


@jit
def hyp2f1_series(a, b, c, x, tol, max_terms):
    """Gauss hypergeometric power series with plateau-guarded stopping.

    Sums 2F1(a,b;c;x) termwise; stops once the last term is below
    tol/10 of the partial sum for three consecutive terms.  Returns
    (value, relative_error_estimate, n_terms, status).
    """
    s = 1.0 + 0.0j
    term = 1.0 + 0.0j
    small = 0
    n = 0
    ax = abs(x)
    while n < max_terms:
        term = term * ((a + n) * (b + n) / ((c + n) * (n + 1.0)) * x)
        s = s + term
        n += 1
        smag = abs(s)
        tmag = abs(term)
        if tmag == 0.0:
            # a vanishing term terminates the series exactly
            return s, 0.0, n, STATUS_OK
        if smag > 0.0 and tmag <= smag * (0.1 * tol):
            small += 1
            if small >= 3:
                if ax < 1.0:
                    tail = tmag * ax / (1.0 - ax)
                else:
                    tail = 3.0 * tmag
                return s, (tmag + tail) / smag, n, STATUS_OK
        else:
            small = 0
    smag = abs(s)
    rel = abs(term) / smag if smag > 0.0 else 1.0
    return s, rel, n, 1
