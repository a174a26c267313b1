"""Scenario-driven command-line front end.

Subcommands:

* ``run``     parse a scenario config (or bundled preset), run the pipeline
              profile -> mode -> state -> products, write plot-ready CSV/JSON
              files plus a manifest with the invariant-check summary.
* ``check``   run only the invariant suite, print residuals, no product files.
* ``presets`` list the bundled scenarios.

Exit codes: 0 success, 2 config error, 3 numerical failure, 4 invariant
violation.  Outputs are deterministic: rerunning a scenario produces
byte-identical files (floats are printed with 17 significant digits).
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources

import numpy as np
import yaml

from . import gaussian, modes
from .errors import (ConfigError, InvariantError, OscwignerError)
from .gaussian import GaussianState
from .invariants import QuadraticInvariant, canonicalize
from .profiles import CoefficientProfile, asymptotic_frequencies, classical_trajectory, coefficients
from .specfun import DEFAULT_PRECISION

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_INVARIANT = 4

PRODUCTS = ("trajectory", "moments", "ellipse_track", "wigner_grid", "bogoliubov")
DEFAULT_TOL = 1e-9

_trapz = getattr(np, "trapezoid", np.trapz)


# --------------------------------------------------------------------------
# configuration parsing


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    profile: CoefficientProfile
    mode_spec: dict
    state_spec: dict | None
    invariant_spec: dict | None
    times: np.ndarray
    products: tuple
    wigner_times: tuple
    wigner_points: int
    wigner_halfwidth: float
    trajectory_init: tuple | None
    ode_rtol: float
    specfun_precision: float
    thresholds: dict
    out_dir: str
    out_format: str
    description: str = ""


def _yaml_line_map(text: str) -> dict:
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError(f"YAML syntax error: {exc}",
                          line=mark.line + 1 if mark else None)
    lines: dict = {}

    def walk(node, path):
        if isinstance(node, yaml.MappingNode):
            for key_node, value_node in node.value:
                sub = f"{path}.{key_node.value}" if path else str(key_node.value)
                lines[sub] = key_node.start_mark.line + 1
                walk(value_node, sub)
        elif isinstance(node, yaml.SequenceNode):
            for i, item in enumerate(node.value):
                sub = f"{path}[{i}]"
                lines[sub] = item.start_mark.line + 1
                walk(item, sub)

    if root is not None:
        walk(root, "")
    return lines


class _Ctx:
    """Carries the parsed data plus the field-path -> line map."""

    def __init__(self, data, lines):
        self.data = data
        self.lines = lines

    def fail(self, message, path):
        raise ConfigError(message, field_path=path, line=self.lines.get(path))

    def number(self, obj, key, path, default=None, required=False):
        if key not in obj:
            if required:
                self.fail(f"missing required field '{key}'", path)
            return default
        value = obj[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(f"'{key}' must be a number, got {value!r}", f"{path}.{key}")
        return float(value)

    def integer(self, obj, key, path, default=None, required=False):
        if key not in obj:
            if required:
                self.fail(f"missing required field '{key}'", path)
            return default
        value = obj[key]
        if isinstance(value, bool) or not isinstance(value, int):
            self.fail(f"'{key}' must be an integer, got {value!r}", f"{path}.{key}")
        return int(value)

    def complex_value(self, obj, key, path, default=0j):
        if key not in obj:
            return default
        value = obj[key]
        sub = f"{path}.{key}"
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return complex(value)
        if (isinstance(value, list) and len(value) == 2
                and all(isinstance(v, (int, float)) and not isinstance(v, bool)
                        for v in value)):
            return complex(value[0], value[1])
        self.fail(f"'{key}' must be a number or a [re, im] pair, got {value!r}", sub)

    def beta_value(self, obj, path):
        if "temperature" in obj and "beta" in obj:
            self.fail("give either 'beta' or 'temperature', not both", path)
        if "temperature" in obj:
            t = self.number(obj, "temperature", path)
            if t <= 0:
                self.fail("'temperature' must be positive", f"{path}.temperature")
            return 1.0 / t
        if "beta" not in obj:
            return math.inf
        value = obj["beta"]
        if isinstance(value, str):
            if value.strip().lower() in {"inf", "infinity", ".inf"}:
                return math.inf
            self.fail(f"'beta' must be a positive number or 'inf', got {value!r}",
                      f"{path}.beta")
        beta = self.number(obj, "beta", path)
        if beta != math.inf and beta <= 0:
            self.fail("'beta' must be positive or inf", f"{path}.beta")
        return beta


def _parse_scenario(data, lines, name, base_dir) -> ScenarioConfig:
    if not isinstance(data, dict):
        raise ConfigError("scenario config must be a mapping")
    ctx = _Ctx(data, lines)
    known = {"description", "profile", "mode", "state", "invariant", "grid",
             "products", "wigner", "trajectory", "tolerances", "output"}
    for key in data:
        if key not in known:
            ctx.fail(f"unknown top-level field '{key}'", key)

    profile = _parse_profile(ctx, base_dir)
    mode_spec = _parse_mode(ctx, profile)
    state_spec, invariant_spec = _parse_state_or_invariant(ctx, profile)
    times = _parse_grid(ctx)
    products = _parse_products(ctx)

    wig = data.get("wigner", {}) or {}
    if not isinstance(wig, dict):
        ctx.fail("'wigner' must be a mapping", "wigner")
    wigner_times = wig.get("times")
    if wigner_times is not None:
        if not isinstance(wigner_times, list) or not wigner_times:
            ctx.fail("'times' must be a non-empty list", "wigner.times")
        wigner_times = tuple(float(v) for v in wigner_times)
    else:
        wigner_times = (float(times[times.size // 2]),)
    wigner_points = ctx.integer(wig, "points", "wigner", default=201)
    if wigner_points < 2:
        ctx.fail("'points' must be at least 2", "wigner.points")
    wigner_halfwidth = ctx.number(wig, "halfwidth_sigmas", "wigner", default=5.0)
    if wigner_halfwidth <= 0:
        ctx.fail("'halfwidth_sigmas' must be positive", "wigner.halfwidth_sigmas")

    traj = data.get("trajectory")
    trajectory_init = None
    if traj is not None:
        if not isinstance(traj, dict):
            ctx.fail("'trajectory' must be a mapping", "trajectory")
        trajectory_init = (ctx.number(traj, "q0", "trajectory", required=True),
                           ctx.number(traj, "p0", "trajectory", required=True))

    tols = data.get("tolerances", {}) or {}
    if not isinstance(tols, dict):
        ctx.fail("'tolerances' must be a mapping", "tolerances")
    ode_rtol = ctx.number(tols, "ode_rtol", "tolerances", default=DEFAULT_TOL)
    precision = ctx.number(tols, "hyp2f1_precision", "tolerances",
                           default=DEFAULT_PRECISION)
    if ode_rtol <= 0 or precision <= 0:
        ctx.fail("tolerances must be positive", "tolerances")
    thresholds = tols.get("thresholds", {}) or {}
    if not isinstance(thresholds, dict):
        ctx.fail("'thresholds' must be a mapping", "tolerances.thresholds")
    for key, value in thresholds.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool) or value <= 0:
            ctx.fail("threshold overrides must be positive numbers",
                     f"tolerances.thresholds.{key}")

    out = data.get("output", {}) or {}
    if not isinstance(out, dict):
        ctx.fail("'output' must be a mapping", "output")
    out_dir = str(out.get("directory", "oscwigner-out"))
    out_format = str(out.get("format", "csv")).lower()
    if out_format not in ("csv", "json"):
        ctx.fail(f"format must be 'csv' or 'json', got {out_format!r}",
                 "output.format")

    return ScenarioConfig(
        name=name, profile=profile, mode_spec=mode_spec,
        state_spec=state_spec, invariant_spec=invariant_spec, times=times,
        products=products, wigner_times=wigner_times,
        wigner_points=wigner_points, wigner_halfwidth=wigner_halfwidth,
        trajectory_init=trajectory_init, ode_rtol=ode_rtol,
        specfun_precision=precision, thresholds=dict(thresholds),
        out_dir=out_dir, out_format=out_format,
        description=str(data.get("description", "")))


def _parse_profile(ctx, base_dir) -> CoefficientProfile:
    data = ctx.data.get("profile")
    if not isinstance(data, dict):
        ctx.fail("missing or invalid 'profile' section", "profile")
    kind = data.get("kind")
    try:
        if kind == "static":
            return CoefficientProfile.static(
                ctx.number(data, "m", "profile", default=1.0),
                ctx.number(data, "omega0", "profile", required=True))
        if kind == "tanh":
            return CoefficientProfile.tanh(
                ctx.number(data, "m", "profile", default=1.0),
                ctx.number(data, "omega1", "profile", required=True),
                ctx.number(data, "omega0", "profile", required=True),
                ctx.number(data, "tau", "profile", required=True))
        if kind == "tabulated":
            path = data.get("path")
            if not isinstance(path, str):
                ctx.fail("tabulated profile needs a CSV 'path'", "profile.path")
            if not os.path.isabs(path):
                path = os.path.join(base_dir, path)
            return CoefficientProfile.from_csv(path)
    except OscwignerError as exc:
        ctx.fail(str(exc), "profile")
    ctx.fail(f"profile kind must be static|tanh|tabulated, got {kind!r}",
             "profile.kind")


def _parse_mode(ctx, profile) -> dict:
    data = ctx.data.get("mode")
    if not isinstance(data, dict):
        ctx.fail("missing or invalid 'mode' section", "mode")
    kind = data.get("kind")
    if kind == "static":
        if profile.kind_name != "static":
            ctx.fail("mode kind 'static' requires a static profile", "mode.kind")
        return {"kind": "static",
                "mu": ctx.complex_value(data, "mu", "mode", default=1.0 + 0j),
                "nu": ctx.complex_value(data, "nu", "mode", default=0j)}
    if kind == "tanh_closed_form":
        if profile.kind_name != "tanh":
            ctx.fail("mode kind 'tanh_closed_form' requires a tanh profile",
                     "mode.kind")
        return {"kind": "tanh_closed_form"}
    if kind == "initial":
        if data.get("incoming"):
            if profile.kind_name != "tanh":
                ctx.fail("'incoming: true' requires a tanh profile",
                         "mode.incoming")
            return {"kind": "initial", "incoming": True}
        spec = {"kind": "initial", "incoming": False,
                "u0": ctx.complex_value(data, "u0", "mode", default=None),
                "u_dot0": ctx.complex_value(data, "u_dot0", "mode", default=None),
                "normalize": bool(data.get("normalize", False))}
        if spec["u0"] is None or spec["u_dot0"] is None:
            ctx.fail("mode kind 'initial' needs 'u0' and 'u_dot0' "
                     "(or 'incoming: true' for tanh profiles)", "mode")
        return spec
    ctx.fail(f"mode kind must be static|initial|tanh_closed_form, got {kind!r}",
             "mode.kind")


def _parse_state_or_invariant(ctx, profile):
    state = ctx.data.get("state")
    inv = ctx.data.get("invariant")
    if state is not None and inv is not None:
        raise ConfigError(
            "give exactly one of 'state' or 'invariant', found both",
            field_path="state, invariant",
            line=ctx.lines.get("state"))
    if inv is not None:
        if not isinstance(inv, dict):
            ctx.fail("'invariant' must be a mapping", "invariant")
        spec = {"A": ctx.complex_value(inv, "A", "invariant"),
                "B": ctx.number(inv, "B", "invariant", required=True),
                "D": ctx.complex_value(inv, "D", "invariant"),
                "E": ctx.number(inv, "E", "invariant", default=0.0),
                "beta": ctx.beta_value(inv, "invariant"),
                "hbar": ctx.number(inv, "hbar", "invariant", default=1.0)}
        if spec["hbar"] <= 0:
            ctx.fail("'hbar' must be positive", "invariant.hbar")
        return None, spec
    state = state if isinstance(state, dict) else {}
    if "state" in ctx.data and not isinstance(ctx.data["state"], dict):
        ctx.fail("'state' must be a mapping", "state")
    omega0 = ctx.number(state, "omega0", "state", default=None)
    if omega0 is None:
        if profile.kind_name == "static":
            omega0 = float(profile.params[1])
        elif profile.kind_name == "tanh":
            omega0 = asymptotic_frequencies(profile)[0]
        else:
            omega0 = 1.0
    elif omega0 <= 0:
        ctx.fail("'omega0' must be positive", "state.omega0")
    hbar = ctx.number(state, "hbar", "state", default=1.0)
    if hbar <= 0:
        ctx.fail("'hbar' must be positive", "state.hbar")
    return {"beta": ctx.beta_value(state, "state"),
            "z": ctx.complex_value(state, "z", "state"),
            "omega0": omega0, "hbar": hbar}, None


def _parse_grid(ctx) -> np.ndarray:
    grid = ctx.data.get("grid")
    if not isinstance(grid, dict):
        ctx.fail("missing or invalid 'grid' section", "grid")
    start = ctx.number(grid, "start", "grid", required=True)
    stop = ctx.number(grid, "stop", "grid", required=True)
    steps = ctx.integer(grid, "steps", "grid", required=True)
    if steps < 2:
        ctx.fail("'steps' must be at least 2", "grid.steps")
    if not stop > start:
        ctx.fail("'stop' must exceed 'start'", "grid.stop")
    return np.linspace(start, stop, steps)


def _parse_products(ctx) -> tuple:
    raw = ctx.data.get("products")
    if raw is None:
        return ("moments",)
    if not isinstance(raw, list) or not raw:
        ctx.fail("'products' must be a non-empty list", "products")
    out = []
    for i, item in enumerate(raw):
        name = str(item).replace("-", "_")
        if name not in PRODUCTS:
            ctx.fail(f"unknown product {item!r} (expected one of "
                     f"{', '.join(PRODUCTS)})", f"products[{i}]")
        if name not in out:
            out.append(name)
    return tuple(out)


def parse_config(path) -> ScenarioConfig:
    """Parse and validate a scenario config file (YAML key/value text)."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}")
    lines = _yaml_line_map(text)
    data = yaml.safe_load(text)
    return _parse_scenario(data, lines, name=os.path.basename(str(path)),
                           base_dir=os.path.dirname(os.path.abspath(str(path))))


def preset_names() -> list:
    files = resources.files("oscwigner").joinpath("presets")
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".yaml"))


def load_preset(name: str) -> ScenarioConfig:
    """Load one of the bundled scenario presets by name."""
    path = resources.files("oscwigner").joinpath("presets", f"{name}.yaml")
    if not path.is_file():
        raise ConfigError(
            f"unknown preset {name!r}; available: {', '.join(preset_names())}")
    text = path.read_text()
    return _parse_scenario(yaml.safe_load(text), _yaml_line_map(text),
                           name=name, base_dir=os.getcwd())


# --------------------------------------------------------------------------
# pipeline


def _build_mode(config: ScenarioConfig):
    spec = config.mode_spec
    profile = config.profile
    if spec["kind"] == "static":
        pair = modes.BogoliubovPair(spec["mu"], spec["nu"])
        # permissive here: the invariant suite reports the residual loudly
        return modes.static_mode(float(profile.params[0]),
                                 float(profile.params[1]), pair,
                                 norm_tol=None)
    if spec["kind"] == "tanh_closed_form":
        return modes.tanh_mode_solution(profile, config.specfun_precision)
    if spec["incoming"]:
        u0, ud0 = modes.plane_wave_initial_data(profile, float(config.times[0]))
    else:
        u0, ud0 = spec["u0"], spec["u_dot0"]
        if spec["normalize"]:
            x0 = coefficients(profile, float(config.times[0]))[0]
            u0, ud0 = modes.normalize_mode(u0, ud0, x0)
    return modes.integrate_mode(profile, u0, ud0, config.times,
                                tol=config.ode_rtol)


def _build_state(config: ScenarioConfig, mode):
    """Returns (state, canonical_invariant_or_None)."""
    if config.invariant_spec is not None:
        spec = config.invariant_spec
        canon = canonicalize(QuadraticInvariant(spec["A"], spec["B"],
                                                spec["D"], spec["E"]))
        state = GaussianState(mode.transformed(canon.pair), spec["beta"],
                              canon.hbar_omega0, canon.displacement,
                              spec["hbar"])
        return state, canon
    spec = config.state_spec
    return GaussianState(mode, spec["beta"], spec["hbar"] * spec["omega0"],
                         spec["z"], spec["hbar"]), None


def _fmt(value) -> str:
    return format(float(value), ".17g")


def _write_rows_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _columns_json(path, header, rows):
    cols = {name: [] for name in header}
    for row in rows:
        for name, value in zip(header, row):
            cols[name].append(float(value))
    _write_json(path, cols)


def _write_table(outdir, stem, fmt, header, rows):
    filename = f"{stem}.{ 'csv' if fmt == 'csv' else 'json' }"
    path = os.path.join(outdir, filename)
    if fmt == "csv":
        _write_rows_csv(path, header, rows)
    else:
        _columns_json(path, header, rows)
    return filename


def _product_trajectory(config, state, outdir):
    if config.trajectory_init is not None:
        q0, p0 = config.trajectory_init
    else:
        q0, p0 = gaussian.coherent_center(state, float(config.times[0]))
    traj = classical_trajectory(config.profile, float(q0), float(p0),
                                config.times, tol=config.ode_rtol)
    rows = zip(traj.times, traj.q, traj.p)
    name = _write_table(outdir, "trajectory", config.out_format,
                        ["t", "q_c", "p_c"], rows)
    return [{"product": "trajectory", "file": name}]


def _product_moments(config, state, outdir):
    rows = []
    for t in config.times:
        m = gaussian.covariance(state, float(t))
        rows.append((t, m.q_mean, m.p_mean, m.sigma_qq, m.sigma_pp, m.sigma_qp))
    name = _write_table(outdir, "moments", config.out_format,
                        ["t", "q_mean", "p_mean", "sigma_qq", "sigma_pp",
                         "sigma_qp"], rows)
    return [{"product": "moments", "file": name}]


def _product_ellipse_track(config, state, outdir):
    rows = []
    for t in config.times:
        form = gaussian.h_ellipse(state, float(t))
        center = gaussian.coherent_center(state, float(t))
        ell = gaussian.ellipse_canonical(form, center)
        rows.append((t, center[0], center[1], ell.lambda_plus,
                     ell.lambda_minus, ell.theta, ell.axis_ratio,
                     ell.eccentricity))
    name = _write_table(outdir, "ellipse_track", config.out_format,
                        ["t", "q_c", "p_c", "lambda_plus", "lambda_minus",
                         "theta", "axis_ratio", "eccentricity"], rows)
    return [{"product": "ellipse_track", "file": name}]


def _wigner_window(state, t, halfwidth):
    m = gaussian.covariance(state, t)
    return (m.q_mean, m.p_mean, halfwidth * math.sqrt(m.sigma_qq),
            halfwidth * math.sqrt(m.sigma_pp))


def _product_wigner_grid(config, state, outdir):
    entries = []
    for idx, t in enumerate(config.wigner_times):
        qc, pc, hq, hp = _wigner_window(state, float(t), config.wigner_halfwidth)
        n = config.wigner_points
        qs = np.linspace(qc - hq, qc + hq, n)
        ps = np.linspace(pc - hp, pc + hp, n)
        grid_q, grid_p = np.meshgrid(qs, ps, indexing="ij")
        values = gaussian.wigner(state, float(t), grid_q, grid_p)
        descriptor = {
            "t": float(t), "points": n,
            "q_min": float(qs[0]), "q_max": float(qs[-1]),
            "p_min": float(ps[0]), "p_max": float(ps[-1]),
            "center": [float(qc), float(pc)],
            "halfwidth_sigmas": config.wigner_halfwidth,
            "state": {"beta": "inf" if state.beta == math.inf else state.beta,
                      "hbar_omega0": state.hbar_omega0,
                      "hbar": state.hbar,
                      "z": [state.z.real, state.z.imag]},
        }
        stem = f"wigner_{idx:03d}"
        if config.out_format == "csv":
            rows = ((grid_q.flat[k], grid_p.flat[k], values.flat[k])
                    for k in range(values.size))
            name = _write_table(outdir, stem, "csv", ["q", "p", "P"], rows)
            desc_name = f"{stem}.json"
            _write_json(os.path.join(outdir, desc_name), descriptor)
            entries.append({"product": "wigner_grid", "file": name,
                            "descriptor": desc_name})
        else:
            payload = dict(descriptor)
            payload["q"] = [float(v) for v in qs]
            payload["p"] = [float(v) for v in ps]
            payload["P"] = [[float(v) for v in row] for row in values]
            name = f"{stem}.json"
            _write_json(os.path.join(outdir, name), payload)
            entries.append({"product": "wigner_grid", "file": name})
    return entries


def _out_basis_pair(config, mode):
    """(pair, reference, t) for the bogoliubov product: tanh modes are
    extracted against the outgoing static basis at the end of the grid and
    compared with the alpha-coefficient prediction; static scenarios report
    the pair against the profile's ground basis."""
    if config.profile.kind_name == "tanh":
        t_ref = float(config.times[-1])
        wi, wf = asymptotic_frequencies(config.profile)
        out_basis = modes.static_mode(config.profile.mass, wf,
                                      modes.BogoliubovPair(1.0, 0.0))
        pair = modes.bogoliubov(out_basis, mode, t_ref, norm_tol=math.inf)
        tau = float(config.profile.params[3])
        return pair, modes.alpha_pair(tau, wi, wf), t_ref
    if config.profile.kind_name == "static":
        t_ref = float(config.times[config.times.size // 2])
        base = modes.static_mode(float(config.profile.params[0]),
                                 float(config.profile.params[1]),
                                 modes.BogoliubovPair(1.0, 0.0))
        pair = modes.bogoliubov(base, mode, t_ref, norm_tol=math.inf)
        return pair, None, t_ref
    raise ConfigError(
        "the bogoliubov product needs a static or tanh profile (no asymptotic "
        "basis is defined for tabulated profiles)")


def _pair_fields(prefix, pair):
    return {f"{prefix}mu": [pair.mu.real, pair.mu.imag],
            f"{prefix}nu": [pair.nu.real, pair.nu.imag]}


def _product_bogoliubov(config, state, outdir, pair_info):
    pair, reference, t_ref = pair_info
    gauge = pair.gauge_fixed()
    payload = {"t": t_ref, "norm_residual": pair.norm_residual}
    payload.update(_pair_fields("", pair))
    payload.update(_pair_fields("gauge_", gauge))
    if reference is not None:
        gref = reference.gauge_fixed()
        payload.update(_pair_fields("alpha_", reference))
        payload.update(_pair_fields("alpha_gauge_", gref))
        payload["max_deviation"] = max(abs(gauge.mu - gref.mu),
                                       abs(gauge.nu - gref.nu))
    if config.out_format == "csv":
        keys = sorted(payload)
        header, row = [], []
        for key in keys:
            value = payload[key]
            if isinstance(value, list):
                header.extend([f"re_{key}", f"im_{key}"])
                row.extend(value)
            else:
                header.append(key)
                row.append(value)
        name = _write_table(outdir, "bogoliubov", "csv", header, [row])
    else:
        name = "bogoliubov.json"
        _write_json(os.path.join(outdir, name), payload)
    entry = {"product": "bogoliubov", "file": name}
    if "max_deviation" in payload:
        entry["max_deviation"] = payload["max_deviation"]
    return [entry]


# --------------------------------------------------------------------------
# invariant suite


def _default_thresholds(config) -> dict:
    drift = 1e3 * config.ode_rtol
    # detSigma and pair-norm residuals inherit the Wronskian drift of an
    # integrated mode, so their defaults scale with the drift budget
    out = {"wronskian_drift": drift,
           "bogoliubov_norm": max(1e-9, drift),
           "lambda_product": 1e-10,
           "det_sigma": max(1e-9, 2.0 * drift),
           "wigner_normalization": 1e-6,
           "alpha_consistency": 1e-5}
    out.update(config.thresholds)
    return out


def _wigner_mass_residual(state, t, halfwidth=8.0, points=401) -> float:
    m = gaussian.covariance(state, t)
    hq = halfwidth * math.sqrt(m.sigma_qq)
    hp = halfwidth * math.sqrt(m.sigma_pp)
    qs = np.linspace(m.q_mean - hq, m.q_mean + hq, points)
    ps = np.linspace(m.p_mean - hp, m.p_mean + hp, points)
    grid_q, grid_p = np.meshgrid(qs, ps, indexing="ij")
    values = gaussian.wigner(state, t, grid_q, grid_p)
    mass = _trapz(_trapz(values, ps, axis=1), qs)
    return abs(float(mass) - 1.0)


def invariant_report(config: ScenarioConfig, mode, state,
                     pair_info=None) -> dict:
    """Measured residuals of the library invariants for this scenario."""
    thresholds = _default_thresholds(config)
    times = config.times
    probe = times[:: max(1, times.size // 256)]

    checks = {}

    if isinstance(mode, modes.GridModeSolution):
        drift = mode.max_drift
    else:
        drift = max(mode.drift_at(float(t)) for t in probe)
    checks["wronskian_drift"] = drift

    residual = 0.0
    for sol in {mode, state.mode}:
        pair = getattr(sol, "pair", None)
        if pair is not None:
            residual = max(residual, pair.norm_residual)
    if pair_info is not None:
        residual = max(residual, pair_info[0].norm_residual)
    checks["bogoliubov_norm"] = residual

    lam_dev = 0.0
    det_dev = 0.0
    target = (0.5 * state.hbar * (1.0 + 2.0 * state.n_bar)) ** 2
    for t in probe:
        form = gaussian.h_ellipse(state, float(t))
        ell = gaussian.ellipse_canonical(form)
        lam_dev = max(lam_dev, abs(ell.area_product - 1.0))
        mom = gaussian.covariance(state, float(t))
        det_dev = max(det_dev, abs(mom.det / target - 1.0))
    checks["lambda_product"] = lam_dev
    checks["det_sigma"] = det_dev

    mass_dev = 0.0
    for t in (times[0], times[times.size // 2], times[-1]):
        mass_dev = max(mass_dev, _wigner_mass_residual(state, float(t)))
    checks["wigner_normalization"] = mass_dev

    if pair_info is not None and pair_info[1] is not None:
        gauge, gref = pair_info[0].gauge_fixed(), pair_info[1].gauge_fixed()
        checks["alpha_consistency"] = max(abs(gauge.mu - gref.mu),
                                          abs(gauge.nu - gref.nu))

    report = {}
    for name, value in checks.items():
        report[name] = {"residual": float(value),
                        "threshold": float(thresholds[name]),
                        "pass": bool(value <= thresholds[name])}
    return report


# --------------------------------------------------------------------------
# entry points


def _execute(config: ScenarioConfig):
    mode = _build_mode(config)
    state, canon = _build_state(config, mode)
    pair_info = None
    if "bogoliubov" in config.products or config.profile.kind_name == "tanh":
        pair_info = _out_basis_pair(config, state.mode)
    return mode, state, canon, pair_info


def run_scenario(config: ScenarioConfig, threads: int = 1) -> dict:
    """Run the full pipeline and write product files plus manifest.json."""
    os.makedirs(config.out_dir, exist_ok=True)
    mode, state, canon, pair_info = _execute(config)
    if canon is not None:
        print(f"canonical invariant: hbar_omega0 = {canon.hbar_omega0:.12g}, "
              f"delta = {canon.delta:.12g}, epsilon = {canon.epsilon:.12g}, "
              f"mu = {canon.pair.mu:.12g}, nu = {canon.pair.nu:.12g}")

    tasks = []
    for product in config.products:
        if product == "trajectory":
            tasks.append(("trajectory",
                          lambda: _product_trajectory(config, state, config.out_dir)))
        elif product == "moments":
            tasks.append(("moments",
                          lambda: _product_moments(config, state, config.out_dir)))
        elif product == "ellipse_track":
            tasks.append(("ellipse_track",
                          lambda: _product_ellipse_track(config, state, config.out_dir)))
        elif product == "wigner_grid":
            tasks.append(("wigner_grid",
                          lambda: _product_wigner_grid(config, state, config.out_dir)))
        elif product == "bogoliubov":
            tasks.append(("bogoliubov",
                          lambda: _product_bogoliubov(config, state,
                                                      config.out_dir, pair_info)))

    results = {}
    if threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = {name: pool.submit(fn) for name, fn in tasks}
            for name, future in futures.items():
                results[name] = future.result()
    else:
        for name, fn in tasks:
            results[name] = fn()

    entries = []
    for product in config.products:
        entries.extend(results[product])
        for entry in results[product]:
            line = f"wrote {os.path.join(config.out_dir, entry['file'])}"
            if "max_deviation" in entry:
                line += (f"  (ODE vs alpha max deviation "
                         f"{entry['max_deviation']:.6e})")
            print(line)

    report = invariant_report(config, mode, state, pair_info)
    ok = all(item["pass"] for item in report.values())
    manifest = {
        "scenario": config.name,
        "description": config.description,
        "format": config.out_format,
        "profile": config.profile.describe(),
        "mode": mode.describe(),
        "products": entries,
        "invariant_checks": report,
        "pass": ok,
    }
    if canon is not None:
        manifest["canonical_invariant"] = {
            "hbar_omega0": canon.hbar_omega0,
            "delta": [canon.delta.real, canon.delta.imag],
            "epsilon": canon.epsilon,
            "mu": [canon.pair.mu.real, canon.pair.mu.imag],
            "nu": [canon.pair.nu.real, canon.pair.nu.imag],
        }
    _write_json(os.path.join(config.out_dir, "manifest.json"), manifest)
    print(f"wrote {os.path.join(config.out_dir, 'manifest.json')}")
    return manifest


def check(config: ScenarioConfig) -> dict:
    """Run only the invariant suite; returns the report dict."""
    mode, state, canon, pair_info = _execute(config)
    report = invariant_report(config, mode, state, pair_info)
    ok = all(item["pass"] for item in report.values())
    return {"scenario": config.name, "checks": report, "pass": ok}


def _print_report(report: dict):
    for name, item in report["checks"].items():
        status = "PASS" if item["pass"] else "FAIL"
        print(f"{status} {name}: residual {item['residual']:.6e} "
              f"(threshold {item['threshold']:.1e})")
    print("overall:", "PASS" if report["pass"] else "FAIL")


def _emit_error(exc: Exception, code: int):
    record = {"error": {"type": type(exc).__name__, "message": str(exc),
                        "exit_code": code}}
    if isinstance(exc, ConfigError):
        record["error"]["field_path"] = exc.field_path
        record["error"]["line"] = exc.line
    print(json.dumps(record, sort_keys=True), file=sys.stderr)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oscwigner",
        description="Exact quantum-statistical dynamics of time-dependent "
                    "generalized oscillators")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--config", help="scenario config file (YAML)")
        group.add_argument("--preset", help="bundled scenario name")
        p.add_argument("--out", help="output directory")
        p.add_argument("--format", choices=["csv", "json"],
                       help="output file format")
        p.add_argument("--tol", type=float, help="ODE relative tolerance")
        p.add_argument("--threads", type=int, default=1,
                       help="parallel product evaluation")

    run_p = sub.add_parser("run", help="run a scenario and write products")
    add_common(run_p)
    check_p = sub.add_parser("check", help="run only the invariant suite")
    add_common(check_p)
    sub.add_parser("presets", help="list bundled scenarios")
    return parser


def _config_from_args(args) -> ScenarioConfig:
    if args.config:
        config = parse_config(args.config)
    else:
        config = load_preset(args.preset)
    updates = {}
    if args.out:
        updates["out_dir"] = args.out
    if args.format:
        updates["out_format"] = args.format
    if args.tol is not None:
        if args.tol <= 0:
            raise ConfigError("--tol must be positive")
        updates["ode_rtol"] = args.tol
    if updates:
        config = dataclasses.replace(config, **updates)
    return config


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "presets":
        for name in preset_names():
            print(f"{name}: {load_preset(name).description}")
        return EXIT_OK
    try:
        config = _config_from_args(args)
        if args.command == "run":
            manifest = run_scenario(config, threads=max(1, args.threads))
            return EXIT_OK if manifest["pass"] else EXIT_INVARIANT
        report = check(config)
        _print_report(report)
        return EXIT_OK if report["pass"] else EXIT_INVARIANT
    except ConfigError as exc:
        _emit_error(exc, EXIT_CONFIG)
        return EXIT_CONFIG
    except OscwignerError as exc:
        _emit_error(exc, EXIT_NUMERICAL)
        return EXIT_NUMERICAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
