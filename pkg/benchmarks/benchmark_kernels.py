#!/usr/bin/env python3
"""Benchmark the numba-compiled kernels against the pure-NumPy fallback.

Runs the two hot workloads (adaptive mode integration over the tanh sweep,
and a batch of hypergeometric evaluations across the full argument range)
in two subprocesses: one with the default compiled path, one with
OSCWIGNER_DISABLE_NUMBA=1.  Prints a small timing table.

Usage: python benchmarks/benchmark_kernels.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, math, time
import numpy as np
import oscwigner as ow

repeat = {repeat}

prof = ow.CoefficientProfile.tanh(1.0, math.sqrt(2.5), math.sqrt(1.5), 2.0)
grid = np.linspace(-16.0, 16.0, 1601)
u0, ud0 = ow.plane_wave_initial_data(prof, -16.0)

# warm-up (includes JIT compilation on the compiled path)
ow.integrate_mode(prof, u0, ud0, grid, tol=1e-10)
t0 = time.perf_counter()
for _ in range(repeat):
    sol = ow.integrate_mode(prof, u0, ud0, grid, tol=1e-10)
t_ode = (time.perf_counter() - t0) / repeat

a = -1j * (2.0 / 2.0) * (2.0 + 1.0)
b = -1j * (2.0 / 2.0) * (2.0 - 1.0)
c = 1.0 - 2.0j * 2.0
xs = -np.exp(np.linspace(-16.0, 16.0, 400))
ow.hyp2f1_value(a, b, c, float(xs[0]))
t0 = time.perf_counter()
for _ in range(repeat):
    for x in xs:
        ow.hyp2f1_value(a, b, c, float(x))
t_2f1 = (time.perf_counter() - t0) / repeat

print(json.dumps({{"numba": ow.NUMBA_ENABLED, "ode_s": t_ode,
                   "hyp2f1_s": t_2f1, "drift": sol.max_drift}}))
"""


def run(disable_numba: bool, repeat: int) -> dict:
    env = dict(os.environ)
    if disable_numba:
        env["OSCWIGNER_DISABLE_NUMBA"] = "1"
    else:
        env.pop("OSCWIGNER_DISABLE_NUMBA", None)
    out = subprocess.run([sys.executable, "-c", WORKLOAD.format(repeat=repeat)],
                         capture_output=True, text=True, env=env, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    compiled = run(False, args.repeat)
    fallback = run(True, args.repeat)
    if not compiled["numba"]:
        print("warning: numba path unavailable; comparing fallback to itself")

    print(f"{'workload':<28}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for key, label in (("ode_s", "tanh mode integration"),
                       ("hyp2f1_s", "400 x hyp2f1 evaluations")):
        ratio = fallback[key] / compiled[key]
        print(f"{label:<28}{compiled[key]:>12.4f}{fallback[key]:>12.4f}"
              f"{ratio:>9.1f}x")
    print(f"(Wronskian drift parity: {compiled['drift']:.3e} vs "
          f"{fallback['drift']:.3e})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
