#!/usr/bin/env python3
"""Benchmark the numba hot kernels against the pure-numpy fallback.

Times each shared kernel on transform-plan-sized workloads, plus an
end-to-end plan build under the active backend.  Run:

    python benchmarks/bench_backends.py [--n 262144] [--repeats 5]

The numba timings exclude JIT compilation (one warmup call per kernel).
"""

import argparse
import math
import time

import numpy as np

from dunkl1d._backend import numpy_impl

try:
    from dunkl1d._backend import numba_impl
except ImportError:
    numba_impl = None


def timeit(fn, *args, repeats=5):
    fn(*args)  # warmup (JIT compile on the numba side)
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=262144,
                    help="array length (default: one 512x512 plan's worth)")
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    n = args.n
    g17 = math.gamma(1.7 + 1.0)

    z_small = np.ascontiguousarray(rng.uniform(0.0, 7.0, n))
    z_mid = np.ascontiguousarray(rng.uniform(7.0, 20.0, n))
    z_big = np.ascontiguousarray(rng.uniform(20.0, 200.0, n))
    u_small = np.ascontiguousarray(rng.uniform(0, 12, n) + 1j * rng.uniform(-5, 5, n))
    u_small = np.where(u_small.real < 0, -u_small, u_small)
    u_big = np.ascontiguousarray(rng.uniform(40, 400, n) + 1j * rng.uniform(-40, 40, n))
    x_nodes = np.ascontiguousarray(rng.uniform(-14, 14, 2048))
    from dunkl1d import MultiplicityParam
    from dunkl1d.oscillator import recurrence_coefficients
    bc = recurrence_coefficients(MultiplicityParam(1.0), 120)

    cases = [
        ("josc_series (|z|<=7)", "josc_series", (0.7, z_small)),
        ("josc_series_dd (7<|z|<=20)", "josc_series_dd", (0.7, z_mid)),
        ("josc_halfint (m=3)", "josc_halfint", (3, z_big)),
        ("josc_hankel (|z|>20)", "josc_hankel", (1.7, z_big, g17)),
        ("imod_series_scaled", "imod_series_scaled", (0.7, u_small)),
        ("imod_asym_scaled", "imod_asym_scaled", (1.7, u_big, g17)),
        ("imod_halfint_scaled (m=2)", "imod_halfint_scaled", (2, u_big)),
        ("orthopoly_eval (120x2048)", "orthopoly_eval", (bc, 0.9, x_nodes)),
    ]

    print(f"array length n = {n}, best of {args.repeats} runs, seconds")
    header = f"{'kernel':32s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}"
    print(header)
    print("-" * len(header))
    for label, name, call_args in cases:
        t_np = timeit(getattr(numpy_impl, name), *call_args, repeats=args.repeats)
        if numba_impl is not None:
            t_nb = timeit(getattr(numba_impl, name), *call_args, repeats=args.repeats)
            print(f"{label:32s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:7.1f}x")
        else:
            print(f"{label:32s} {t_np:10.4f} {'n/a':>10s} {'':>8s}")

    # end-to-end: transform plan construction under the active backend
    from dunkl1d import TransformPlan, backend_name, gauss_legendre_grid
    grid = gauss_legendre_grid(512, 14.0, 16)
    for k in (0.7, 1.0):
        t0 = time.perf_counter()
        TransformPlan(grid, MultiplicityParam(k))
        dt = time.perf_counter() - t0
        print(f"TransformPlan build (N=512, k={k}) [{backend_name()}]: {dt:.3f}s")


if __name__ == "__main__":
    main()
