#!/usr/bin/env python3
"""Benchmark the compiled kernels against their pure-numpy fallbacks.

Covers the three hot paths: pairwise covariance assembly, covariance
from a precomputed distance matrix, and Gaussian KDE evaluation on a
grid. Each case is timed with a warm-up call (so JIT compilation is
excluded) and the best of several repeats is reported.

Usage:
    python3 benchmarks/bench_accel.py [--repeats 5]

Setting KLE_NO_NUMBA=1 would disable the compiled path entirely; this
script instead calls both implementations directly so a single run
produces the comparison.
"""

import argparse
import time

import numpy as np

from klefield import _accel

CASES = {
    "pairwise_covariance (N=4000, 3D, sqexp)": (
        lambda rng: (rng.standard_normal((4000, 3)), 0.5, 1.0, 1),
        _accel.pairwise_covariance_np,
        getattr(_accel, "_pairwise_covariance_nb", None),
    ),
    "covariance_from_distances (N=4000, exp)": (
        lambda rng: (
            (lambda a: a + a.T)(np.abs(rng.standard_normal((4000, 4000)))),
            0.5,
            1.0,
            0,
        ),
        _accel.covariance_from_distances_np,
        getattr(_accel, "_covariance_from_distances_nb", None),
    ),
    "gaussian_kde_on_grid (n=20000, 4096 pts)": (
        lambda rng: (
            rng.standard_normal(20000),
            np.linspace(-8, 8, 4096),
            0.1,
        ),
        _accel.gaussian_kde_on_grid_np,
        getattr(_accel, "_gaussian_kde_on_grid_nb", None),
    ),
}


def best_time(fn, args, repeats):
    fn(*args)  # warm-up (JIT compile / cache touch)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    print(f"numba available: {_accel.HAVE_NUMBA} (in use: {_accel.USE_NUMBA})")
    for name, (make_args, np_fn, nb_fn) in CASES.items():
        case_args = make_args(rng)
        t_np = best_time(np_fn, case_args, args.repeats)
        line = f"{name:45s} numpy {t_np * 1e3:9.2f} ms"
        if nb_fn is not None:
            t_nb = best_time(nb_fn, case_args, args.repeats)
            line += f"   numba {t_nb * 1e3:9.2f} ms   speedup {t_np / t_nb:5.2f}x"
            err = np.abs(np_fn(*case_args) - nb_fn(*case_args)).max()
            line += f"   max |diff| {err:.2e}"
        print(line)


if __name__ == "__main__":
    main()
