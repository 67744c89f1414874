"""Time every hot kernel on both backends.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.  Numba
functions are called once before timing so compilation is excluded.
"""
import argparse
import time

import numpy as np

from hornpol._kernels import numba_impl, numpy_impl


def cases(rng):
    f = np.arange(215e9, 580e9, 25e6)
    n = f.size
    theta = 2 * np.pi * f * 0.15 / 299792458.0
    amps = rng.normal(size=(10, n))
    phases = rng.uniform(-np.pi, np.pi, (10, n))
    corr = rng.uniform(-1, 1, 1_000_000)
    grid = rng.normal(size=(601, 361))
    x, y = np.linspace(0, 1, 601), np.linspace(0, 3, 361)
    trig = np.sort(rng.uniform(0, 100, 200_000))
    det = np.sort(rng.uniform(0, 100, 200_000))
    return {
        "etalon": lambda m: m.etalon(f, 3.416, 3.415e-3, 0.9693, -0.6507),
        "cosine_sum": lambda m: m.cosine_sum(theta, amps, phases),
        "histogram_counts": lambda m: m.histogram_counts(corr, 41),
        "trapezoid2d": lambda m: m.trapezoid2d(grid, x, y),
        "count_coincidences": lambda m: m.count_coincidences(trig, det, 5e-10),
    }


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=7)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':<20}{'numpy [ms]':>12}{'numba [ms]':>12}{'speed-up':>10}")
    for name, call in cases(rng).items():
        call(numba_impl)
        t_np = best_of(lambda: call(numpy_impl), args.repeat)
        t_nb = best_of(lambda: call(numba_impl), args.repeat)
        print(f"{name:<20}{1e3 * t_np:>12.3f}{1e3 * t_nb:>12.3f}{t_np / t_nb:>10.2f}")


if __name__ == "__main__":
    main()
