"""Benchmark the numba kernels against the pure-numpy fallback.

Times the two hot scan kernels on workloads shaped like the real callers:
the coarse prox grid (1e4 points) and the dense oracle scan (~1.2e6
points). Run as `python benchmarks/bench_kernels.py`.
"""

import time

import numpy as np

from foothill import kernels_numpy

try:
    from foothill import kernels_numba
except ImportError:
    kernels_numba = None


def time_call(fn, repeats, *args):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench(name, fn_np, fn_nb, args, repeats):
    t_np = time_call(fn_np, repeats, *args)
    if fn_nb is None:
        print(f"{name:<34} numpy {t_np * 1e3:8.3f} ms   numba       n/a")
        return
    fn_nb(*args)  # compile outside the timer
    t_nb = time_call(fn_nb, repeats, *args)
    print(f"{name:<34} numpy {t_np * 1e3:8.3f} ms   numba {t_nb * 1e3:8.3f} ms"
          f"   speedup {t_np / t_nb:5.2f}x")


def check_agreement():
    rng = np.random.default_rng(0)
    if kernels_numba is None:
        print("numba unavailable; agreement check skipped")
        return
    worst = 0.0
    for _ in range(20):
        z = rng.uniform(-5, 5)
        lam = rng.uniform(0, 2)
        a = 10 ** rng.uniform(-1, 2)
        b = 10 ** rng.uniform(-2, 2)
        g1 = kernels_numpy.objective_grid(z, lam, a, b, -6.0, 6.0, 10_001)
        g2 = kernels_numba.objective_grid(z, lam, a, b, -6.0, 6.0, 10_001)
        worst = max(worst, float(np.max(np.abs(g1 - g2))))
    print(f"max |numpy - numba| over 20 random grids: {worst:.3e}")


def main():
    coarse = (2.0, 0.5, 16.0, 0.125, -1.0, 3.0, 10_000)
    dense = (2.0, 0.5, 1.0, 1000.0, -3.0, 3.0, 600_001)

    print("kernel benchmark (best of N)")
    print("-" * 78)
    bench("objective_grid, 1e4 points", kernels_numpy.objective_grid,
          getattr(kernels_numba, "objective_grid", None), coarse, repeats=50)
    bench("objective_argmin, 6e5 points", kernels_numpy.objective_argmin,
          getattr(kernels_numba, "objective_argmin", None), dense, repeats=5)
    print("-" * 78)
    check_agreement()


if __name__ == "__main__":
    main()
