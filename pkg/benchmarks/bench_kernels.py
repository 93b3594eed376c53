"""Compare the compiled and pure-Python tridiagonal kernels.

    python3 benchmarks/bench_kernels.py [--points 2001] [--repeat 5]

Times the full eigenpair solve used by the flux eigensolver (three lowest
levels: bisection plus inverse iteration) on the default double-well grid,
and checks both backends agree.
"""
import argparse
import time

import numpy as np

from squidsim.flux_spectrum import FluxGrid, _tridiagonal
from squidsim.kernels import get_backend


def solve(mod, d, e, k):
    lam = mod.bisect_lowest(d, e, k, 4e-16)
    vecs = [mod.inverse_iteration(d, e, float(x), 4) for x in lam]
    return np.asarray(lam), vecs


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--points", type=int, default=2001)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--levels", type=int, default=3)
    args = p.parse_args()

    grid = FluxGrid(num_points=args.points)
    d, e = _tridiagonal(grid, 0.0, 1.9, 0.78)
    results = {}
    for name in ("compiled", "python"):
        try:
            mod = get_backend(name)
        except ImportError:
            print(f"{name:9s} unavailable")
            continue
        t, out = best_of(lambda: solve(mod, d, e, args.levels), args.repeat)
        results[name] = (t, out)
        print(f"{name:9s} {t * 1e3:10.2f} ms  (N={args.points}, k={args.levels})")
    if len(results) == 2:
        (tc, (lc, _)), (tp, (lp, _)) = results["compiled"], results["python"]
        print(f"speedup   {tp / tc:10.1f}x   max |dlambda| = {np.max(np.abs(lc - lp)):.2e}")


if __name__ == "__main__":
    main()
