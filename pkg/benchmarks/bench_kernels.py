"""Time the compiled and numpy kernels on the same inputs.

Usage: python benchmarks/bench_kernels.py [--n 10000] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from gapkit import kernels
from gapkit.oracle import BathModeSet, default_quadratic_form, sample_boltzmann
from gapkit.units import PhysicalContext


def cases(n):
    rng = np.random.default_rng(0)
    x = rng.normal(size=n)
    x -= x.mean()
    modes = BathModeSet(np.array([100.0, 237.0, 415.0]), np.array([0.5, 0.2, 0.1]))
    ctx = PhysicalContext(300.0)
    s = sample_boltzmann(modes, ctx, 4096, seed=1)
    lin, quad = default_quadratic_form(modes, ctx).coefficients(modes)
    w = modes.angular
    times = 4.0 * np.arange(401)
    return {
        "two_time(K=400)": lambda b: kernels.two_time(x, 400, backend=b),
        "three_time(100x100)": lambda b: kernels.three_time(x, 100, 100, backend=b),
        "mc_accumulate(4096x401, linear)": lambda b: kernels.mc_accumulate(s.q0, s.p0, w, lin, None, times, backend=b),
        "mc_accumulate(4096x401, quadratic)": lambda b: kernels.mc_accumulate(s.q0, s.p0, w, lin, quad, times, backend=b),
        "mc_accumulate3(4096, 20x20)": lambda b: kernels.mc_accumulate3(s.q0, s.p0, w, lin, quad, 4.0, 20, 20, backend=b),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10_000, help="trajectory length")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    backends = sorted(kernels.available_backends())
    print(f"active backend: {kernels.BACKEND}; timing {', '.join(backends)} (best of {args.repeat})")
    print(f"{'kernel':38s}" + "".join(f"{b:>12s}" for b in backends) + "   speedup")
    for name, fn in cases(args.n).items():
        best = {b: min(timeit.repeat(lambda: fn(b), number=1, repeat=args.repeat)) for b in backends}
        row = f"{name:38s}" + "".join(f"{best[b] * 1e3:10.2f}ms" for b in backends)
        if "cython" in best:
            row += f"   {best['python'] / best['cython']:6.2f}x"
        print(row)


if __name__ == "__main__":
    main()
