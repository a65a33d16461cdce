"""Time the compiled and pure-Python frame integrators on the same problems.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5] [--dims 3 5 8] [--steps 2000 20000]
"""
import argparse
import timeit

import numpy as np

from lcurve import _kernels_py
from lcurve.frenet import FrameKind, default_initial_frame, expected_gram, generator, n_curvatures

try:
    from lcurve import _kernels
except ImportError:
    _kernels = None


def problem(n, steps, kind, seed=0):
    rng = np.random.default_rng(seed)
    sigs = None
    if kind is FrameKind.SPACELIKE:
        sigs = [1] * (n - 1)
        sigs[rng.integers(0, n - 1)] = -1
    s = np.linspace(0.0, 2.0, 2 * steps + 1)
    amp = rng.uniform(0.4, 1.5, (n_curvatures(n, kind), 1))
    freq = rng.uniform(0.2, 1.5, (n_curvatures(n, kind), 1))
    kappa = amp * (1.0 + 0.3 * np.sin(freq * s))
    M = np.ascontiguousarray(generator(kappa, n, kind, sigs))
    Y0 = np.ascontiguousarray(np.vstack([default_initial_frame(n, kind, sigs), np.zeros((1, n))]))
    G = np.ascontiguousarray(expected_gram(n, kind, sigs))
    return M, Y0, 2.0 / steps, G, kind is FrameKind.NULL, True


def best_of(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--dims", type=int, nargs="+", default=[3, 5, 8])
    ap.add_argument("--steps", type=int, nargs="+", default=[2000, 20000])
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled kernel not built; only the Python timings are shown")
    print(f"{'kind':<10}{'n':>3}{'steps':>8}{'python [s]':>13}{'cython [s]':>13}{'speedup':>9}")
    for kind in (FrameKind.SPACELIKE, FrameKind.NULL):
        for n in args.dims:
            for steps in args.steps:
                prob = problem(n, steps, kind)
                t_py = best_of(_kernels_py.integrate_frames, prob, args.repeat)
                if _kernels is None:
                    print(f"{kind.value:<10}{n:>3}{steps:>8}{t_py:>13.4f}{'-':>13}{'-':>9}")
                    continue
                t_cy = best_of(_kernels.integrate_frames, prob, args.repeat)
                print(f"{kind.value:<10}{n:>3}{steps:>8}{t_py:>13.4f}{t_cy:>13.4f}{t_py / t_cy:>8.1f}x")


if __name__ == "__main__":
    main()
