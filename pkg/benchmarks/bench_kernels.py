"""Time the compiled kernels against the pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.  Prints one
line per kernel with the best wall time of each backend and the speed-up.
"""
import argparse
import timeit

import numpy as np

from cc4 import _kernels_py as py
from cc4.dipole import newton_seeds

try:
    from cc4 import _kernels as cy
except ImportError:
    cy = None


def cases(rng):
    masses = np.array([1.0, -1.0, 2.0, -2.0])
    pos = rng.normal(size=(4, 2))
    state = np.concatenate([pos.ravel(), rng.normal(size=8)])
    seeds = newton_seeds()
    return {
        "accelerations": lambda k: k.accelerations(masses, pos),
        "nbody_rhs": lambda k: k.nbody_rhs(state, masses),
        "dipole_field": lambda k: k.dipole_field(0.3, 0.7),
        "dipole_jacobian_det": lambda k: k.dipole_jacobian_det(0.3, 0.7),
        "dipole_newton (576 seeds)": lambda k: k.dipole_newton(seeds, 0.4, -0.2, 100, 40, 1e-12, 1e-12),
    }


def best(fn, backend, repeat):
    timer = timeit.Timer(lambda: fn(backend))
    number, _ = timer.autorange()
    return min(timer.repeat(repeat, number)) / number


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if cy is None:
        print("compiled extension not built; run `python3 setup.py build_ext --inplace`")
    rng = np.random.default_rng(0)
    print(f"{'kernel':28s} {'python':>12s} {'cython':>12s} {'speed-up':>9s}")
    for name, fn in cases(rng).items():
        t_py = best(fn, py, args.repeat)
        if cy is None:
            print(f"{name:28s} {t_py * 1e6:10.2f}us {'-':>12s} {'-':>9s}")
            continue
        t_cy = best(fn, cy, args.repeat)
        print(f"{name:28s} {t_py * 1e6:10.2f}us {t_cy * 1e6:10.2f}us {t_py / t_cy:8.1f}x")


if __name__ == "__main__":
    main()
