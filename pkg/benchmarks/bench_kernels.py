"""Time the numba kernels against their pure-numpy twins.

    python3 benchmarks/bench_kernels.py [--sizes 10,14,18] [--repeat 5]

Numba timings exclude the first (compiling) call.  The last column is the
numpy/numba ratio; values above 1 mean numba is faster.
"""
import argparse
import math
import timeit

import numpy as np

from qaequad.kernels import numba_impl, numpy_impl


def cases(n, rng):
    size = 1 << n
    real = rng.normal(size=size)
    state = (rng.normal(size=size) + 1j * rng.normal(size=size)) / math.sqrt(2 * size)
    cmask = (1 << (n - 1)) - 2  # many controls, target 0
    th = np.linspace(0, math.pi / 2, size)
    ks = np.arange(5, dtype=np.int64)
    ns = np.full(5, 256.0)
    ms = np.array([77.0, 140.0, 12.0, 200.5, 99.0])
    return {
        "subset_mobius": (lambda m: m.subset_mobius(real.copy())),
        "walsh_hadamard": (lambda m: m.walsh_hadamard(real.copy())),
        "apply_ry": (lambda m: m.apply_ry(state.copy(), 0, 0, 0.3)),
        "apply_ry_ctrl": (lambda m: m.apply_ry(state.copy(), 0, cmask, 0.3)),
        "apply_h": (lambda m: m.apply_h(state.copy(), n // 2)),
        "prob_bit_one": (lambda m: m.prob_bit_one(state, n - 1)),
        "loglik_grid": (lambda m: m.loglik_grid(th, ks, ns, ms, 1e-12)),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="8,12,16,20")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if numba_impl is None:
        raise SystemExit("numba is not installed; nothing to compare")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<16}{'n':>4}{'numpy [ms]':>14}{'numba [ms]':>14}{'speed-up':>10}")
    for n in (int(s) for s in args.sizes.split(",")):
        for name, fn in cases(n, rng).items():
            fn(numba_impl)  # compile
            number = max(1, 2 ** max(0, 16 - n))
            t_np = min(timeit.repeat(lambda: fn(numpy_impl), number=number, repeat=args.repeat)) / number
            t_nb = min(timeit.repeat(lambda: fn(numba_impl), number=number, repeat=args.repeat)) / number
            print(f"{name:<16}{n:>4}{t_np * 1e3:>14.4f}{t_nb * 1e3:>14.4f}{t_np / t_nb:>10.2f}")


if __name__ == "__main__":
    main()
