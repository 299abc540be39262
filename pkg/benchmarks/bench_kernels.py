#!/usr/bin/env python3
"""
Time the compiled kernels against their numpy fallbacks.

Both flavours are imported explicitly, so the STARKFAM_PURE_NUMPY flag does
not matter here. Compilation is triggered once before timing starts, and
every pair of results is compared before any number is printed.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from starkfam import kernels
from starkfam.gring import unit_group
from starkfam.lfunctions import _EM_SHIFT, _em_coefficients


def best_of(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def cases(rng):
    G = unit_group(225)  # order 120
    N = 3**4
    a = rng.integers(0, N, G.order).astype(np.int64)
    b = rng.integers(0, N, G.order).astype(np.int64)
    yield "group ring product |G|=120 mod 81", kernels.gr_mul_mod_numba, kernels.gr_mul_mod_numpy, (a, b, G.table, N)

    A = rng.integers(0, N, (240, 120)).astype(np.int64) * 3 % N
    yield "Howell form 240x120 mod 81", kernels.howell_form_numba, kernels.howell_form_numpy, (A, 3, N)

    H = kernels.howell_form_numpy(A, 3, N)
    x = (rng.integers(0, N, 120) * 9 % N).astype(np.int64)
    yield "Howell reduction, 120 columns", kernels.howell_reduce_numba, kernels.howell_reduce_numpy, (H, x, N)

    bern = _em_coefficients()
    yield "Hurwitz zeta s=2.5", kernels.hurwitz_em_numba, kernels.hurwitz_em_numpy, (2.5, 0.3, _EM_SHIFT, bern, False)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)

    print(f"{'kernel':<36}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}")
    for name, fast, slow, fargs in cases(rng):
        r_fast = fast(*fargs)  # warm-up compiles
        r_slow = slow(*fargs)
        if not np.allclose(np.asarray(r_fast), np.asarray(r_slow), rtol=1e-12, atol=0):
            raise SystemExit(f"{name}: numba and numpy results differ")
        t_fast = best_of(fast, fargs, args.repeat)
        t_slow = best_of(slow, fargs, args.repeat)
        print(f"{name:<36}{t_fast * 1e3:>12.3f}{t_slow * 1e3:>12.3f}{t_slow / t_fast:>9.1f}x")


if __name__ == "__main__":
    main()
