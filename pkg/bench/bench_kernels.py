#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the exact-ML scan (with and without an early-exit floor) and the
breakpoint oracle over all primitive 4-tuples up to --v-max, then prints a
side-by-side table.  Both backends are imported directly, so the
LONERUN_NUMBA flag is irrelevant here.
"""

import argparse
import time

import numpy as np

from lonerun.kernels import numpy_impl
from lonerun.scan import enumerate_primitive

try:
    from lonerun.kernels import numba_impl
except ImportError:
    numba_impl = None


def time_call(fn, *args, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--v-max", type=int, default=30, help="max speed (default 30)")
    parser.add_argument("--n", type=int, default=4, help="tuple size (default 4)")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    tuples = np.asarray(list(enumerate_primitive(args.n, args.v_max)), dtype=np.int64)
    print(f"{tuples.shape[0]} primitive {args.n}-tuples with max speed <= {args.v_max}\n")

    cases = [
        ("ml_batch (exact)", "ml_batch", (tuples, 0, 1)),
        ("ml_batch (floor 1/4)", "ml_batch", (tuples, 1, 4)),
        ("oracle_batch", "oracle_batch", (tuples,)),
    ]

    if numba_impl is not None:
        # compile outside the timed region
        small = tuples[:1]
        numba_impl.ml_batch(small, 0, 1)
        numba_impl.ml_batch(small, 1, 4)
        numba_impl.oracle_batch(small)

    print(f"{'kernel':<22} {'numpy':>10} {'numba':>10} {'speedup':>9}")
    for label, name, call_args in cases:
        t_np = time_call(getattr(numpy_impl, name), *call_args, repeat=args.repeat)
        if numba_impl is None:
            print(f"{label:<22} {t_np:>9.3f}s {'n/a':>10} {'n/a':>9}")
            continue
        t_nb = time_call(getattr(numba_impl, name), *call_args, repeat=args.repeat)
        out_np = getattr(numpy_impl, name)(*call_args)
        out_nb = getattr(numba_impl, name)(*call_args)
        assert np.array_equal(out_np, out_nb), f"backend mismatch in {name}"
        print(f"{label:<22} {t_np:>9.3f}s {t_nb:>9.3f}s {t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
