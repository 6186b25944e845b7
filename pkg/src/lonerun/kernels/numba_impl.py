"""Numba JIT implementations of the hot kernels.

Loop-level twins of :mod:`lonerun.kernels.numpy_impl`; see that module for
the result conventions.  Everything runs in int64: the engine's input bound
(speeds <= 2**30, floor denominator <= 2**31) keeps all products below 2**62.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def ml_scan(v, floor_num, floor_den):
    n = v.shape[0]
    ba = np.int64(0)
    bd = np.int64(1)
    bm = np.int64(0)
    bi = np.int64(-1)
    bj = np.int64(-1)
    for i in range(n - 1):
        for j in range(i + 1, n):
            D = v[i] + v[j]
            for m in range(1, D // 2 + 1):
                a = D  # running min; any distance is < D
                for k in range(n):
                    r = (m * v[k]) % D
                    d = r if r <= D - r else D - r
                    if d < a:
                        a = d
                        if a == 0:
                            break
                if floor_num > 0 and a * floor_den >= floor_num * D:
                    return np.int64(1), a, D, np.int64(m), np.int64(i), np.int64(j)
                if a * bd > ba * D:
                    ba, bd, bm, bi, bj = a, D, np.int64(m), np.int64(i), np.int64(j)
                elif a * bd == ba * D:
                    # tie: keep the smallest (D, m, i, j)
                    if D < bd or (D == bd and (m < bm or (m == bm and (i < bi or (i == bi and j < bj))))):
                        ba, bd, bm, bi, bj = a, D, np.int64(m), np.int64(i), np.int64(j)
    return np.int64(0), ba, bd, bm, bi, bj


@njit(cache=True)
def oracle_scan(v):
    n = v.shape[0]
    n_den = n + (n * (n - 1))  # 2*v_i terms plus sum and diff per pair
    denoms = np.empty(n_den, dtype=np.int64)
    idx = 0
    for i in range(n):
        denoms[idx] = 2 * v[i]
        idx += 1
    for i in range(n - 1):
        for j in range(i + 1, n):
            denoms[idx] = v[i] + v[j]
            idx += 1
            denoms[idx] = v[j] - v[i]
            idx += 1
    ba = np.int64(0)
    bb = np.int64(1)
    bm = np.int64(0)
    for b_ix in range(idx):
        B = denoms[b_ix]
        if B == 0:
            continue
        for m in range(B):
            a = B
            for k in range(n):
                r = (m * v[k]) % B
                d = r if r <= B - r else B - r
                if d < a:
                    a = d
                    if a == 0:
                        break
            if a * bb > ba * B:
                ba, bb, bm = a, B, np.int64(m)
    return ba, bb, bm


@njit(cache=True)
def ml_batch(tuples, floor_num, floor_den):
    rows = tuples.shape[0]
    out = np.empty((rows, 6), dtype=np.int64)
    for r in range(rows):
        mode, a, D, m, i, j = ml_scan(tuples[r], floor_num, floor_den)
        out[r, 0] = mode
        out[r, 1] = a
        out[r, 2] = D
        out[r, 3] = m
        out[r, 4] = i
        out[r, 5] = j
    return out


@njit(cache=True)
def oracle_batch(tuples):
    rows = tuples.shape[0]
    out = np.empty((rows, 3), dtype=np.int64)
    for r in range(rows):
        a, B, m = oracle_scan(tuples[r])
        out[r, 0] = a
        out[r, 1] = B
        out[r, 2] = m
    return out
