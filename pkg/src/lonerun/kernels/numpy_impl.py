"""Vectorized numpy fallback for the hot kernels.

Must be candidate-for-candidate equivalent to the numba backend, including
witness tie-breaking, so that scan outputs are byte-identical regardless of
backend.  All inputs are bounded by the engine (speeds <= 2**30, floor
denominator <= 2**31), which keeps every int64 product below 2**62.
"""

from __future__ import annotations

import numpy as np


def ml_scan(speeds, floor_num, floor_den):
    """Exact max-min circle distance over candidate times m/(v_i+v_j).

    Returns ``(mode, a, D, m, i, j)``: the maximum is ``a/D`` attained at
    ``t = m/D`` by pair ``(i, j)``.  With ``floor_num > 0`` the scan stops at
    the first candidate (pair-lexicographic, then ascending m) whose value
    reaches ``floor_num/floor_den`` and reports mode 1; otherwise mode 0 and
    the witness with the smallest (D, m, i, j) among maximizers.
    """
    v = np.asarray(speeds, dtype=np.int64)
    n = int(v.shape[0])
    ba, bd, bm, bi, bj = 0, 1, 0, -1, -1
    for i in range(n - 1):
        for j in range(i + 1, n):
            D = int(v[i] + v[j])
            ms = np.arange(1, D // 2 + 1, dtype=np.int64)
            r = (ms[:, None] * v[None, :]) % D
            np.minimum(r, D - r, out=r)
            mins = r.min(axis=1)
            if floor_num > 0:
                hits = mins * floor_den >= floor_num * D
                if hits.any():
                    k = int(np.argmax(hits))
                    return 1, int(mins[k]), D, k + 1, i, j
            k = int(np.argmax(mins))  # first max <=> smallest m in this pair
            a, m = int(mins[k]), k + 1
            if a * bd > ba * D or (a * bd == ba * D and (D, m, i, j) < (bd, bm, bi, bj)):
                ba, bd, bm, bi, bj = a, D, m, i, j
    return 0, ba, bd, bm, bi, bj


def oracle_scan(speeds):
    """Exact maximum over the full breakpoint superset of the objective.

    Candidate times are m/B for every B in {2*v_i} u {v_i+v_j} u {v_j-v_i}
    and every m in 0..B-1 (one full period, no symmetry shortcuts).  Returns
    ``(a, B, m)`` with maximum a/B at t = m/B (first maximizer encountered).
    """
    v = np.asarray(speeds, dtype=np.int64)
    n = int(v.shape[0])
    denoms = [2 * int(v[i]) for i in range(n)]
    for i in range(n - 1):
        for j in range(i + 1, n):
            denoms.append(int(v[i] + v[j]))
            denoms.append(int(v[j] - v[i]))
    ba, bb, bm = 0, 1, 0
    for B in denoms:
        if B == 0:
            continue
        ms = np.arange(B, dtype=np.int64)
        r = (ms[:, None] * v[None, :]) % B
        np.minimum(r, B - r, out=r)
        mins = r.min(axis=1)
        k = int(np.argmax(mins))
        a = int(mins[k])
        if a * bb > ba * B:
            ba, bb, bm = a, B, k
    return ba, bb, bm


def ml_batch(tuples, floor_num, floor_den):
    """Row-wise ml_scan; returns an int64 array of shape (rows, 6)."""
    arr = np.asarray(tuples, dtype=np.int64)
    out = np.empty((arr.shape[0], 6), dtype=np.int64)
    for r in range(arr.shape[0]):
        out[r] = ml_scan(arr[r], floor_num, floor_den)
    return out


def oracle_batch(tuples):
    """Row-wise oracle_scan; returns an int64 array of shape (rows, 3)."""
    arr = np.asarray(tuples, dtype=np.int64)
    out = np.empty((arr.shape[0], 3), dtype=np.int64)
    for r in range(arr.shape[0]):
        out[r] = oracle_scan(arr[r])
    return out
