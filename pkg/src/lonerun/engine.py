"""Exact maximum-loneliness computation for sets of integer speeds.

The loneliness of speeds v_1..v_n at time t is the smallest circle distance
of any t*v_i from the start point; its maximum over t is computed exactly by
enumerating the finite candidate-time set m/(v_i+v_j).  An independent
breakpoint-superset oracle and a shifted-start-point generalization provide
cross-checks for every result.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm
from typing import Iterator, Optional, Sequence

import numpy as np

from . import kernels
from .rational import ONE_HALF, Rational, WidthError, circle_norm, reduce

# Speeds are capped so every intermediate product in the int64 kernels stays
# below 2**62: m <= D/2 <= MAX_SPEED and m*v <= 2**60.
MAX_SPEED = 1 << 30

EXACT = "exact"
AT_LEAST_FLOOR = "floor"


@dataclass(frozen=True)
class SpeedSet:
    """Normalized primitive tuple of distinct positive integer speeds.

    ``speeds`` is strictly increasing with overall gcd 1; ``scale`` is the
    gcd divided out during normalization (loneliness is scale-invariant).
    """

    speeds: tuple[int, ...]
    scale: int = 1

    def __post_init__(self):
        if not self.speeds:
            raise ValueError("speed set must be nonempty")
        g = 0
        prev = 0
        for v in self.speeds:
            if v <= prev:
                raise ValueError("speeds must be strictly increasing positive integers")
            if v > MAX_SPEED:
                raise WidthError(f"speed {v} exceeds the {MAX_SPEED} input bound")
            g = gcd(g, v)
            prev = v
        if g != 1:
            raise ValueError(f"speeds must have gcd 1 after normalization (got gcd {g})")
        if self.scale < 1:
            raise ValueError("scale must be a positive integer")

    @property
    def n(self) -> int:
        return len(self.speeds)


@dataclass(frozen=True)
class LonelinessResult:
    """Exact maximum loneliness, or an at-least-floor early-exit marker.

    In "exact" mode ``value`` is the maximum and re-evaluating the objective
    at ``witness_time`` reproduces it.  In "floor" mode ``value`` is the
    floor that was reached and the witness attains at least that much.
    ``witness_pair`` is a 0-based (i, j) index pair, or None for n = 1.
    """

    value: Rational
    witness_time: Rational
    witness_pair: Optional[tuple[int, int]]
    mode: str = EXACT

    def to_json_dict(self, speed_set: SpeedSet) -> dict:
        return {
            "speeds": list(speed_set.speeds),
            "scale": speed_set.scale,
            "ml": str(self.value),
            "mode": self.mode,
            "witness": {
                "t": str(self.witness_time),
                "pair": list(self.witness_pair) if self.witness_pair is not None else None,
            },
        }


def normalize(raw_speeds: Sequence[int]) -> SpeedSet:
    """Sort, divide out the gcd, and record it as the scale.

    The loneliness of the result equals the loneliness of the input.  Empty
    input, non-positive speeds, and duplicates are caller errors here; the
    CLI dedupes (with a warning) before calling.
    """
    if not raw_speeds:
        raise ValueError("speed set must be nonempty")
    for v in raw_speeds:
        if not isinstance(v, int) or v < 1:
            raise ValueError(f"speeds must be positive integers (got {v!r})")
        if v > MAX_SPEED:
            raise WidthError(f"speed {v} exceeds the {MAX_SPEED} input bound")
    ordered = sorted(raw_speeds)
    for a, b in zip(ordered, ordered[1:]):
        if a == b:
            raise ValueError(f"duplicate speed {a}")
    g = 0
    for v in ordered:
        g = gcd(g, v)
    return SpeedSet(tuple(v // g for v in ordered), g)


def min_circle_distance(speeds: Sequence[int], t: Rational) -> Rational:
    """The objective min_i ||t * v_i||, evaluated exactly."""
    return min((circle_norm(t * v) for v in speeds), default=ONE_HALF)


def candidate_times(s: SpeedSet) -> Iterator[tuple[Rational, tuple[int, int]]]:
    """All times m/(v_i+v_j), i < j, 1 <= m <= (v_i+v_j)//2, with their pair.

    Every local maximum of the objective occurs at such a time, and by the
    period-1 and t -> 1-t symmetries the half-range of m already contains a
    global maximizer.
    """
    if s.n < 2:
        raise ValueError("candidate times need at least two speeds")
    v = s.speeds
    for i in range(s.n - 1):
        for j in range(i + 1, s.n):
            d = v[i] + v[j]
            for m in range(1, d // 2 + 1):
                yield reduce(m, d), (i, j)


def _kernel_result(s: SpeedSet, floor: Optional[Rational]) -> LonelinessResult:
    arr = np.asarray(s.speeds, dtype=np.int64)
    if floor is None:
        fn, fd = 0, 1
    else:
        fn, fd = floor.num, floor.den
    mode, a, d, m, i, j = (int(x) for x in kernels.ml_scan(arr, fn, fd))
    if mode == 1:
        return LonelinessResult(floor, reduce(m, d), (i, j), AT_LEAST_FLOOR)
    return LonelinessResult(reduce(a, d), reduce(m, d), (i, j), EXACT)


def compute_ml(s: SpeedSet) -> LonelinessResult:
    """Exact maximum loneliness with a deterministic witness.

    Witness ties are broken by the smallest pair-sum denominator, then the
    smallest m, then the lexicographically smallest pair.
    """
    if s.n == 1:
        v = s.speeds[0]
        return LonelinessResult(ONE_HALF, reduce(1, 2 * v), None, EXACT)
    return _kernel_result(s, None)


def compute_ml_with_floor(s: SpeedSet, floor: Rational) -> LonelinessResult:
    """Early-exit variant: stop as soon as any candidate reaches ``floor``.

    Returns mode "floor" (value = floor, witness = the first candidate in
    scan order achieving it) when the maximum is at least the floor, and the
    exact result (necessarily below the floor) otherwise.
    """
    if not Rational(0) < floor <= ONE_HALF:
        raise ValueError("floor must satisfy 0 < floor <= 1/2")
    if floor.den > (1 << 31):
        raise WidthError("floor denominator exceeds the width budget")
    if s.n == 1:
        v = s.speeds[0]
        return LonelinessResult(floor, reduce(1, 2 * v), None, AT_LEAST_FLOOR)
    return _kernel_result(s, floor)


def oracle_ml(s: SpeedSet) -> LonelinessResult:
    """Independent check: maximize over the full breakpoint superset.

    Uses every kink and crossing denominator (2*v_i, v_i+v_j, v_j-v_i) over
    a whole period, with no half-range shortcut and no candidate-set pruning,
    so it does not depend on the properties compute_ml exploits.
    """
    if s.n == 1:
        v = s.speeds[0]
        return LonelinessResult(ONE_HALF, reduce(1, 2 * v), None, EXACT)
    arr = np.asarray(s.speeds, dtype=np.int64)
    a, b, m = (int(x) for x in kernels.oracle_scan(arr))
    return LonelinessResult(reduce(a, b), reduce(m, b), None, EXACT)


@dataclass(frozen=True)
class ShiftedInstance:
    """Distinct positive integer speeds with a rational start offset each.

    Speeds are normalized by their gcd (offsets unchanged: substituting
    t -> t/g shows the maximum is invariant).  ``q`` is the common offset
    denominator.
    """

    speeds: tuple[int, ...]
    offsets: tuple[Rational, ...]
    q: int

    @classmethod
    def create(cls, speeds: Sequence[int], offsets: Sequence[Rational]) -> "ShiftedInstance":
        if not speeds:
            raise ValueError("speed set must be nonempty")
        if len(offsets) != len(speeds):
            raise ValueError("need exactly one offset per speed")
        for v in speeds:
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"speeds must be positive integers (got {v!r})")
            if v > MAX_SPEED:
                raise WidthError(f"speed {v} exceeds the {MAX_SPEED} input bound")
        for o in offsets:
            if not Rational(0) <= o < Rational(1):
                raise ValueError("offsets must lie in [0, 1)")
        order = sorted(range(len(speeds)), key=lambda k: speeds[k])
        v_sorted = tuple(speeds[k] for k in order)
        for a, b in zip(v_sorted, v_sorted[1:]):
            if a == b:
                raise ValueError(f"duplicate speed {a}")
        g = 0
        for v in v_sorted:
            g = gcd(g, v)
        v_sorted = tuple(v // g for v in v_sorted)
        offs = tuple(offsets[k] for k in order)
        q = 1
        for o in offs:
            q = lcm(q, o.den)
        if q * 2 * v_sorted[-1] > (1 << 62):
            raise WidthError("offset denominators exceed the width budget")
        return cls(v_sorted, offs, q)

    @property
    def n(self) -> int:
        return len(self.speeds)


def shifted_objective(inst: ShiftedInstance, t: Rational) -> Rational:
    """min_i ||offset_i + t * v_i||, evaluated exactly."""
    return min(circle_norm(o + t * v) for v, o in zip(inst.speeds, inst.offsets))


def _shifted_best(inst: ShiftedInstance, candidates) -> LonelinessResult:
    """Exact max over (t_num, t_den, D, m, i, j) candidates, all offsets folded in.

    ``candidates`` yields tuples whose time is t_num/t_den in [0, 1); the
    tie-break mirrors the unshifted engine: smallest pair-sum denominator D,
    then m, then pair.
    """
    q = inst.q
    v = inst.speeds
    a = [o.num * (q // o.den) for o in inst.offsets]  # offsets over common den q
    best = None  # (val_num, val_den, D, m, i, j, t_num, t_den)
    for t_num, t_den, d_key, m_key, i, j in candidates:
        val_num = None
        x = t_den // q
        for k in range(inst.n):
            r = (a[k] * x + t_num * v[k]) % t_den
            dist = min(r, t_den - r)
            if val_num is None or dist < val_num:
                val_num = dist
        if best is None:
            better = True
        else:
            lhs = val_num * best[1]
            rhs = best[0] * t_den
            better = lhs > rhs or (lhs == rhs and (d_key, m_key, i, j) < best[2:6])
        if better:
            best = (val_num, t_den, d_key, m_key, i, j, t_num, t_den)
    val = reduce(best[0], best[1])
    t = reduce(best[6], best[7])
    pair = None if inst.n == 1 and best[4] == best[5] else (best[4], best[5])
    return LonelinessResult(val, t, pair, EXACT)


def _shifted_pair_candidates(inst: ShiftedInstance):
    """Times where runners i and j sit symmetrically: t = (m - s_i - s_j)/(v_i + v_j).

    Includes i = j (a lone runner peaking at the antipode), which the
    unshifted candidate set does not need; with offsets it is a conservative
    superset guarded by the shifted oracle.
    """
    q = inst.q
    v = inst.speeds
    a = [o.num * (q // o.den) for o in inst.offsets]
    for i in range(inst.n):
        for j in range(i, inst.n):
            d = v[i] + v[j]
            s_num = a[i] + a[j]  # over q
            td = q * d
            m0 = -((-s_num) // q)  # ceil(s_num / q): smallest m with t >= 0
            for m in range(m0, m0 + d):
                yield m * q - s_num, td, d, m, i, j


def shifted_ml(inst: ShiftedInstance) -> LonelinessResult:
    """Exact maximum of min_i ||offset_i + t*v_i|| over t in [0, 1)."""
    return _shifted_best(inst, _shifted_pair_candidates(inst))


def _shifted_breakpoints(inst: ShiftedInstance):
    q = inst.q
    v = inst.speeds
    a = [o.num * (q // o.den) for o in inst.offsets]
    # kinks of runner k: offset_k + t*v_k in (1/2)Z, i.e. t = (m - 2*s_k)/(2*v_k)
    for k in range(inst.n):
        d = 2 * v[k]
        td = q * d
        m0 = -((-2 * a[k]) // q)
        for m in range(m0, m0 + d):
            yield m * q - 2 * a[k], td, d, m, k, k
    for i in range(inst.n - 1):
        for j in range(i + 1, inst.n):
            # crossings with opposite motion: t = (m - s_i - s_j)/(v_i + v_j)
            d = v[i] + v[j]
            td = q * d
            s_num = a[i] + a[j]
            m0 = -((-s_num) // q)
            for m in range(m0, m0 + d):
                yield m * q - s_num, td, d, m, i, j
            # crossings with same-side motion: t = (m + s_i - s_j)/(v_j - v_i)
            d = v[j] - v[i]
            td = q * d
            s_num = a[j] - a[i]
            m0 = -((-s_num) // q)
            for m in range(m0, m0 + d):
                yield m * q - s_num, td, d, m, i, j


def shifted_oracle(inst: ShiftedInstance) -> LonelinessResult:
    """Breakpoint-superset analogue of oracle_ml with offsets folded in."""
    return _shifted_best(inst, _shifted_breakpoints(inst))


def prejump_invariant(v1: int, v2: int, g: int, t: Rational, h: int) -> bool:
    """Whether stepping time by h/g leaves min(||t*v1||, ||t*v2||) unchanged.

    Requires g >= 1 dividing both speeds, in which case the step moves each
    runner by an integer number of laps and the result is always True.
    """
    if g < 1:
        raise ValueError("g must be a positive integer")
    if v1 % g or v2 % g:
        raise ValueError(f"{g} does not divide both speeds {v1}, {v2}")
    before = min(circle_norm(t * v1), circle_norm(t * v2))
    t2 = t + Rational(h, g)
    after = min(circle_norm(t2 * v1), circle_norm(t2 * v2))
    return before == after
