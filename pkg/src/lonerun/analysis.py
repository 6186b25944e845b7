"""Verification campaigns for the structural results on four-runner sets.

Covers the counterexample family ML(8, 4s+3, 4s+11, 4s+19) = (2s+7)/(8s+30),
the very-fast-runner threshold calculators, the common-factor scans (three
speeds sharing a factor; a pair sharing a factor above 3; a pair sharing
exactly 3, where only the (1,2,3,12k) family dips below 1/4), and seeded
trials of the shifted-start lower bound for three runners.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import ceil, gcd

import numpy as np

from . import kernels
from .engine import MAX_SPEED, ShiftedInstance, compute_ml, normalize, shifted_ml
from .rational import ONE_HALF, Rational, WidthError, reduce
from .scan import FILTERS, _pair_blocks, _block_tuples

QUARTER = Rational(1, 4)


@dataclass
class FamilyReport:
    """Per-s comparison of computed ML against the family formula."""

    s_lo: int
    s_hi: int
    failures: list = field(default_factory=list)  # (s, expected, got)

    @property
    def all_pass(self) -> bool:
        return not self.failures

    def to_json_dict(self) -> dict:
        return {
            "s_lo": self.s_lo,
            "s_hi": self.s_hi,
            "all_pass": self.all_pass,
            "failures": [
                {"s": s, "expected": str(e), "got": str(g)} for s, e, g in self.failures
            ],
        }


@dataclass
class TheoremScanReport:
    theorem_id: str
    tuples_checked: int
    exceptions_found: list = field(default_factory=list)  # dicts with speeds + ml
    expected_exceptions: str = "none"

    def to_json_dict(self) -> dict:
        return {
            "theorem": self.theorem_id,
            "tuples_checked": self.tuples_checked,
            "exceptions": self.exceptions_found,
            "expected_exceptions": self.expected_exceptions,
        }


def family_tuple(s: int) -> tuple[int, int, int, int]:
    return (8, 4 * s + 3, 4 * s + 11, 4 * s + 19)


def family_value(s: int) -> Rational:
    return reduce(2 * s + 7, 8 * s + 30)


def verify_family(s_lo: int, s_hi: int) -> FamilyReport:
    """Check ML(8, 4s+3, 4s+11, 4s+19) == (2s+7)/(8s+30) for each s in range."""
    if not 0 <= s_lo <= s_hi:
        raise ValueError("need 0 <= s_lo <= s_hi")
    report = FamilyReport(s_lo, s_hi)
    for s in range(s_lo, s_hi + 1):
        expected = family_value(s)
        got = compute_ml(normalize(list(family_tuple(s)))).value
        if got != expected:
            report.failures.append((s, expected, got))
    return report


def lemma3_min_speed(L: Rational, eps: Rational, v_prev: int) -> int:
    """Least v_n with v_n >= ((L - eps)/eps) * v_prev.

    Appending a runner at least that fast to a set whose maximum loneliness
    is L keeps the maximum at or above L - eps.
    """
    if v_prev < 1:
        raise ValueError("v_prev must be a positive integer")
    if not Rational(0) < eps < L:
        raise ValueError("need 0 < eps < L")
    if L > ONE_HALF:
        raise ValueError("L cannot exceed 1/2")
    bound = (L - eps) / eps * v_prev
    return max(1, ceil(bound))


def lemma4_condition(L: Rational, n: int, v_nm2: int, v_nm1: int) -> bool:
    """Whether L - 3*v_nm2/(n*v_nm1) >= 1/n, exactly.

    When it holds with L a bound for the n-2 slowest runners, two faster
    runners at v_{n-1} < v_n still leave a loneliness of at least 1/n.
    """
    if n < 4:
        raise ValueError("n must be at least 4")
    if not 0 < v_nm2 < v_nm1:
        raise ValueError("need 0 < v_nm2 < v_nm1")
    return L - Rational(3 * v_nm2, n * v_nm1) >= Rational(1, n)


def _floor_scan(v_max: int, filter_name: str, floor: Rational, chunk: int = 4096):
    """Yield (speeds, exact_value_or_None) for primitive 4-tuples passing the filter."""
    if v_max > MAX_SPEED:
        raise WidthError(f"v_max {v_max} exceeds the {MAX_SPEED} input bound")
    predicate = FILTERS[filter_name]
    batch = []
    for v1, v2 in _pair_blocks(4, v_max):
        batch.extend(_block_tuples(4, v_max, v1, v2, predicate))
        if len(batch) >= chunk:
            yield from _flush_floor_batch(batch, floor)
            batch = []
    if batch:
        yield from _flush_floor_batch(batch, floor)


def _flush_floor_batch(batch, floor: Rational):
    arr = np.asarray(batch, dtype=np.int64)
    rows = kernels.ml_batch(arr, floor.num, floor.den)
    for speeds, row in zip(batch, rows):
        if int(row[0]) == 1:
            yield speeds, None
        else:
            yield speeds, reduce(int(row[1]), int(row[2]))


def _common_factor_scan(theorem_id: str, v_max: int, filter_name: str,
                        expected: str) -> TheoremScanReport:
    report = TheoremScanReport(theorem_id, 0, expected_exceptions=expected)
    for speeds, value in _floor_scan(v_max, filter_name, QUARTER):
        report.tuples_checked += 1
        if value is not None:
            report.exceptions_found.append({"speeds": list(speeds), "ml": str(value)})
    return report


def verify_theorem1(v_max: int) -> TheoremScanReport:
    """Three speeds sharing a common factor >= 2 force ML >= 1/4; expect no exceptions."""
    return _common_factor_scan("1", v_max, "three-share-ge2", "none")


def verify_theorem3(v_max: int) -> TheoremScanReport:
    """A pair sharing a common factor > 3 forces ML >= 1/4; expect no exceptions."""
    return _common_factor_scan("3", v_max, "pair-gcd-gt3", "none")


def is_exception_family(speeds) -> bool:
    """The (1, 2, 3, 12k) family, the only sub-1/4 case for an isolated factor 3."""
    return (
        len(speeds) == 4
        and tuple(speeds[:3]) == (1, 2, 3)
        and speeds[3] % 12 == 0
        and speeds[3] > 0
    )


def verify_theorem4(v_max: int) -> TheoremScanReport:
    """A pair sharing exactly the factor 3 forces ML >= 1/4 outside (1,2,3,12k)."""
    return _common_factor_scan(
        "4", v_max, "pair-gcd-eq3-isolated", "(1,2,3,12k) for positive integers k"
    )


def verify_shifted_theorem2(trials: int, q_max: int, v_max: int, seed: int) -> TheoremScanReport:
    """Seeded random shifted three-runner instances; each must reach 1/4.

    Speeds are distinct in 1..v_max with gcd 1; offsets are rationals in
    [0, 1) with denominator at most q_max.
    """
    if trials < 1 or q_max < 1 or v_max < 3:
        raise ValueError("need trials >= 1, q_max >= 1, v_max >= 3")
    rng = random.Random(seed)
    report = TheoremScanReport("2", 0, expected_exceptions="none")
    for _ in range(trials):
        while True:
            speeds = rng.sample(range(1, v_max + 1), 3)
            if gcd(gcd(speeds[0], speeds[1]), speeds[2]) == 1:
                break
        offsets = []
        for _ in range(3):
            q = rng.randint(1, q_max)
            offsets.append(Rational(rng.randrange(q), q))
        inst = ShiftedInstance.create(speeds, offsets)
        report.tuples_checked += 1
        result = shifted_ml(inst)
        if result.value < QUARTER:
            report.exceptions_found.append(
                {
                    "speeds": sorted(speeds),
                    "offsets": [str(o) for o in inst.offsets],
                    "ml": str(result.value),
                }
            )
    return report
