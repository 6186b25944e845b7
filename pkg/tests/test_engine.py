"""Engine behavior: normalization, candidate times, exact ML, oracle, shifts.

Expected values tagged as derived were frozen from an independent
stdlib-Fraction breakpoint oracle before the engine was written.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lonerun.engine import (
    AT_LEAST_FLOOR,
    EXACT,
    MAX_SPEED,
    ShiftedInstance,
    SpeedSet,
    candidate_times,
    compute_ml,
    compute_ml_with_floor,
    min_circle_distance,
    normalize,
    oracle_ml,
    prejump_invariant,
    shifted_ml,
    shifted_objective,
    shifted_oracle,
)
from lonerun.rational import Rational, WidthError, circle_norm

speed_lists = st.lists(
    st.integers(min_value=1, max_value=60), min_size=1, max_size=5, unique=True
)


# ---------------------------------------------------------------- normalize

def test_normalize_sorts_and_records_scale():
    s = normalize([3, 8, 19, 11])
    assert s.speeds == (3, 8, 11, 19)
    assert s.scale == 1
    s = normalize([10, 40])
    assert s.speeds == (1, 4)
    assert s.scale == 10


def test_normalize_rejects_bad_input():
    with pytest.raises(ValueError):
        normalize([4, 4, 7])
    with pytest.raises(ValueError):
        normalize([])
    with pytest.raises(ValueError):
        normalize([0, 3])
    with pytest.raises(ValueError):
        normalize([-2, 3])
    with pytest.raises(WidthError):
        normalize([1, MAX_SPEED + 1])


def test_speedset_invariants_enforced():
    with pytest.raises(ValueError):
        SpeedSet((2, 4))  # gcd 2
    with pytest.raises(ValueError):
        SpeedSet((3, 2))  # not increasing
    with pytest.raises(ValueError):
        SpeedSet((1, 2), scale=0)


@given(speed_lists, st.permutations(range(5)), st.integers(min_value=1, max_value=7))
def test_normalize_permutation_and_scale_invariant(speeds, perm, k):
    base = normalize(speeds)
    shuffled = [speeds[p % len(speeds)] for p in perm[: len(speeds)]]
    if sorted(set(shuffled)) != sorted(speeds):
        shuffled = list(reversed(speeds))
    scaled = [k * v for v in shuffled]
    assert normalize(scaled).speeds == base.speeds
    assert compute_ml(normalize(scaled)).value == compute_ml(base).value


# ---------------------------------------------------------- candidate times

def test_candidate_times_two_speeds():
    s = normalize([1, 2])
    assert list(candidate_times(s)) == [(Rational(1, 3), (0, 1))]


def test_candidate_times_enumeration():
    s = normalize([1, 2, 3])
    got = [(str(t), pair) for t, pair in candidate_times(s)]
    assert got == [
        ("1/3", (0, 1)),
        ("1/4", (0, 2)),
        ("1/2", (0, 2)),
        ("1/5", (1, 2)),
        ("2/5", (1, 2)),
    ]


def test_candidate_times_contains_witness_denominator():
    s = normalize([3, 8, 11, 19])
    times = {(t.num, t.den) for t, pair in candidate_times(s) if pair == (2, 3)}
    assert (7, 30) in times  # m=7 over 11+19


def test_candidate_times_requires_two_speeds():
    with pytest.raises(ValueError):
        next(candidate_times(normalize([5])))


# ------------------------------------------------------------- compute_ml

KNOWN_ML = [
    ([1, 2, 3], Rational(1, 4)),
    ([3, 8, 11, 19], Rational(7, 30)),
    ([5, 6, 11, 17, 23, 28], Rational(8, 51)),
    ([1, 7, 8, 15], Rational(5, 22)),
    ([1, 4, 5], Rational(1, 3)),
    ([5, 20], Rational(2, 5)),
]


@pytest.mark.parametrize("speeds,expected", KNOWN_ML)
def test_compute_ml_known_values(speeds, expected):
    assert compute_ml(normalize(speeds)).value == expected


def test_compute_ml_single_runner():
    r = compute_ml(normalize([7]))
    assert r.value == Rational(1, 2)
    assert r.witness_pair is None
    assert r.mode == EXACT
    # (7) normalizes to speeds (1,) with scale 7, so the witness is 1/2
    assert normalize([7]).scale == 7
    assert r.witness_time == Rational(1, 2)


def test_compute_ml_witness_evaluates_to_value():
    for speeds, expected in KNOWN_ML:
        s = normalize(speeds)
        r = compute_ml(s)
        assert min_circle_distance(s.speeds, r.witness_time) == expected


def test_compute_ml_witness_tie_break():
    # (1,4,5) attains 1/3 at both 2/6 (pair sum 6) and 3/9 (pair sum 9);
    # the smaller pair-sum denominator wins.
    r = compute_ml(normalize([1, 4, 5]))
    assert r.witness_time == Rational(1, 3)
    assert r.witness_pair == (0, 2)


def test_compute_ml_matches_candidate_enumeration():
    # the kernel result equals a direct maximization over candidate_times
    for speeds in ([2, 3, 7], [3, 5, 11, 13], [4, 9, 11]):
        s = normalize(speeds)
        best = max(min_circle_distance(s.speeds, t) for t, _ in candidate_times(s))
        assert compute_ml(s).value == best


def test_result_json_shape():
    s = normalize([8, 3, 11, 19])
    d = compute_ml(s).to_json_dict(s)
    assert d == {
        "speeds": [3, 8, 11, 19],
        "scale": 1,
        "ml": "7/30",
        "mode": "exact",
        "witness": {"t": "13/30", "pair": [2, 3]},
    }


# ------------------------------------------------------------- floor mode

def test_floor_mode_tight_set_stays_exact():
    # ML(1,2,3,4) = 1/5 (frozen from the independent oracle), below 1/4,
    # so the floored scan must fall back to the exact answer.
    r = compute_ml_with_floor(normalize([1, 2, 3, 4]), Rational(1, 4))
    assert r.mode == EXACT
    assert r.value == Rational(1, 5)


def test_floor_mode_early_exit():
    # ML(1,3,4) = 2/7 >= 1/4 (frozen from the independent oracle)
    r = compute_ml_with_floor(normalize([1, 3, 4]), Rational(1, 4))
    assert r.mode == AT_LEAST_FLOOR
    assert r.value == Rational(1, 4)
    s = normalize([1, 3, 4])
    assert min_circle_distance(s.speeds, r.witness_time) >= Rational(1, 4)


def test_floor_mode_exact_examples():
    r = compute_ml_with_floor(normalize([3, 8, 11, 19]), Rational(1, 4))
    assert (r.mode, r.value) == (EXACT, Rational(7, 30))
    r = compute_ml_with_floor(normalize([5, 20]), Rational(1, 2))
    assert (r.mode, r.value) == (EXACT, Rational(2, 5))


def test_floor_mode_single_runner():
    r = compute_ml_with_floor(normalize([9]), Rational(1, 3))
    assert r.mode == AT_LEAST_FLOOR


def test_floor_must_be_in_range():
    with pytest.raises(ValueError):
        compute_ml_with_floor(normalize([1, 2]), Rational(0))
    with pytest.raises(ValueError):
        compute_ml_with_floor(normalize([1, 2]), Rational(2, 3))


# ----------------------------------------------------------------- oracle

@pytest.mark.parametrize("speeds,expected", KNOWN_ML)
def test_oracle_known_values(speeds, expected):
    assert oracle_ml(normalize(speeds)).value == expected


@given(speed_lists)
@settings(max_examples=200, deadline=None)
def test_oracle_equivalence(speeds):
    s = normalize(speeds)
    assert compute_ml(s).value == oracle_ml(s).value


def test_oracle_equivalence_exhaustive_n5():
    from lonerun.scan import enumerate_primitive

    for speeds in enumerate_primitive(5, 14):
        s = SpeedSet(tuple(speeds))
        assert compute_ml(s).value == oracle_ml(s).value, speeds


@given(speed_lists)
@settings(max_examples=100, deadline=None)
def test_ml_bounds(speeds):
    s = normalize(speeds)
    v = compute_ml(s).value
    assert Rational(0) < v <= Rational(1, 2)


@given(st.lists(st.integers(min_value=0, max_value=25), min_size=1, max_size=5, unique=True))
@settings(max_examples=100, deadline=None)
def test_all_odd_speeds_reach_half(ks):
    speeds = [2 * k + 1 for k in ks]
    assert compute_ml(normalize(speeds)).value == Rational(1, 2)


@given(speed_lists, st.integers(min_value=1, max_value=60))
@settings(max_examples=150, deadline=None)
def test_adding_a_runner_never_increases_ml(speeds, extra):
    if extra in speeds:
        extra += max(speeds)
    base = compute_ml(normalize(speeds)).value
    bigger = compute_ml(normalize(speeds + [extra])).value
    assert bigger <= base


# ---------------------------------------------------------------- shifted

def test_shifted_zero_offsets_match_unshifted():
    inst = ShiftedInstance.create([1, 2, 3], [Rational(0)] * 3)
    assert shifted_ml(inst).value == Rational(1, 4)


def test_shifted_single_runner_at_antipode():
    inst = ShiftedInstance.create([7], [Rational(1, 2)])
    r = shifted_ml(inst)
    assert r.value == Rational(1, 2)
    assert r.witness_time == Rational(0)


def test_shifted_half_offsets_exactly_quarter():
    inst = ShiftedInstance.create([1, 2, 3], [Rational(1, 2), Rational(0), Rational(1, 2)])
    r = shifted_ml(inst)
    assert r.value == Rational(1, 4)
    assert shifted_objective(inst, r.witness_time) == Rational(1, 4)
    assert shifted_oracle(inst).value == Rational(1, 4)


def test_shifted_normalizes_speed_gcd_only():
    inst = ShiftedInstance.create([10, 20, 30], [Rational(1, 3), Rational(0), Rational(0)])
    assert inst.speeds == (1, 2, 3)
    assert inst.offsets[0] == Rational(1, 3)


def test_shifted_instance_validation():
    with pytest.raises(ValueError):
        ShiftedInstance.create([1, 1], [Rational(0), Rational(0)])
    with pytest.raises(ValueError):
        ShiftedInstance.create([1, 2], [Rational(0)])
    with pytest.raises(ValueError):
        ShiftedInstance.create([1, 2], [Rational(3, 2), Rational(0)])


offsets_st = st.integers(min_value=0, max_value=7).flatmap(
    lambda num: st.integers(min_value=max(1, num), max_value=8).map(
        lambda den: Rational(num % den, den)
    )
)


@given(
    st.lists(st.integers(min_value=1, max_value=12), min_size=1, max_size=4, unique=True),
    st.lists(offsets_st, min_size=4, max_size=4),
)
@settings(max_examples=150, deadline=None)
def test_shifted_oracle_equivalence(speeds, offsets):
    inst = ShiftedInstance.create(speeds, offsets[: len(speeds)])
    a = shifted_ml(inst)
    b = shifted_oracle(inst)
    assert a.value == b.value
    assert shifted_objective(inst, a.witness_time) == a.value


@given(speed_lists)
@settings(max_examples=50, deadline=None)
def test_shifted_zero_offsets_equal_compute_ml(speeds):
    s = normalize(speeds)
    inst = ShiftedInstance.create(list(speeds), [Rational(0)] * len(speeds))
    assert shifted_ml(inst).value == compute_ml(s).value


# ---------------------------------------------------------------- pre-jump

def test_prejump_examples():
    assert prejump_invariant(3, 6, 3, Rational(1, 7), 2)
    assert prejump_invariant(5, 20, 5, Rational(1, 8), 4)
    assert prejump_invariant(4, 16, 4, Rational(3, 11), 1)


def test_prejump_rejects_non_divisor():
    with pytest.raises(ValueError):
        prejump_invariant(3, 7, 3, Rational(1, 7), 1)
    with pytest.raises(ValueError):
        prejump_invariant(3, 6, 0, Rational(1, 7), 1)


@given(
    st.integers(min_value=1, max_value=9),
    st.integers(min_value=1, max_value=40),
    st.integers(min_value=1, max_value=40),
    st.integers(min_value=-10, max_value=10),
    st.integers(min_value=1, max_value=200),
    st.integers(min_value=1, max_value=200),
)
@settings(max_examples=300)
def test_prejump_always_holds(g, a, b, h, tn, td):
    assert prejump_invariant(g * a, g * b, g, Rational(tn, td), h)


def test_circle_norm_consistency_with_objective():
    s = normalize([3, 8, 11, 19])
    t = Rational(13, 30)
    assert min_circle_distance(s.speeds, t) == min(circle_norm(t * v) for v in s.speeds)
