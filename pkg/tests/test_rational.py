"""Exact fraction arithmetic, circle distance, and width enforcement."""

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lonerun.rational import (
    INT64_MAX,
    Rational,
    WidthError,
    circle_norm,
    compare,
    reduce,
)

rationals = st.builds(
    Rational,
    st.integers(min_value=-(10**6), max_value=10**6),
    st.integers(min_value=1, max_value=10**6),
)


def test_reduce_examples():
    assert reduce(14, 60) == Rational(7, 30)
    assert reduce(0, 5) == Rational(0, 1)
    assert (reduce(0, 5).num, reduce(0, 5).den) == (0, 1)
    assert reduce(8, 51) == Rational(8, 51)


def test_reduce_sign_in_numerator():
    r = reduce(3, -6)
    assert (r.num, r.den) == (-1, 2)
    assert (reduce(-3, -6).num, reduce(-3, -6).den) == (1, 2)


def test_reduce_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        reduce(1, 0)


def test_reduce_idempotent():
    r = reduce(14, 60)
    assert reduce(r.num, r.den) == r


def test_circle_norm_examples():
    assert circle_norm(Rational(7, 30)) == Rational(7, 30)
    assert circle_norm(Rational(23, 30)) == Rational(7, 30)
    assert circle_norm(Rational(-3, 4)) == Rational(1, 4)
    assert circle_norm(Rational(5)) == Rational(0)
    assert circle_norm(Rational(1, 2)) == Rational(1, 2)


def test_compare_examples():
    assert compare(Rational(7, 30), Rational(1, 4)) == -1
    assert compare(Rational(1, 4), Rational(1, 4)) == 0
    assert compare(Rational(2, 7), Rational(1, 4)) == 1  # cross-multiply: 8 vs 7


@given(rationals, st.integers(min_value=-50, max_value=50))
def test_circle_norm_integer_shift_invariant(x, k):
    assert circle_norm(x + k) == circle_norm(x)


@given(rationals)
def test_circle_norm_negation_invariant(x):
    assert circle_norm(-x) == circle_norm(x)


@given(rationals)
def test_circle_norm_range(x):
    d = circle_norm(x)
    assert Rational(0) <= d <= Rational(1, 2)


@given(rationals, rationals)
def test_compare_matches_fraction_oracle(a, b):
    fa, fb = Fraction(a.num, a.den), Fraction(b.num, b.den)
    expected = (fa > fb) - (fa < fb)
    assert compare(a, b) == expected


@given(rationals, rationals)
def test_arithmetic_matches_fraction_oracle(a, b):
    fa, fb = Fraction(a.num, a.den), Fraction(b.num, b.den)
    for op in ("__add__", "__sub__", "__mul__"):
        got = getattr(a, op)(b)
        want = getattr(fa, op)(fb)
        assert (got.num, got.den) == (want.numerator, want.denominator)


def test_int_coercion():
    assert Rational(1, 2) + 1 == Rational(3, 2)
    assert 2 * Rational(1, 4) == Rational(1, 2)
    assert 1 - Rational(1, 4) == Rational(3, 4)


def test_floor_ceil():
    assert math.floor(Rational(7, 2)) == 3
    assert math.ceil(Rational(7, 2)) == 4
    assert math.ceil(Rational(-7, 2)) == -3
    assert math.ceil(Rational(4, 2)) == 2


def test_width_error_on_construction():
    with pytest.raises(WidthError):
        Rational(INT64_MAX + 1, 1)
    with pytest.raises(WidthError):
        Rational(1, INT64_MAX + 1)
    # the width check applies to the reduced, stored form
    assert Rational(2 * INT64_MAX, 2).num == INT64_MAX


def test_width_error_on_arithmetic_overflow():
    big = Rational(INT64_MAX, 1)
    with pytest.raises(WidthError):
        big + 1
    with pytest.raises(WidthError):
        big * 2


def test_parse_and_str():
    assert Rational.parse("7/30") == Rational(7, 30)
    assert Rational.parse("-3/4") == Rational(-3, 4)
    assert Rational.parse("5") == Rational(5, 1)
    assert str(Rational(7, 30)) == "7/30"
    assert str(Rational(0)) == "0/1"
    with pytest.raises(ValueError):
        Rational.parse("a/b")


def test_json_round_trip():
    r = Rational(-7, 30)
    assert Rational.from_dict(r.to_dict()) == r
    assert r.to_dict() == {"num": -7, "den": 30}


def test_immutability_and_hash():
    r = Rational(1, 2)
    with pytest.raises(AttributeError):
        r.num = 3
    assert hash(Rational(2, 4)) == hash(Rational(1, 2))
    assert len({Rational(1, 2), Rational(2, 4), Rational(1, 3)}) == 2
