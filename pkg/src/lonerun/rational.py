"""Exact reduced-fraction arithmetic with a 64-bit storage bound.

Every value is stored reduced, with the sign in the numerator and a positive
denominator, so equality is a plain field-wise comparison.  Intermediate
products are computed exactly; a result whose numerator or denominator no
longer fits the 64-bit storage range raises :class:`WidthError` instead of
wrapping.
"""

from __future__ import annotations

from math import gcd

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1


class WidthError(ArithmeticError):
    """A stored value left the 64-bit range the engine guarantees."""


def _checked(num: int, den: int) -> tuple[int, int]:
    if not (INT64_MIN <= num <= INT64_MAX) or den > INT64_MAX:
        raise WidthError(f"value {num}/{den} exceeds the 64-bit storage width")
    return num, den


class Rational:
    """Reduced fraction ``num/den`` with ``den >= 1`` and ``gcd(|num|, den) == 1``."""

    __slots__ = ("num", "den")

    def __init__(self, num: int, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("rational with zero denominator")
        if den < 0:
            num, den = -num, -den
        g = gcd(num, den)
        if g > 1:
            num //= g
            den //= g
        num, den = _checked(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("Rational is immutable")

    @classmethod
    def parse(cls, text: str) -> "Rational":
        """Parse ``"p/q"`` or a bare integer string."""
        text = text.strip()
        if "/" in text:
            p, q = text.split("/", 1)
            return cls(int(p), int(q))
        return cls(int(text))

    def _coerce(self, other):
        if isinstance(other, Rational):
            return other
        if isinstance(other, int):
            return Rational(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Rational(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Rational(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Rational(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Rational(self.num * o.den, self.den * o.num)

    def __neg__(self):
        return Rational(-self.num, self.den)

    def __abs__(self):
        return Rational(abs(self.num), self.den)

    # Comparisons cross-multiply; denominators are positive so no sign flips.
    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.num == o.num and self.den == o.den

    def __lt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.num * o.den < o.num * self.den

    def __le__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.num * o.den <= o.num * self.den

    def __gt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.num * o.den > o.num * self.den

    def __ge__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.num * o.den >= o.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return self.num != 0

    def __floor__(self) -> int:
        return self.num // self.den

    def __ceil__(self) -> int:
        return -((-self.num) // self.den)

    def __float__(self) -> float:
        return self.num / self.den

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"

    def __repr__(self) -> str:
        return f"Rational({self.num}, {self.den})"

    def to_dict(self) -> dict:
        return {"num": self.num, "den": self.den}

    @classmethod
    def from_dict(cls, d: dict) -> "Rational":
        return cls(int(d["num"]), int(d["den"]))


# Semantic alias: a circle distance is a Rational constrained to [0, 1/2].
CircleDistance = Rational

ZERO = Rational(0)
ONE_HALF = Rational(1, 2)


def reduce(num: int, den: int) -> Rational:
    """Unique reduced form with positive denominator; den must be nonzero."""
    return Rational(num, den)


def compare(a: Rational, b: Rational) -> int:
    """Exact three-way comparison: -1, 0, or 1."""
    lhs = a.num * b.den
    rhs = b.num * a.den
    return (lhs > rhs) - (lhs < rhs)


def circle_norm(x: Rational) -> CircleDistance:
    """Distance from x to the nearest integer, exactly; result in [0, 1/2]."""
    r = x.num % x.den
    return Rational(min(r, x.den - r), x.den)
