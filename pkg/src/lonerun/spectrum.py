"""Classification of loneliness values against the s/(ns+k) spectrum lattice.

A value below the 1/n floor is a spectrum point when it equals s/(ns+k) for
integers s, k with 1 <= k <= n; points must also respect the 1/(n+1) lower
bound of the loneliness interval, which forces s >= k.  Everything else
below the floor is an amended-spectrum violation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .rational import ONE_HALF, Rational, reduce

AT_LEAST_FLOOR = "at-least-floor"
SPECTRUM_POINT = "spectrum-point"
AMENDED_VIOLATION = "amended-violation"


@dataclass(frozen=True)
class SpectrumClass:
    """Where a value sits relative to 1/n and the spectrum lattice.

    ``all_k`` lists every k in 1..n admitting an integer s; ``k_min`` is the
    smallest (the canonical representative) with ``s`` the s it forces.
    ``lrc_violation`` flags values below the 1/(n+1) bound.
    """

    kind: str
    s: Optional[int] = None
    k_min: Optional[int] = None
    all_k: tuple[int, ...] = ()
    lrc_violation: bool = False

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "s": self.s,
            "k_min": self.k_min,
            "all_k": list(self.all_k),
            "lrc_violation": self.lrc_violation,
        }


def classify(n: int, value: Rational) -> SpectrumClass:
    """Classify an exact loneliness value for n runners.

    Values >= 1/n are at-least-floor.  Below the floor, k is accepted when
    s = p*k/(q - n*p) is an integer with s >= k (s >= k is exactly the
    value >= 1/(n+1) condition, so the sub-1/(n+1) lattice solutions such as
    1/6 = 1/(4*1+2) for n = 4 do not count as spectrum points).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if not Rational(0) < value <= ONE_HALF:
        raise ValueError(f"value {value} outside (0, 1/2]")
    lrc = value < Rational(1, n + 1)
    if value >= Rational(1, n):
        return SpectrumClass(AT_LEAST_FLOOR, lrc_violation=lrc)
    p, q = value.num, value.den
    rem = q - n * p  # > 0 since value < 1/n
    ks = []
    s_min = None
    for k in range(1, n + 1):
        if (p * k) % rem:
            continue
        s = (p * k) // rem
        if s >= k:
            ks.append(k)
            if s_min is None:
                s_min = s
    if not ks:
        return SpectrumClass(AMENDED_VIOLATION, lrc_violation=lrc)
    return SpectrumClass(SPECTRUM_POINT, s=s_min, k_min=ks[0], all_k=tuple(ks), lrc_violation=lrc)


def spectrum_value(n: int, s: int, k: int) -> Rational:
    """The lattice value s/(ns+k), reduced."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if s < 1:
        raise ValueError("s must be at least 1")
    if not 1 <= k <= n:
        raise ValueError("k must satisfy 1 <= k <= n")
    return reduce(s, n * s + k)
