"""Directed rounding for float64 bounds.

Every certified quantity in the package is a pair (lo, hi) of floats with
lo <= true value <= hi. Scalar operations round outward with
``math.nextafter``; bulk numpy evaluations carry an explicit relative error
pad that dominates the accumulated rounding of the libm calls involved
(hypot, log, exp: each well under 4 ulp on glibc and numpy's SIMD paths).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

UNIT = 2.0**-53
# floor on every relative pad; keeps the certificate robust to libm variation
PAD_FLOOR = 2.0**-44


def down(x: float, steps: int = 1) -> float:
    for _ in range(steps):
        x = math.nextafter(x, -math.inf)
    return x


def up(x: float, steps: int = 1) -> float:
    for _ in range(steps):
        x = math.nextafter(x, math.inf)
    return x


def pad_down(x: float, rel: float = PAD_FLOOR) -> float:
    return down(x - abs(x) * rel)


def pad_up(x: float, rel: float = PAD_FLOOR) -> float:
    return up(x + abs(x) * rel)


def power_pad(log_norms: np.ndarray, t: float, shift=0.0) -> np.ndarray:
    """Relative error bound of ``exp(t * log_norms - shift)`` computed in float64.

    Accounts for the 32-ulp norm pad raised to |t|, the log and exp calls,
    and error amplification |x| * eps through exp. ``shift`` is a float
    product such as P * cost, itself carrying one rounding.
    """
    x = np.abs(t * log_norms) + np.abs(shift)
    return PAD_FLOOR + (8.0 * x + 64.0 * abs(t) + 16.0) * UNIT


def sum_bounds(lo_terms, hi_terms) -> tuple[float, float]:
    """Outward bounds on sums of nonnegative terms. fsum is correctly rounded."""
    lo = math.fsum(lo_terms)
    hi = math.fsum(hi_terms)
    return down(lo), up(hi)


def padded_power_sum(log_norms: np.ndarray, t: float, shift=0.0) -> tuple[float, float]:
    """Certified bracket on sum_i exp(t * log_norms[i] - shift[i])."""
    terms = np.exp(t * log_norms - shift)
    rel = power_pad(log_norms, t, shift)
    return sum_bounds(terms * (1.0 - rel), terms * (1.0 + rel))


@dataclass(frozen=True)
class Bracket:
    """Closed real interval [lo, hi] with outward-rounded arithmetic."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty bracket [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: float) -> "Bracket":
        return cls(x, x)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def __add__(self, other: "Bracket | float") -> "Bracket":
        if not isinstance(other, Bracket):
            other = Bracket.point(float(other))
        return Bracket(down(self.lo + other.lo), up(self.hi + other.hi))

    __radd__ = __add__

    def __neg__(self) -> "Bracket":
        return Bracket(-self.hi, -self.lo)

    def __sub__(self, other: "Bracket | float") -> "Bracket":
        if not isinstance(other, Bracket):
            other = Bracket.point(float(other))
        return self + (-other)

    def __mul__(self, other: "Bracket | float") -> "Bracket":
        if not isinstance(other, Bracket):
            other = Bracket.point(float(other))
        p = (self.lo * other.lo, self.lo * other.hi,
             self.hi * other.lo, self.hi * other.hi)
        return Bracket(down(min(p)), up(max(p)))

    __rmul__ = __mul__

    def __truediv__(self, other: "Bracket | float") -> "Bracket":
        if not isinstance(other, Bracket):
            other = Bracket.point(float(other))
        if other.lo <= 0.0 <= other.hi:
            raise ZeroDivisionError("bracket division by an interval containing 0")
        q = (self.lo / other.lo, self.lo / other.hi,
             self.hi / other.lo, self.hi / other.hi)
        return Bracket(down(min(q)), up(max(q)))

    def __pow__(self, k: int) -> "Bracket":
        if not isinstance(k, int) or k < 0:
            raise TypeError("only nonnegative integer powers")
        if self.lo < 0:
            raise ValueError("integer power implemented for nonnegative brackets")
        out = Bracket.point(1.0)
        for _ in range(k):
            out = out * self
        return out

    def log(self) -> "Bracket":
        lo = down(math.log(self.lo), 2) if self.lo > 0 else -math.inf
        return Bracket(lo, up(math.log(self.hi), 2))

    def exp(self) -> "Bracket":
        return Bracket(max(0.0, down(math.exp(self.lo), 2)), up(math.exp(self.hi), 2))

    def rpow(self, t: float) -> "Bracket":
        """self ** t for a positive bracket and real exponent t."""
        if self.lo <= 0:
            raise ValueError("rpow needs a positive bracket")
        return (self.log() * t).exp()

    def as_tuple(self) -> tuple[float, float]:
        return (self.lo, self.hi)
