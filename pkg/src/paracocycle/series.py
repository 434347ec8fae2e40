"""Certified brackets for the two critical series and their roots.

    S_pair(t)  = sum_{i,j >= 1} (1 + ij)^t      root t_star  (near -2.174)
    S_power(t) = sum_{i >= 1} (i + 1/i)^t        root t_prime (near -1.820)

Both converge only for t < -1. A truncated sum is computed directly and the
remainder is enclosed by integral comparison. For a convex decreasing f,

    int_{J+1}^inf f + f(J+1)/2  <=  sum_{j > J} f(j)  <=  int_{J+1/2}^inf f,

(trapezoid and midpoint rules), which makes the enclosure width O(N^{t-2})
instead of the O(N^{t}) of plain integral bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import DivergenceError, InvalidInputError, PrecisionError
from .rounding import PAD_FLOOR, UNIT, Bracket, down, sum_bounds, up


class SeriesKind(str, Enum):
    ONE_PLUS_IJ = "one_plus_ij"
    N_PLUS_INV = "n_plus_inv"


@dataclass(frozen=True)
class SeriesBracket:
    kind: SeriesKind
    t: float
    N: int
    partial: Bracket
    tail_lo: float
    tail_hi: float

    @property
    def total(self) -> Bracket:
        return Bracket(down(self.partial.lo + self.tail_lo), up(self.partial.hi + self.tail_hi))

    @property
    def tail(self) -> Bracket:
        return Bracket(self.tail_lo, self.tail_hi)


def _pow(base: np.ndarray, expo: float) -> tuple[np.ndarray, np.ndarray]:
    """Elementwise (lo, hi) of base ** expo for exactly representable positive bases."""
    x = expo * np.log(base)
    v = np.exp(x)
    rel = PAD_FLOOR + (8.0 * np.abs(x) + 24.0) * UNIT
    return v * (1 - rel), v * (1 + rel)


def _check(t: float, N: int) -> None:
    if not t < -1:
        raise DivergenceError(f"series diverge for t >= -1 (got t={t})")
    if N < 2:
        raise InvalidInputError(f"truncation N must be >= 2, got {N}")


def power_tail(t: float, N: int) -> Bracket:
    """Enclosure of sum_{i > N} i^t for t < -1."""
    _check(t, N)
    s = Bracket.point(-t) - 1.0
    lo_int, _ = _pow(np.array([N + 1.0]), t + 1)
    _, hi_int = _pow(np.array([N + 0.5]), t + 1)
    f_lo, _ = _pow(np.array([N + 1.0]), t)
    lo = down(float(lo_int[0]) / s.hi) + 0.5 * float(f_lo[0])
    hi = up(float(hi_int[0]) / s.lo)
    return Bracket(down(lo), hi)


def _pair_bracket(t: float, N: int) -> SeriesBracket:
    i = np.arange(1, N + 1, dtype=np.float64)
    # (1 + ij) is exact for N <= 2**26
    lo, hi = _pow(1.0 + np.outer(i, i), t)
    partial = Bracket(*sum_bounds(lo.ravel(), hi.ravel()))

    # rows i <= N, columns j > N; f(x) = (1 + i x)^t is convex and decreasing
    s = Bracket.point(-t) - 1.0
    slack = 1 + 8 * UNIT
    int_lo, _ = _pow(1.0 + i * (N + 1.0), t + 1)
    _, int_hi = _pow(1.0 + i * (N + 0.5), t + 1)
    f_lo, _ = _pow(1.0 + i * (N + 1.0), t)
    row_lo = int_lo / (i * s.hi) / slack + 0.5 * f_lo
    row_hi = int_hi / (i * s.lo) * slack
    rows = Bracket(*sum_bounds(row_lo / slack, row_hi * slack))

    # i, j > N: (ij)^t (1 + 1/(ij))^t with 1/(ij) <= 1/(N+1)^2
    T = power_tail(t, N)
    shrink_lo, _ = _pow(np.array([1.0 + 1.0 / (N + 1.0) ** 2]), t)
    corner = T * T * Bracket(down(float(shrink_lo[0]) * (1 - 4 * UNIT)), 1.0)
    tail = rows * 2.0 + corner
    return SeriesBracket(SeriesKind.ONE_PLUS_IJ, t, N, partial, tail.lo, tail.hi)


def _power_bracket(t: float, N: int) -> SeriesBracket:
    i = np.arange(1, N + 1, dtype=np.float64)
    # i + 1/i is rounded; widen the base by one ulp each way
    base = i + 1.0 / i
    lo, _ = _pow(np.nextafter(base, np.inf), t)
    _, hi = _pow(np.nextafter(base, -np.inf), t)
    partial = Bracket(*sum_bounds(lo, hi))
    T = power_tail(t, N)
    shrink_lo, _ = _pow(np.array([1.0 + 1.0 / (N + 1.0) ** 2]), t)
    tail = T * Bracket(down(float(shrink_lo[0]) * (1 - 4 * UNIT)), 1.0)
    return SeriesBracket(SeriesKind.N_PLUS_INV, t, N, partial, tail.lo, tail.hi)


def series_bracket(kind: SeriesKind | str, t: float, N: int) -> SeriesBracket:
    """Certified enclosure of S_pair(t) or S_power(t) with truncation N."""
    kind = SeriesKind(kind)
    t, N = float(t), int(N)
    _check(t, N)
    if kind is SeriesKind.ONE_PLUS_IJ:
        if N > 2**13:
            raise InvalidInputError("N above 8192 is not supported for the pair series")
        return _pair_bracket(t, N)
    return _power_bracket(t, N)


# starting truncation and cap per series kind
_N_RANGE = {SeriesKind.ONE_PLUS_IJ: (200, 3200), SeriesKind.N_PLUS_INV: (10_000, 2_560_000)}

SEED_BRACKETS = {SeriesKind.ONE_PLUS_IJ: (-2.18, -2.17), SeriesKind.N_PLUS_INV: (-1.83, -1.82)}

MIN_TOLERANCE = 1e-12


def series_value(kind: SeriesKind | str, t: float, width: float = 1e-9) -> SeriesBracket:
    """Enclosure of the full series with total width <= ``width`` if reachable."""
    kind = SeriesKind(kind)
    N, cap = _N_RANGE[kind]
    while True:
        sb = series_bracket(kind, t, N)
        if sb.total.width <= width or N >= cap:
            return sb
        N *= 2


@dataclass(frozen=True)
class RootBracket:
    """lower < root < upper, certified by the series values at both ends."""

    kind: SeriesKind
    lower: float
    upper: float
    N: int
    value_at_lower: Bracket
    value_at_upper: Bracket

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def as_bracket(self) -> Bracket:
        return Bracket(self.lower, self.upper)


def _side(kind: SeriesKind, t: float, N: int) -> tuple[int, SeriesBracket, int]:
    """Sign of S(t) - 1 (-1, +1, or 0 if undecided at the cap)."""
    _, cap = _N_RANGE[kind]
    while True:
        sb = series_bracket(kind, t, N)
        if sb.total.hi < 1.0:
            return -1, sb, N
        if sb.total.lo > 1.0:
            return 1, sb, N
        if N >= cap:
            return 0, sb, N
        N *= 2


def solve_root(kind: SeriesKind | str, tolerance: float = 1e-6,
               seed: tuple[float, float] | None = None) -> RootBracket:
    """Bisection for S(t) = 1; S is strictly increasing in t."""
    kind = SeriesKind(kind)
    if not tolerance > 0:
        raise InvalidInputError("tolerance must be positive")
    if tolerance < MIN_TOLERANCE:
        raise PrecisionError(f"tolerance {tolerance:g} is below the achievable {MIN_TOLERANCE:g}")
    lo, hi = seed or SEED_BRACKETS[kind]
    N = _N_RANGE[kind][0]
    s_lo, v_lo, N = _side(kind, lo, N)
    s_hi, v_hi, N = _side(kind, hi, N)
    if s_lo != -1 or s_hi != 1:
        raise PrecisionError(f"seed bracket {(lo, hi)} does not certifiably straddle the root")
    while hi - lo > tolerance:
        for frac in (0.5, 0.25, 0.75):
            mid = lo + frac * (hi - lo)
            if not lo < mid < hi:
                raise PrecisionError("bracket reached float resolution")
            side, v, N = _side(kind, mid, N)
            if side:
                break
        else:
            raise PrecisionError(
                f"cannot separate the root below width {hi - lo:g} at N={N}")
        if side < 0:
            lo, v_lo = mid, v.total
        else:
            hi, v_hi = mid, v.total
    return RootBracket(kind, lo, hi, N, _total(v_lo), _total(v_hi))


def _total(v) -> Bracket:
    return v.total if isinstance(v, SeriesBracket) else v


def solve_t_star(tolerance: float = 1e-6) -> RootBracket:
    return solve_root(SeriesKind.ONE_PLUS_IJ, tolerance)


def solve_t_prime(tolerance: float = 1e-6) -> RootBracket:
    return solve_root(SeriesKind.N_PLUS_INV, tolerance)


@lru_cache(maxsize=None)
def t_star_bracket() -> Bracket:
    return solve_t_star(1e-6).as_bracket()


@lru_cache(maxsize=None)
def t_prime_bracket() -> Bracket:
    return solve_t_prime(1e-6).as_bracket()


def log_pair_series(t: float) -> Bracket:
    """log S_pair(t), an upper bound for the undiscounted induced pressure."""
    return series_value(SeriesKind.ONE_PLUS_IJ, t).total.log()


def log_power_series(t: float) -> Bracket:
    return series_value(SeriesKind.N_PLUS_INV, t).total.log()
