"""Full-shift partition sums s_n(t) and one-sided Fekete bounds on the pressure.

For t < 0 the norm power is supermultiplicative, ||A_{IJ}||^t >= ||A_I||^t ||A_J||^t,
so s_{n+m} >= s_n s_m and every (1/n) log s_n is a lower bound for P(t). For
t > 0 the inequality reverses and the same quantities are upper bounds. The
cocycle is not quasi-multiplicative on the full shift, so the opposite side
is not available from these sums; it comes from the induced system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .cocycle import A1, A2, bulk_norms
from .enumerate import Budget, Enumeration
from .errors import InvalidInputError, ResourceLimitError
from .rounding import Bracket, down, power_pad, up

LOG2 = math.log(2.0)
DEFAULT_N_CAP = 26

_GENS = np.array([A1.entries(), A2.entries()], dtype=np.int64)


class Method(str, Enum):
    FULLSHIFT_FEKETE = "fullshift-fekete"
    INDUCED_FEKETE = "induced-fekete"
    TRANSFER_HEURISTIC = "transfer-heuristic"
    EXACT_ANCHOR = "exact-anchor"


@dataclass(frozen=True)
class PressureBracket:
    """Certified lower <= P(t) <= upper.

    ``estimate`` is never certified. ``sequence`` holds the certified
    per-length values (1/n) log s_n, which are lower bounds for t < 0 and
    upper bounds for t > 0.
    """

    t: float
    lower: float
    upper: float
    n_used: int
    method: Method
    estimate: float | None = None
    sequence: tuple[Bracket, ...] = field(default=(), repr=False)
    sources: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.lower <= self.upper:
            raise ValueError(f"inverted pressure bracket [{self.lower}, {self.upper}] at t={self.t}")
        if self.method is Method.TRANSFER_HEURISTIC and (self.lower, self.upper) != (-math.inf, math.inf):
            raise ValueError("heuristic brackets carry no certified bounds")

    @property
    def width(self) -> float:
        return self.upper - self.lower


def _chunk_sums(logn: np.ndarray, ts: Sequence[float], mult: float) -> list[tuple[float, float]]:
    out = []
    for t in ts:
        terms = np.exp(t * logn)
        rel = power_pad(logn, t)
        lo = math.fsum(terms * (1.0 - rel))
        hi = math.fsum(terms * (1.0 + rel))
        out.append((down(lo) * mult, up(hi) * mult))
    return out


def partition_sums(n: int, ts: Sequence[float], *, symmetric: bool = True,
                   threads: int = 1, budget: Budget | None = None,
                   n_cap: int = DEFAULT_N_CAP) -> list[Bracket]:
    """Certified brackets on s_n(t) = sum over |I| = n of ||A_I||^t, for several t.

    With ``symmetric`` only words starting with 1 are enumerated and the sum is
    doubled: the swap 1 <-> 2 conjugates A_I by the coordinate flip and so
    preserves the norm. Doubling is exact in binary floating point.
    """
    if n < 1:
        raise InvalidInputError(f"word length must be >= 1, got {n}")
    if n > n_cap:
        raise ResourceLimitError(f"n = {n} exceeds the enumeration cap n <= {n_cap}")
    ts = [float(t) for t in ts]
    enum = Enumeration(_GENS, n, first=[0] if symmetric else None)
    mult = 2.0 if symmetric else 1.0

    def work(ch):
        logn = np.log(bulk_norms(ch.a, ch.b, ch.c, ch.d))
        return _chunk_sums(logn, ts, mult)

    parts = enum.map(work, threads=threads, budget=budget)
    out = []
    for i, t in enumerate(ts):
        if t == 0.0:
            out.append(Bracket.point(float(2**n)))
            continue
        lo = math.fsum(p[i][0] for p in parts)
        hi = math.fsum(p[i][1] for p in parts)
        out.append(Bracket(down(lo), up(hi)))
    return out


def partition_sum(n: int, t: float, **kw) -> Bracket:
    return partition_sums(n, [t], **kw)[0]


def pressure_fekete_bounds(t: float, n_max: int, *, threads: int = 1,
                           budget: Budget | None = None, symmetric: bool = True,
                           n_cap: int = DEFAULT_N_CAP) -> PressureBracket:
    """One-sided certified bounds from (1/n) log s_n(t), n = 1..n_max.

    The other side is the monotonicity anchor P(t) <= P(0) = log 2 for t < 0
    and P(t) >= log 2 for t > 0. The estimate is log(s_n / s_{n-1}) at n_max,
    clipped at 0 for t < 0.
    """
    t = float(t)
    if n_max < 1:
        raise InvalidInputError(f"n_max must be >= 1, got {n_max}")
    if n_max > n_cap:
        raise ResourceLimitError(f"n_max = {n_max} exceeds the enumeration cap n <= {n_cap}")
    if t == 0.0:
        seq = tuple(Bracket.point(LOG2) for _ in range(n_max))
        return PressureBracket(t, LOG2, LOG2, n_max, Method.EXACT_ANCHOR, LOG2, seq)
    sums = [partition_sum(n, t, threads=threads, budget=budget, symmetric=symmetric, n_cap=n_cap)
            for n in range(1, n_max + 1)]
    seq = tuple(Bracket(down(math.log(s.lo) / n, 2), up(math.log(s.hi) / n, 2))
                for n, s in zip(range(1, n_max + 1), sums))
    if n_max >= 2:
        estimate = math.log(sums[-1].mid / sums[-2].mid)
    else:
        estimate = seq[0].mid
    if t < 0:
        lower, upper = max(b.lo for b in seq), LOG2
        estimate = max(0.0, estimate)
    else:
        lower, upper = LOG2, min(b.hi for b in seq)
    return PressureBracket(t, lower, upper, n_max, Method.FULLSHIFT_FEKETE,
                           estimate, seq)
