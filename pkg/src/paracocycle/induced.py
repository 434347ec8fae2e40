"""The induced block system over the alphabet N^2 with cocycle B_{m,n} = A_2^n A_1^m.

z_k(t, N, P) sums e^{-(M_k + N_k) P} ||B_{w_{k-1}} ... B_{w_0}||^t over depth-k
block words with all m, n <= N. Two facts make these sums useful:

* ||MN|| <= ||M|| ||N||, so for t < 0 the sums are supermultiplicative and
  (1/k) log z_k is a lower bound for the truncated pressure g_N;
* on products of blocks ||MN|| >= ||M|| ||N|| / (2 sqrt 2), so adding
  |t| log(2 sqrt 2) before dividing by k gives an upper bound.

For t >= 0 the two roles swap. g_N increases to the untruncated g as N grows,
and the sign of g(t, P) decides whether the full-shift pressure P(t) exceeds P.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .cocycle import bulk_norms
from .enumerate import Budget, Enumeration
from .errors import InvalidInputError, ResourceLimitError
from .pressure import LOG2, Method, PressureBracket
from .rounding import PAD_FLOOR, Bracket, down, power_pad, sum_bounds, up
from .series import (SeriesBracket, SeriesKind, power_tail, series_bracket, t_prime_bracket,
                     t_star_bracket)
from .transfer import ProjectiveGrid, eigen_data, extrapolated_log_lambda, symbol_weights

# log(2 sqrt 2), rounded up
ALMOST_ADDITIVITY_LOG = up(1.5 * LOG2)
DEFAULT_MAX_WORDS = 2**25


class TailPolicy(str, Enum):
    IGNORE = "ignore"
    CERTIFIED_AUGMENT = "certified-augment"


@dataclass(frozen=True)
class Truncation:
    N: int
    k: int = 1
    tail_policy: TailPolicy = TailPolicy.IGNORE

    def __post_init__(self):
        if int(self.N) < 1 or int(self.k) < 1:
            raise InvalidInputError(f"truncation needs N >= 1 and k >= 1, got N={self.N}, k={self.k}")
        object.__setattr__(self, "tail_policy", TailPolicy(self.tail_policy))


def block_generators(N: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(gens, costs, symbols) for the alphabet {1..N}^2, row-major in m."""
    m, n = np.meshgrid(np.arange(1, N + 1), np.arange(1, N + 1), indexing="ij")
    m, n = m.ravel().astype(np.int64), n.ravel().astype(np.int64)
    gens = np.column_stack([1 + m * n, n, m, np.ones_like(m)])
    return gens, m + n, np.column_stack([m, n])


def _check_P(P: float) -> float:
    P = float(P)
    if not P >= 0:
        raise InvalidInputError(f"discount P must be >= 0, got {P}")
    return P


def induced_partition_sums(ts: Sequence[float], N: int, k: int, P: float = 0.0, *,
                           threads: int = 1, budget: Budget | None = None,
                           max_words: int = DEFAULT_MAX_WORDS) -> list[Bracket]:
    """Certified brackets on z_k(t, N, P) for each t in ``ts``."""
    trunc = Truncation(N, k)
    P = _check_P(P)
    ts = [float(t) for t in ts]
    gens, costs, _ = block_generators(trunc.N)
    enum = Enumeration(gens, trunc.k, costs=costs, max_words=max_words)

    def work(ch):
        logn = np.log(bulk_norms(ch.a, ch.b, ch.c, ch.d))
        shift = P * ch.cost
        out = []
        for t in ts:
            lo, hi = _power_terms(logn, t, shift)
            out.append((down(math.fsum(lo)), up(math.fsum(hi))))
        return out

    parts = enum.map(work, threads=threads, budget=budget)
    return [Bracket(down(math.fsum(p[i][0] for p in parts)), up(math.fsum(p[i][1] for p in parts)))
            for i in range(len(ts))]


def induced_partition_sum(t: float, trunc: Truncation, P: float = 0.0, **kw) -> Bracket:
    return induced_partition_sums([t], trunc.N, trunc.k, P, **kw)[0]


def _power_terms(logb: np.ndarray, t: float, shift=0.0) -> tuple[np.ndarray, np.ndarray]:
    v = np.exp(t * logb - shift)
    rel = power_pad(logb, t, shift)
    return v * (1.0 - rel), v * (1.0 + rel)


@lru_cache(maxsize=4)
def _single_block_log_norms(N: int) -> tuple[np.ndarray, np.ndarray]:
    gens, costs, _ = block_generators(N)
    return np.log(bulk_norms(*gens.T)), costs.astype(np.float64)


def single_block_sum(t: float, N: int, P: float = 0.0) -> Bracket:
    """z_1(t, N, P) without the enumeration machinery (cached log norms)."""
    logn, costs = _single_block_log_norms(int(N))
    lo, hi = _power_terms(logn, float(t), _check_P(P) * costs)
    return Bracket(*sum_bounds(lo, hi))


# -- discounted series over the full alphabet (t < 0) -----------------------

def _geometric_tail(t: float, P: float, N: int) -> float:
    """Upper bound on sum_{n > N} e^{-nP} n^t for t <= 0 < P."""
    first = math.exp(-(N + 1) * P + t * math.log(N + 1))
    return up(first / -math.expm1(-P) * (1 + PAD_FLOOR), 4)


def _discounted_tail_lower(t: float, P: float, N: int) -> float:
    """Lower bound on sum_{n > N} e^{-nP} (n + 1/n)^t for t < -1 and P > 0.

    Keeps only a window N < n <= M, where e^{-nP} >= e^{-MP} and the
    undiscounted window sum is a difference of certified power tails.
    """
    if not t < -1:
        return 0.0
    shrink = down(math.exp(t * math.log1p(1.0 / (N + 1.0) ** 2)), 4)
    head = power_tail(t, N).lo
    best, M = 0.0, N
    while M * P < 64:
        M *= 2
        window = down(head - power_tail(t, M).hi)
        if window <= 0:
            continue
        best = max(best, down(down(math.exp(-M * P), 4) * down(shrink * window)))
    return best


def _power_partial(t: float, P: float, N: int) -> Bracket:
    i = np.arange(1, N + 1, dtype=np.float64)
    # i + 1/i is rounded; widen the base by one ulp each way
    base = i + 1.0 / i
    lo, _ = _power_terms(np.log(np.nextafter(base, np.inf)), t, P * i)
    _, hi = _power_terms(np.log(np.nextafter(base, -np.inf)), t, P * i)
    return Bracket(*sum_bounds(lo, hi))


def _pair_partial(t: float, P: float, N: int) -> Bracket:
    i = np.arange(1, N + 1, dtype=np.float64)
    lo, hi = _power_terms(np.log(1.0 + np.outer(i, i)), t, P * np.add.outer(i, i))
    return Bracket(*sum_bounds(lo.ravel(), hi.ravel()))


def discounted_power_sum(t: float, P: float, N: int) -> SeriesBracket:
    """sum_n e^{-nP} (n + 1/n)^t, split at N. For P = 0 this needs t < -1."""
    t, P = float(t), _check_P(P)
    if t >= 0:
        raise InvalidInputError("discounted series are implemented for t < 0")
    if P == 0.0:
        return series_bracket(SeriesKind.N_PLUS_INV, t, N)
    tail_hi = _geometric_tail(t, P, N)
    if t < -1:
        tail_hi = min(tail_hi, power_tail(t, N).hi)
    return SeriesBracket(SeriesKind.N_PLUS_INV, t, N, _power_partial(t, P, N),
                         _discounted_tail_lower(t, P, N), tail_hi)


def discounted_pair_sum(t: float, P: float, N: int) -> SeriesBracket:
    """sum_{m,n} e^{-(m+n)P} (1 + mn)^t, split at N. For P = 0 this needs t < -1."""
    t, P = float(t), _check_P(P)
    if t >= 0:
        raise InvalidInputError("discounted series are implemented for t < 0")
    if P == 0.0:
        return series_bracket(SeriesKind.ONE_PLUS_IJ, t, N)
    # (1 + mn)^t <= (mn)^t: outside the N x N square the sum is at most G^2 - G_N^2
    i = np.arange(1, N + 1, dtype=np.float64)
    _, g_hi = _power_terms(np.log(i), t, P * i)
    g_n = up(math.fsum(g_hi))
    tau = _geometric_tail(t, P, N)
    if t < -1:
        tau = min(tau, power_tail(t, N).hi)
    return SeriesBracket(SeriesKind.ONE_PLUS_IJ, t, N, _pair_partial(t, P, N), 0.0,
                         up(tau * up(2 * g_n + tau)))


def _binomial_excess(base: float, extra: float, k: int, rnd) -> float:
    """(base + extra)^k - base^k, summed term by term with rounding rnd."""
    total = 0.0
    for j in range(1, k + 1):
        total = rnd(total + rnd(math.comb(k, j) * base ** (k - j) * extra**j, 2))
    return total


def _augment_lower(t: float, P: float, N: int, k: int) -> float:
    """Lower bound on the depth-k words with some block outside {1..N}^2.

    ||B_{m,n}|| <= (m + 1/m)(n + 1/n), so for t < 0 every such word weighs at
    least the product of its single-block envelopes.
    """
    if P == 0.0 and not t < -1:
        return math.inf
    F = discounted_power_sum(t, P, N)
    a_n = down(F.partial.lo * F.partial.lo)
    extra = down(F.tail_lo * down(2 * F.partial.lo + F.tail_lo))
    return max(0.0, _binomial_excess(a_n, extra, k, down))


def _augment_upper(t: float, P: float, N: int, k: int) -> float:
    """Upper bound on the same words from ||B_w|| >= prod (1 + m n)."""
    S = discounted_pair_sum(t, P, N)
    return _binomial_excess(S.partial.hi, S.tail_hi, k, up)


# -- Fekete brackets ----------------------------------------------------------

class FeketeLevel(NamedTuple):
    k: int
    z: Bracket
    lower: float
    upper: float


@dataclass(frozen=True)
class InducedPressureReport:
    t: float
    P: float
    bracket: PressureBracket
    truncation: Truncation
    levels: tuple[FeketeLevel, ...] = ()
    tail_slack: float = 0.0
    envelope: Bracket | None = None

    @property
    def rounding_slack(self) -> float:
        """Width of the last level beyond |t| L / k, from the outward rounding of z_k and its log."""
        if not self.levels:
            return 0.0
        last = self.levels[-1]
        return max(0.0, up(up(last.upper - last.lower) - abs(self.t) * ALMOST_ADDITIVITY_LOG / last.k))

    @property
    def gap_bound(self) -> float:
        return up(up(abs(self.t) * ALMOST_ADDITIVITY_LOG / self.truncation.k)
                  + self.tail_slack + self.rounding_slack, 4)


def _level_bounds(t: float, k: int, z: Bracket) -> tuple[float, float]:
    lo_shift = up(max(t, 0.0) * ALMOST_ADDITIVITY_LOG)
    hi_shift = up(max(-t, 0.0) * ALMOST_ADDITIVITY_LOG)
    lower = down(down(math.log(z.lo), 2) - lo_shift) / k if z.lo > 0 else -math.inf
    upper = up(up(math.log(z.hi), 2) + hi_shift) / k
    return down(lower), up(upper)


def envelope_bounds(t: float, N: int, P: float = 0.0, truncated: bool = True) -> Bracket:
    """2 log sum_n e^{-nP}(n + 1/n)^t <= g <= log sum_{m,n} e^{-(m+n)P}(1 + mn)^t, for t < 0.

    With ``truncated`` the sums stop at N and bound g_N; otherwise they bound g.
    """
    t, P = float(t), _check_P(P)
    if t >= 0:
        raise InvalidInputError("the envelope is implemented for t < 0")
    if truncated:
        f, s = _power_partial(t, P, N).lo, _pair_partial(t, P, N).hi
    else:
        F, S = discounted_power_sum(t, P, N), discounted_pair_sum(t, P, N)
        f, s = down(F.partial.lo + F.tail_lo), up(S.partial.hi + S.tail_hi)
    return Bracket(down(2 * down(math.log(f), 2)), up(math.log(s), 2))


def induced_fekete_bracket(t: float, N: int, k_max: int, P: float = 0.0,
                           tail_policy: TailPolicy | str = TailPolicy.IGNORE, *,
                           threads: int = 1, budget: Budget | None = None,
                           max_words: int = DEFAULT_MAX_WORDS) -> InducedPressureReport:
    """Certified bracket on the induced pressure from z_1, ..., z_{k_max}.

    With ``ignore`` the target is the truncated g_N; with ``certified-augment``
    (t < 0 only) it is the untruncated g, using the envelope bounds for the
    words that leave the {1..N}^2 alphabet.
    """
    t, P = float(t), _check_P(P)
    trunc = Truncation(N, k_max, tail_policy)
    augment = trunc.tail_policy is TailPolicy.CERTIFIED_AUGMENT
    if augment and t >= 0:
        raise InvalidInputError("certified-augment is implemented for t < 0")
    if augment and P == 0.0 and t >= -1:
        raise InvalidInputError("the untruncated induced pressure is infinite for t >= -1 at P = 0")
    levels = []
    for k in range(1, k_max + 1):
        z = induced_partition_sums([t], N, k, P, threads=threads, budget=budget,
                                   max_words=max_words)[0]
        if augment:
            z = Bracket(down(z.lo + _augment_lower(t, P, N, k)), up(z.hi + _augment_upper(t, P, N, k)))
        levels.append(FeketeLevel(k, z, *_level_bounds(t, k, z)))
    lower = max(lv.lower for lv in levels)
    upper = min(lv.upper for lv in levels)
    envelope = envelope_bounds(t, N, P, truncated=not augment) if t < 0 else None
    if envelope is not None:
        lower, upper = max(lower, envelope.lo), min(upper, envelope.hi)
    slack = 0.0
    if augment:
        # the augmentation widens log z_k by at most log(1 + excess / z_k)
        last = levels[-1].z
        slack = up(math.log(last.hi / last.lo) / k_max)
    bracket = PressureBracket(t, lower, upper, k_max, Method.INDUCED_FEKETE,
                              sources={"N": N, "k_max": k_max, "P": P,
                                       "tail_policy": trunc.tail_policy.value})
    return InducedPressureReport(t, P, bracket, trunc, tuple(levels), slack, envelope)


# -- certified sign of g and the critical parameter --------------------------

class LowerConfig(NamedTuple):
    k: int
    N: int


# each config enumerates at most a few million words
DEFAULT_TC_CONFIGS = (LowerConfig(1, 2048), LowerConfig(2, 64))


def certified_g_lower(t: float, P: float = 0.0,
                      configs: Sequence[LowerConfig] = DEFAULT_TC_CONFIGS, *,
                      threads: int = 1, budget: Budget | None = None) -> float:
    """Best certified lower bound on the untruncated g(t, P) over ``configs`` (t < 0)."""
    t, P = float(t), _check_P(P)
    if P == 0.0 and t >= -1:
        return math.inf
    best = -math.inf
    for cfg in configs:
        if cfg.k == 1:
            z = single_block_sum(t, cfg.N, P)
        else:
            z = induced_partition_sums([t], cfg.N, cfg.k, P, threads=threads, budget=budget)[0]
        total = down(z.lo + _augment_lower(t, P, cfg.N, cfg.k))
        best = max(best, _level_bounds(t, cfg.k, Bracket(total, math.inf))[0])
        if best > 0:
            break
    return best


def certified_g_upper(t: float, P: float = 0.0, N: int = 512) -> float:
    """Certified upper bound on the untruncated g(t, P) from the pair series (t < 0)."""
    S = discounted_pair_sum(t, P, N)
    return up(math.log(up(S.partial.hi + S.tail_hi)), 2)


class CriticalReport(NamedTuple):
    certified: Bracket
    heuristic: float | None
    sign: str
    warning: bool
    t_star: Bracket
    t_prime: Bracket
    steps: int


SIGN_BELOW, SIGN_ABOVE, SIGN_UNRESOLVED = "certified < -2", "certified >= -2", "unresolved"


def critical_sign(b: Bracket) -> str:
    if b.hi < -2.0:
        return SIGN_BELOW
    if b.lo >= -2.0:
        return SIGN_ABOVE
    return SIGN_UNRESOLVED


def solve_t_c(tolerance: float = 1e-3, *, configs: Sequence[LowerConfig] = DEFAULT_TC_CONFIGS,
              heuristic: bool = True, grid: ProjectiveGrid | None = None,
              N_pair: tuple[int, int] = (40, 80), threads: int = 1,
              budget: Budget | None = None) -> CriticalReport:
    """Certified bracket on t_c, the root of the undiscounted induced pressure g.

    The left end is the certified left end of t*, where the pair series is
    below 1 and hence g < 0. The right end is found by bisection on the
    certified lower bound of g, starting from the right end of t', where the
    single-block envelope already makes g > 0. ``warning`` is set when the
    bracket is wider than ``tolerance``.
    """
    if not tolerance > 0:
        raise InvalidInputError("tolerance must be positive")
    ts, tp = t_star_bracket(), t_prime_bracket()
    left = ts.lo
    if not certified_g_upper(left) < 0:
        raise ResourceLimitError("pair series does not certify g < 0 at the left end of t*")
    hi = tp.hi
    if not certified_g_lower(hi, configs=configs, threads=threads, budget=budget) > 0:
        raise ResourceLimitError("envelope does not certify g > 0 at the right end of t'")
    lo, steps = ts.hi, 0
    while hi - lo > 0.25 * tolerance:
        mid = 0.5 * (lo + hi)
        if certified_g_lower(mid, configs=configs, threads=threads, budget=budget) > 0:
            hi = mid
        else:
            lo = mid
        steps += 1
    certified = Bracket(left, hi)
    estimate = None
    if heuristic:
        estimate = heuristic_t_c(grid=grid, N_pair=N_pair, bracket=certified)
    return CriticalReport(certified, estimate, critical_sign(certified),
                          certified.width > tolerance, ts, tp, steps)


def heuristic_t_c(grid: ProjectiveGrid | None = None, N_pair: tuple[int, int] = (40, 80),
                  bracket: Bracket | None = None, xtol: float = 1e-6) -> float:
    """Root of the N-extrapolated transfer-operator estimate of g (not certified)."""
    from scipy.optimize import brentq

    grid = grid or ProjectiveGrid(1024)
    a, b = (bracket.lo, bracket.hi) if bracket is not None else (-2.18, -1.82)
    return brentq(lambda t: extrapolated_log_lambda(t, N_pair, grid), a, b, xtol=xtol)


def heuristic_pressure(t: float, grid: ProjectiveGrid | None = None,
                       N_pair: tuple[int, int] = (40, 80), P_max: float = 8.0) -> float:
    """Estimate of P(t): 0 if the extrapolated g(t, 0) <= 0, else the root in P of g_N(t, P).

    For P > 0 the discount makes the truncation error decay exponentially, so
    the larger truncation is used directly. Not certified.
    """
    from scipy.optimize import brentq

    from .transfer import transfer_eigenvalue

    grid = grid or ProjectiveGrid(1024)
    if float(t) < 0 and extrapolated_log_lambda(t, N_pair, grid) <= 0:
        return 0.0
    N = N_pair[1]

    def g(P):
        return transfer_eigenvalue(t, N, grid, 1e-11, P=P).log_lambda

    # just above t_c the truncated system may still have g_N(t, 0) <= 0
    if g(0.0) <= 0:
        return 0.0
    return brentq(g, 0.0, P_max, xtol=1e-9)


# -- pressure of the full shift through the induced system --------------------

def _largest_true(pred, tol: float, hi: float = LOG2, rel: float = 0.01) -> float:
    """Largest P in [0, hi] found with pred(P), for pred true at 0 and decreasing.

    Shrinks geometrically while nothing positive is known, so roots far below
    ``tol`` still give a positive value; then bisects to absolute tolerance
    ``tol`` or relative tolerance ``rel``.
    """
    a, b = 0.0, hi
    while b - a > tol or (0 < a and b - a > rel * a):
        if a == 0.0 and b < 1e-12:
            break
        m = 0.5 * (a + b) if a > 0 else b / 8
        a, b = (m, b) if pred(m) else (a, m)
    return a


def induced_pressure_bounds(t: float, *, lower_configs: Sequence[LowerConfig] = (LowerConfig(1, 1024),),
                            fallback_configs: Sequence[LowerConfig] = (LowerConfig(2, 64),),
                            upper_N: int = 512, tolerance: float = 1e-4,
                            fallback_tolerance: float = 1e-3, fallback_below: float = 0.01) -> Bracket:
    """Certified bracket on the full-shift pressure P(t) for t < 0.

    P(t) > P whenever g(t, P) > 0 and P(t) <= P whenever g(t, P) < 0, so the
    bracket comes from two bisections in P on the certified sign of g. The
    costlier ``fallback_configs`` are tried only while the lower bound is
    below ``fallback_below``. Outside those certificates 0 <= P(t) <= log 2.
    """
    t = float(t)
    if t >= 0:
        raise InvalidInputError("induced pressure bounds are implemented for t < 0")

    def negative(P):
        if P == 0.0 and t >= -1:
            return False
        return certified_g_upper(t, P, upper_N) < 0

    if negative(0.0):
        upper = 0.0
    else:
        a, b = 0.0, LOG2
        if negative(b):
            while b - a > tolerance:
                m = 0.5 * (a + b)
                a, b = (a, m) if negative(m) else (m, b)
        upper = b
    lower = 0.0
    for cfgs, tol in ((lower_configs, tolerance), (fallback_configs, fallback_tolerance)):
        if lower < fallback_below and upper > 0 and certified_g_lower(t, 0.0, cfgs) > 0:
            found = _largest_true(lambda P: certified_g_lower(t, P, cfgs) > 0, tol, hi=upper)
            lower = max(lower, found)
    return Bracket(lower, max(lower, upper))


# -- Gibbs cylinders and return times -----------------------------------------

@dataclass(frozen=True)
class BlockMeasure:
    """Probability table over blocks (m, n) in {1..N}^2; ``weights[m-1, n-1]``."""

    weights: np.ndarray
    N: int = field(init=False)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise InvalidInputError(f"block measure must be square, got shape {w.shape}")
        if (w < 0).any():
            raise InvalidInputError("block measure weights must be nonnegative")
        total = math.fsum(w.ravel())
        if abs(total - 1.0) > 1e-12:
            raise InvalidInputError(f"block measure sums to {total!r}, not 1")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "N", w.shape[0])

    @classmethod
    def normalized(cls, raw) -> "BlockMeasure":
        raw = np.asarray(raw, dtype=np.float64)
        w = raw / math.fsum(raw.ravel())
        # one more pass absorbs the rounding of the first division
        return cls(w / math.fsum(w.ravel()))

    def __getitem__(self, mn: tuple[int, int]) -> float:
        m, n = mn
        return float(self.weights[m - 1, n - 1])


class GibbsCheckReport(NamedTuple):
    method: str
    depth: int
    P: float
    C1: float
    C2: float
    log_lambda: float

    @property
    def band(self) -> float:
        return self.C2 / self.C1


def _validate_tP(t: float, P: float) -> None:
    if P < 0:
        raise InvalidInputError(f"discount P must be >= 0, got {P}")
    if P > 0 and t < t_star_bracket().lo:
        raise InvalidInputError(f"P(t) = 0 for t = {t} < t*, so the discount must be 0")
    if P == 0 and t > t_prime_bracket().hi:
        raise InvalidInputError(f"P(t) > 0 for t = {t} > t', so a positive discount is required")


def gibbs_cylinder_estimate(t: float, N: int, method: str = "eigen", k: int = 2, P: float = 0.0, *,
                            grid: ProjectiveGrid | None = None, threads: int = 1,
                            budget: Budget | None = None,
                            max_words: int = DEFAULT_MAX_WORDS) -> tuple[BlockMeasure, GibbsCheckReport]:
    """Approximate one-block cylinder masses of the induced Gibbs measure.

    ``eigen``: nu(L_a h) / (lambda nu(h)) from the discretized operator.
    ``word-ratio``: the share of sum psi over depth-k words carrying symbol a
    at the middle slot k // 2.
    """
    t, P = float(t), float(P)
    _validate_tP(t, P)
    if N < 1:
        raise InvalidInputError(f"N must be >= 1, got {N}")
    gens, costs, _ = block_generators(N)
    if method == "eigen":
        data = eigen_data(t, N, grid or ProjectiveGrid(1024), P=P)
        raw, log_lam, depth = symbol_weights(data), data.log_lambda, 1
    elif method == "word-ratio":
        if k < 1:
            raise InvalidInputError(f"depth k must be >= 1, got {k}")
        raw, log_lam = _word_ratio(t, N, k, P, threads, budget, max_words)
        depth = k
    else:
        raise InvalidInputError(f"unknown Gibbs method {method!r}")
    mu = BlockMeasure.normalized(raw.reshape(N, N))
    single = np.exp(t * np.log(bulk_norms(*gens.T)) - P * costs)
    ratio = mu.weights.ravel() / single
    return mu, GibbsCheckReport(method, depth, P, float(ratio.min()), float(ratio.max()), log_lam)


def _word_ratio(t, N, k, P, threads, budget, max_words) -> tuple[np.ndarray, float]:
    gens, costs, _ = block_generators(N)
    enum = Enumeration(gens, k, costs=costs, max_words=max_words)
    G, mid = len(gens), k // 2

    def work(ch):
        psi = np.exp(t * np.log(bulk_norms(ch.a, ch.b, ch.c, ch.d)) - P * ch.cost)
        sym = enum.slot_symbols(mid, ch.index)
        if np.ndim(sym) == 0:
            acc = np.zeros(G)
            acc[int(sym)] = math.fsum(psi)
            return acc
        return np.bincount(sym, weights=psi, minlength=G)

    acc = np.zeros(G)
    for part in enum.map(work, threads=threads, budget=budget):
        acc += part
    return acc, math.log(acc.sum()) / k


class ReturnTimeReport(NamedTuple):
    value: float
    row_exponent: float | None
    column_exponent: float | None
    analytic_converges: bool | None
    t: float | None


def _fit_exponent(values: np.ndarray) -> float | None:
    idx = np.arange(1, len(values) + 1)
    keep = (idx >= 2) & (values > 0)
    if keep.sum() < 2:
        return None
    return float(np.polyfit(np.log(idx[keep]), np.log(values[keep]), 1)[0])


def expected_return_time(mu: BlockMeasure, t: float | None = None) -> ReturnTimeReport:
    """sum (m + n) mu(m, n) on the truncated table, with a power-law tail fit.

    The fitted exponent alpha of mu(m, 1) ~ m^alpha decides convergence of the
    untruncated mean: it is finite iff alpha < -2. For weights (mn)^t this is
    t < -2.
    """
    N = mu.N
    m = np.arange(1, N + 1)
    value = math.fsum((mu.weights * (m[:, None] + m[None, :])).ravel())
    return ReturnTimeReport(value, _fit_exponent(mu.weights[:, 0]), _fit_exponent(mu.weights[0, :]),
                            None if t is None else bool(t < -2), t)
