"""Block-renewal equilibrium witnesses, entropy gaps and Monte Carlo Lyapunov exponents.

Two inducing conventions appear here and every per-return quantity says
which one it uses:

* ``blocks``: one return per maximal run; a run of length k is a block.
  Returns have mean length W, so mu(D) = 1/W.
* ``pairs``: one return per (1-run, 2-run) pair (i, j) with mass p_i p_j.
  Returns have mean length 2W (Kac), so mu(D) = 1/(2W).

Per-symbol values are per-return values times mu(D) (Abramov, Knill).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .cocycle import Word, block_matrix, operator_norm
from .errors import InfeasibleError, InvalidInputError
from .induced import BlockMeasure
from .rounding import Bracket, down, up
from .series import series_value, t_prime_bracket

MAX_RENEWAL_N = 10**7


# -- entropy gap --------------------------------------------------------------

class EntropyGap(NamedTuple):
    value: float
    max_value: float
    equality_gap: float


def entropy_gap(p: Sequence[float], a: Sequence[float]) -> EntropyGap:
    """sum p_n (log a_n - log p_n) against its maximum log sum a_n, with 0 log 0 = 0.

    The maximum is attained exactly at p = a / sum(a).
    """
    p = np.asarray(p, dtype=np.float64).ravel()
    a = np.asarray(a, dtype=np.float64).ravel()
    if p.shape != a.shape:
        raise InvalidInputError(f"p and a differ in length: {p.size} vs {a.size}")
    if (p < 0).any() or not np.isfinite(p).all():
        raise InvalidInputError("probabilities must be finite and nonnegative")
    if (a <= 0).any() or not np.isfinite(a).all():
        raise InvalidInputError("weights a must be finite and positive")
    if abs(math.fsum(p) - 1.0) > 1e-9:
        raise InvalidInputError(f"probabilities sum to {math.fsum(p)!r}, not 1")
    Q = math.fsum(a)
    nz = p > 0
    value = math.fsum(p[nz] * (np.log(a[nz]) - np.log(p[nz])))
    # p log(a / (p Q)) summed is -KL(p || a/Q); fsum of the direct form keeps
    # the equality case at machine precision
    q = a[nz] / Q
    kl = math.fsum(p[nz] * np.log(p[nz] / q))
    gap = max(0.0, kl)
    return EntropyGap(value, math.log(Q), gap)


def pair_block_certificate(t: float, p: BlockMeasure | np.ndarray) -> float:
    """sum p_{ij} (-log p_{ij} + t log(1 + ij)) over a block table.

    This bounds h + t chi of any induced measure with these pair masses from
    above; by the entropy gap it never exceeds log sum_{i,j <= N} (1 + ij)^t.
    """
    if not t < 0:
        raise InvalidInputError("the pair-block certificate needs t < 0")
    w = p.weights if isinstance(p, BlockMeasure) else np.asarray(p, dtype=np.float64)
    if (w < 0).any() or abs(math.fsum(w.ravel()) - 1.0) > 1e-9:
        raise InvalidInputError("p must be a probability table")
    N = w.shape[0]
    i = np.arange(1, N + 1, dtype=np.float64)
    logb = np.log1p(np.outer(i, i))
    nz = w > 0
    return math.fsum((w[nz] * (t * logb[nz] - np.log(w[nz]))).ravel())


# -- renewal measure ------------------------------------------------------------

@dataclass(frozen=True)
class RenewalSpec:
    """Run lengths i.i.d. with p_k = (k + 1/k)^t / Q, k <= N, N the first cap with Q > 1."""

    t: float
    N: int
    Q: float
    p: np.ndarray
    W: float

    def __post_init__(self):
        self.p.setflags(write=False)


def _renewal_weights(t: float, N: int) -> np.ndarray:
    k = np.arange(1, N + 1, dtype=np.float64)
    return np.exp(t * np.log(k + 1.0 / k))


def build_renewal_spec(t: float, N: int | None = None) -> RenewalSpec:
    """Smallest N with Q = sum_{k <= N} (k + 1/k)^t > 1 (or the given N).

    Such N exists iff t > t'. For t >= 0 the delta measures are already beaten
    by the measure of maximal entropy and no construction is needed.
    """
    t = float(t)
    if t >= 0:
        raise InvalidInputError(f"renewal witnesses are for t < 0, got t={t}")
    if t <= t_prime_bracket().hi:
        if t <= t_prime_bracket().lo or series_value("n_plus_inv", t).total.hi <= 1.0:
            raise InfeasibleError(
                f"no finite N gives Q > 1 at t={t}: the full series sum (k + 1/k)^t is at most 1 for t <= t'")
    if N is None:
        chunk, total, start = 1024, 0.0, 1
        while True:
            k = np.arange(start, start + chunk, dtype=np.float64)
            csum = total + np.cumsum(np.exp(t * np.log(k + 1.0 / k)))
            hit = np.nonzero(csum > 1.0)[0]
            if hit.size:
                N = int(start + hit[0])
                break
            total, start = float(csum[-1]), start + chunk
            chunk *= 2
            if start > MAX_RENEWAL_N:
                raise InfeasibleError(f"Q stays <= 1 up to N = {MAX_RENEWAL_N} at t={t}")
    a = _renewal_weights(t, int(N))
    Q = math.fsum(a)
    if not Q > 1.0:
        raise InfeasibleError(f"Q = {Q!r} <= 1 at t={t}, N={N}")
    p = a / Q
    k = np.arange(1, N + 1, dtype=np.float64)
    return RenewalSpec(t, int(N), Q, p, math.fsum(k * p))


def renewal_entropy(spec: RenewalSpec) -> float:
    """Entropy per block return, -sum p_k log p_k."""
    p = spec.p[spec.p > 0]
    return max(0.0, -math.fsum(p * np.log(p)))


class LyapunovBounds(NamedTuple):
    upper_per_block: float      # blocks convention
    lower_per_pair: float       # pairs convention
    upper_per_symbol: float
    lower_per_symbol: float
    block_mass: float           # mu(D) = 1/W, blocks convention
    pair_mass: float            # mu(D) = 1/(2W), pairs convention


def renewal_lyapunov_bounds(spec: RenewalSpec) -> LyapunovBounds:
    """Analytic bracket on the Lyapunov exponent of the renewal measure.

    Upper: ||A_1^k|| = ||A_2^k|| <= k + 1/k per block. Lower: a pair (i, j)
    contributes ||B_{i,j}|| >= 1 + ij and norms of block products dominate
    products of these. Both converted to per-symbol units.
    """
    k = np.arange(1, spec.N + 1, dtype=np.float64)
    upper = math.fsum(spec.p * np.log(k + 1.0 / k))
    lower = math.fsum((np.outer(spec.p, spec.p) * np.log1p(np.outer(k, k))).ravel())
    return LyapunovBounds(upper, lower, upper / spec.W, lower / (2 * spec.W),
                          1.0 / spec.W, 1.0 / (2 * spec.W))


def pressure_witness(spec: RenewalSpec) -> float:
    """mu(D) log Q with mu(D) = 1/W; a lower bound on h + t chi, hence on P(t)."""
    return math.log(spec.Q) / spec.W


def pressure_witness_bounds(spec: RenewalSpec) -> Bracket:
    """Outward-rounded version of ``pressure_witness`` for certified use."""
    a = _renewal_weights(spec.t, spec.N)
    rel = 2.0**-44 + 64 * 2.0**-53 * (1 + abs(spec.t) * math.log(spec.N + 1))
    q_lo = down(math.fsum(a * (1 - rel)))
    k = np.arange(1, spec.N + 1, dtype=np.float64)
    w_hi = up(math.fsum(k * a * (1 + rel)) / q_lo, 2)
    return Bracket(down(down(math.log(q_lo), 2) / w_hi), up(math.log(spec.Q) / spec.W, 2))


# -- sampling -----------------------------------------------------------------

def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))


def sample_blocks(spec: RenewalSpec, n_blocks: int, seed: int) -> tuple[int, np.ndarray]:
    """(first symbol, run lengths): one fair bit, then i.i.d. lengths from p."""
    rng = _rng(seed)
    first = 1 + int(rng.integers(0, 2))
    lengths = 1 + rng.choice(spec.N, size=int(n_blocks), p=spec.p)
    return first, lengths


def sample_stream(spec: RenewalSpec, min_symbols: int, seed: int) -> tuple[int, np.ndarray]:
    """(first symbol, run lengths) covering at least ``min_symbols`` symbols."""
    rng = _rng(seed)
    first = 1 + int(rng.integers(0, 2))
    parts, total = [], 0
    while total < min_symbols:
        need = int(math.ceil((min_symbols - total) / spec.W)) + 1
        part = 1 + rng.choice(spec.N, size=need, p=spec.p)
        parts.append(part)
        total += int(part.sum())
    return first, np.concatenate(parts)


def sample_word(spec: RenewalSpec, length: int, seed: int) -> Word:
    """Prefix of the alternating renewal word; deterministic in ``seed``."""
    if length < 1:
        raise InvalidInputError(f"length must be >= 1, got {length}")
    rng = _rng(seed)
    first = 1 + int(rng.integers(0, 2))
    out: list[int] = []
    sym = first
    while len(out) < length:
        need = length - len(out)
        lengths = 1 + rng.choice(spec.N, size=need, p=spec.p)
        for k in lengths:
            out.extend([sym] * int(k))
            sym = 3 - sym
            if len(out) >= length:
                break
    return Word(tuple(out[:length]))


# -- Monte Carlo Lyapunov exponent ---------------------------------------------

RENORMALIZE_EVERY = 64


def runs_of(word: Word | Iterable[int]) -> tuple[int, np.ndarray]:
    syms = list(word)
    if not syms:
        raise InvalidInputError("empty stream")
    lengths = np.diff(np.flatnonzero(np.diff(syms, prepend=-1, append=-1) != 0))
    return int(syms[0]), lengths


def log_norm_along(first: int, lengths: Sequence[int]) -> float:
    """log ||A_{x_{n-1}} ... A_{x_0}|| for the run-length encoded word.

    The product is carried in float64 and rescaled by its largest entry every
    ``RENORMALIZE_EVERY`` runs; the scales accumulate with fsum.
    """
    a, b, c, d = 1.0, 0.0, 0.0, 1.0
    logs = []
    sym = first
    for i, k in enumerate(lengths):
        k = float(k)
        if sym == 1:   # A_1^k = [[1, 0], [k, 1]] on the left
            c, d = c + k * a, d + k * b
        else:          # A_2^k = [[1, k], [0, 1]]
            a, b = a + k * c, b + k * d
        sym = 3 - sym
        if i % RENORMALIZE_EVERY == RENORMALIZE_EVERY - 1:
            s = max(a, b, c, d)
            a, b, c, d = a / s, b / s, c / s, d / s
            logs.append(math.log(s))
    sigma = 0.5 * (math.hypot(a + d, c - b) + math.hypot(a - d, b + c))
    logs.append(math.log(sigma))
    return math.fsum(logs)


class MCResult(NamedTuple):
    estimate: float
    ci: tuple[float, float]
    per_seed: tuple[float, ...]
    symbols: int
    checkpoints: tuple[tuple[int, float], ...] = ()


def mc_lyapunov_stream(first: int, lengths: Sequence[int],
                       checkpoints: Sequence[int] = ()) -> tuple[float, tuple[tuple[int, float], ...]]:
    """(1/n) log ||A^n|| for one run-length stream, plus values at symbol checkpoints."""
    lengths = np.asarray(lengths, dtype=np.int64)
    n = int(lengths.sum())
    if checkpoints and min(checkpoints) > n:
        raise InvalidInputError("stream is shorter than the first checkpoint")
    if len(lengths) == 1:
        warnings.warn("degenerate stream (a single run): the exponent of a parabolic "
                      "power tends to 0", RuntimeWarning, stacklevel=2)
    cum = np.cumsum(lengths)
    marks = []
    for c in checkpoints:
        if c > n:
            continue
        j = int(np.searchsorted(cum, c))
        head = list(lengths[:j]) + [int(c - (cum[j - 1] if j else 0))]
        marks.append((int(c), log_norm_along(first, [h for h in head if h > 0]) / c))
    return log_norm_along(first, lengths) / n, tuple(marks)


def mc_lyapunov(spec: RenewalSpec, symbols: int = 10**7, seeds: Sequence[int] | int = 32,
                base_seed: int = 0, z: float = 1.959963984540054) -> MCResult:
    """Per-symbol exponent from independent renewal streams; CI from the seed batch means."""
    if isinstance(seeds, int):
        seeds = [base_seed + s for s in range(seeds)]
    per_stream = max(1, int(math.ceil(symbols / len(seeds))))
    vals, total = [], 0
    for s in seeds:
        first, lengths = sample_stream(spec, per_stream, s)
        vals.append(log_norm_along(first, lengths) / float(lengths.sum()))
        total += int(lengths.sum())
    mean = math.fsum(vals) / len(vals)
    if len(vals) > 1:
        sd = float(np.std(vals, ddof=1))
        half = z * sd / math.sqrt(len(vals))
    else:
        half = math.inf
    return MCResult(mean, (mean - half, mean + half), tuple(vals), total)


# -- Kac and Abramov ------------------------------------------------------------

class KacReport(NamedTuple):
    pair_return_mean: float     # sum (i + j) p_i p_j
    expected: float             # 2W
    analytic_error: float
    empirical_mean: float | None
    empirical_sigma: float | None
    empirical_ok: bool | None
    entropy_per_symbol_blocks: float
    entropy_per_symbol_pairs: float
    abramov_error: float


def kac_abramov_check(spec: RenewalSpec, n_pairs: int = 0, seed: int = 0) -> KacReport:
    """Kac: the mean pair return time is 2W. Abramov: both conventions give the same h per symbol."""
    k = np.arange(1, spec.N + 1, dtype=np.float64)
    pp = np.outer(spec.p, spec.p)
    mean = math.fsum((pp * np.add.outer(k, k)).ravel())
    expected = 2 * spec.W
    emp_mean = emp_sigma = emp_ok = None
    if n_pairs:
        _, lengths = sample_blocks(spec, 2 * n_pairs, seed)
        r = lengths[0::2] + lengths[1::2]
        emp_mean = float(r.mean())
        emp_sigma = float(r.std(ddof=1) / math.sqrt(len(r)))
        emp_ok = abs(emp_mean - expected) <= 3 * emp_sigma
    H = renewal_entropy(spec)
    pair_entropy = 2 * H  # (i, j) independent
    h_blocks = H / spec.W
    h_pairs = pair_entropy / (2 * spec.W)
    return KacReport(mean, expected, abs(mean - expected), emp_mean, emp_sigma, emp_ok,
                     h_blocks, h_pairs, abs(h_blocks - h_pairs))


# -- report -----------------------------------------------------------------------

class MeasureReport(NamedTuple):
    spec: RenewalSpec
    entropy_induced: float
    lyapunov: LyapunovBounds
    mu_D_mass: float
    pressure_witness: float
    witness_bounds: Bracket
    mc: MCResult | None
    kac: KacReport


def measure_report(t: float, symbols: int = 10**7, seeds: int = 32, base_seed: int = 0,
                   mc: bool = True) -> MeasureReport:
    spec = build_renewal_spec(t)
    bounds = renewal_lyapunov_bounds(spec)
    result = mc_lyapunov(spec, symbols, seeds, base_seed) if mc else None
    return MeasureReport(spec, renewal_entropy(spec), bounds, 1.0 / spec.W,
                         pressure_witness(spec), pressure_witness_bounds(spec), result,
                         kac_abramov_check(spec))


def block_norm_lower_check(i: int, j: int) -> bool:
    """1 + ij <= ||B_{i,j}|| with the norm rounded down."""
    return operator_norm(block_matrix(i, j), "outward-lower") >= 1 + i * j
