"""Randomized and exhaustive property suites behind ``paracocycle verify``.

Every suite uses a fixed seed, so a run is reproducible; a suite stops at
its first violation and returns it as the counterexample.
"""

from __future__ import annotations

import itertools
import math
import time
from typing import Callable, NamedTuple

import mpmath
import numpy as np

from .cocycle import (ALMOST_ADDITIVITY_CONSTANT, BlockWord, Word, block_matrix,
                      block_product_lower_bound, column_norm_dominates, norm_at_most,
                      norm_exceeds, operator_norm, word_product)
from .errors import InvalidInputError
from .measures import build_renewal_spec, entropy_gap, kac_abramov_check
from .pressure import partition_sums
from .series import t_prime_bracket

DEFAULT_TRIALS = 10_000
SWAP_MAX_LENGTH = 12


class SuiteResult(NamedTuple):
    suite: str
    trials: int
    violations: int
    counterexample: dict | None
    seconds: float

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _random_blocks(rng: np.random.Generator, k_max: int = 8, cap: int = 30) -> BlockWord:
    k = int(rng.integers(1, k_max + 1))
    return BlockWord(tuple(map(tuple, rng.integers(1, cap + 1, size=(k, 2)).tolist())))


def _entropy_gap_trial(rng) -> dict | None:
    n = int(rng.integers(1, 21))
    a = rng.uniform(0.01, 10.0, size=n) ** rng.uniform(0.5, 3.0)
    p = rng.dirichlet(np.full(n, rng.uniform(0.2, 3.0)))
    if n > 1 and rng.random() < 0.3:
        p[rng.integers(0, n)] = 0.0
        p /= math.fsum(p)
    g = entropy_gap(p, a)
    if g.equality_gap < 0 or g.value > g.max_value + 1e-12 * max(1.0, abs(g.max_value)):
        return {"p": p.tolist(), "a": a.tolist(), "gap": g._asdict()}
    eq = entropy_gap(a / math.fsum(a), a)
    if eq.equality_gap > 1e-12 or abs(eq.value - eq.max_value) > 1e-12 * max(1.0, abs(eq.max_value)):
        return {"p": "a/Q", "a": a.tolist(), "gap": eq._asdict()}
    return None


def _block_lower_bound_trial(rng) -> dict | None:
    b = _random_blocks(rng)
    M = b.product()
    bound = block_product_lower_bound(b)
    if not (norm_exceeds(M, bound) and operator_norm(M, "outward-lower") >= bound):
        return {"blocks": [list(x) for x in b], "bound": bound}
    return None


# the ratio can equal 1 exactly (e.g. powers of one symmetric block); the
# 113-bit norms then agree only to ~1e-33
_RATIO_SLACK = mpmath.mpf("1e-25")


def _almost_additivity_trial(rng) -> dict | None:
    b = _random_blocks(rng)
    if len(b) < 2:
        b = BlockWord(b.blocks + _random_blocks(rng, 1).blocks)
    split = int(rng.integers(1, len(b)))
    head = BlockWord(b.blocks[:split]).product()
    tail = BlockWord(b.blocks[split:]).product()
    joint = operator_norm(tail @ head).value
    prod = operator_norm(tail).value * operator_norm(head).value
    ratio = joint / prod
    if not (mpmath.mpf(ALMOST_ADDITIVITY_CONSTANT) - _RATIO_SLACK <= ratio <= 1 + _RATIO_SLACK):
        return {"blocks": [list(x) for x in b], "split": split, "ratio": float(ratio)}
    return None


def _cone_trial(rng) -> dict | None:
    b = _random_blocks(rng)
    M = b.product()
    x, y = M.apply(*(int(v) for v in rng.integers(0, 10**6, size=2)))
    if not x >= y >= 0:
        return {"blocks": [list(v) for v in b], "image": [x, y], "check": "cone"}
    if not column_norm_dominates(M):
        return {"blocks": [list(v) for v in b], "check": "first column"}
    return None


def _claim_two_sided_block_norm() -> dict | None:
    for m in range(1, 101):
        for n in range(1, 101):
            B = block_matrix(m, n)
            if not (norm_exceeds(B, m * n) and norm_at_most(B, 16 * m * m * n * n)):
                return {"m": m, "n": n, "check": "mn <= ||B|| <= 4mn"}
    return None


def _det_trial(rng) -> dict | None:
    w = Word(tuple(rng.integers(1, 3, size=int(rng.integers(0, 65))).tolist()))
    M = word_product(w)
    if M.det != 1 or min(M.entries()) < 0 or (len(w) and M.a < 1):
        return {"word": str(w), "matrix": M.tolist()}
    return None


def _kac_trial(rng, lo: float) -> dict | None:
    t = float(rng.uniform(lo, -0.01))
    rep = kac_abramov_check(build_renewal_spec(t))
    if rep.analytic_error > 1e-12 * rep.expected or rep.abramov_error > 1e-12:
        return {"t": t, "report": rep._asdict()}
    return None


def _swap_exhaustive(max_len: int) -> tuple[int, dict | None]:
    count = 0
    for n in range(1, max_len + 1):
        for syms in itertools.product((1, 2), repeat=n):
            w = Word(syms)
            M, S = word_product(w), word_product(w.swap())
            count += 1
            if S != M.flip() or operator_norm(S).value != operator_norm(M).value:
                return count, {"word": str(w)}
    return count, None


def _fekete_directions(trials: int, seed: int, n_max: int = 10) -> tuple[int, dict | None]:
    """(1/n) log s_n(t) nondecreasing for t < 0, nonincreasing for t > 0, on certified brackets."""
    rng = np.random.default_rng(seed)
    ts = rng.uniform(-4.0, 3.0, size=trials)
    ts = ts[ts != 0.0]
    seqs = []
    for n in range(1, n_max + 1):
        sums = partition_sums(n, ts)
        seqs.append([(math.log(s.lo) / n, math.log(s.hi) / n) for s in sums])
    for i, t in enumerate(ts):
        col = [seqs[n][i] for n in range(n_max)]
        for n in range(n_max - 1):
            (lo0, hi0), (lo1, hi1) = col[n], col[n + 1]
            bad = hi1 < lo0 if t < 0 else lo1 > hi0
            if bad:
                return len(ts), {"t": float(t), "n": n + 1, "values": col}
    return len(ts), None


def _run_trials(name: str, trial: Callable, trials: int, seed: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    start = time.monotonic()
    for i in range(trials):
        bad = trial(rng)
        if bad is not None:
            bad["trial"] = i
            return SuiteResult(name, i + 1, 1, bad, time.monotonic() - start)
    return SuiteResult(name, trials, 0, None, time.monotonic() - start)


def run_suite(name: str, trials: int = DEFAULT_TRIALS, seed: int = 0) -> SuiteResult:
    name = SUITE_ALIASES.get(name, name)
    if name not in SUITES:
        raise InvalidInputError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    start = time.monotonic()
    if name == "swap":
        count, bad = _swap_exhaustive(SWAP_MAX_LENGTH)
        return SuiteResult(name, count, int(bad is not None), bad, time.monotonic() - start)
    if name == "fekete":
        count, bad = _fekete_directions(trials, seed)
        return SuiteResult(name, count, int(bad is not None), bad, time.monotonic() - start)
    if name == "cone":
        bad = _claim_two_sided_block_norm()
        if bad is not None:
            return SuiteResult(name, 1, 1, bad, time.monotonic() - start)
    if name == "kac":
        lo = t_prime_bracket().hi + 0.01
        res = _run_trials(name, lambda rng: _kac_trial(rng, lo), trials, seed)
    else:
        res = _run_trials(name, SUITES[name], trials, seed)
    return res._replace(seconds=time.monotonic() - start)


SUITES: dict[str, Callable | None] = {
    "entropy-gap": _entropy_gap_trial,
    "block-lower-bound": _block_lower_bound_trial,
    "almost-additivity": _almost_additivity_trial,
    "cone": _cone_trial,
    "det": _det_trial,
    "kac": None,
    "swap": None,
    "fekete": None,
}

# names used by the command-line contract
SUITE_ALIASES = {"lemma31": "entropy-gap", "lemma32": "block-lower-bound",
                 "lemma34": "almost-additivity"}
