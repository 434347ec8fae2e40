"""Chunked exhaustive enumeration of matrix products over a finite generator set.

A word w_0 ... w_{k-1} maps to G[w_{k-1}] ... G[w_0]. The word is split into a
head (positions 0..a-1) and a tail (positions a..k-1); all head products are
held in one int64 array and every chunk is ``tail_j @ heads``. The chunk
partition depends only on (G, k, chunk_target), never on the thread count, and
results are reduced in chunk order, so sums are bit-reproducible.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence, TypeVar

import numpy as np

from .errors import ResourceLimitError

R = TypeVar("R")

DEFAULT_CHUNK = 2**18
INT64_SAFE = 2**62


class Budget:
    """Wall-clock budget shared by the long-running enumerations."""

    def __init__(self, seconds: float | None = None):
        self.seconds = seconds
        self.start = time.monotonic()

    def check(self, what: str = "computation") -> None:
        if self.seconds is not None and time.monotonic() - self.start > self.seconds:
            raise ResourceLimitError(f"{what} exceeded the time budget of {self.seconds:g} s")


def _expand(gens: np.ndarray, costs: np.ndarray, length: int,
            first: Sequence[int] | None = None) -> tuple[np.ndarray, np.ndarray]:
    """All products of ``length`` generators, index = sum_p w_p G^p."""
    mats = np.array([[1, 0, 0, 1]], dtype=np.int64)
    cost = np.zeros(1, dtype=np.int64)
    for pos in range(length):
        syms = list(first) if (pos == 0 and first is not None) else range(len(gens))
        _guard(gens[list(syms)], mats)
        parts, cparts = [], []
        for s in syms:
            ga, gb, gc, gd = gens[s]
            pa, pb, pc, pd = mats.T
            parts.append(np.stack([ga * pa + gb * pc, ga * pb + gb * pd,
                                   gc * pa + gd * pc, gc * pb + gd * pd], axis=1))
            cparts.append(cost + costs[s])
        mats = np.concatenate(parts)
        cost = np.concatenate(cparts)
    return mats, cost


def _guard(left: np.ndarray, right: np.ndarray) -> None:
    if left.size == 0 or right.size == 0:
        return
    if 2 * int(np.abs(left).max()) * int(np.abs(right).max()) >= INT64_SAFE:
        raise ResourceLimitError("matrix entries would overflow int64; reduce word length")


@dataclass
class Chunk:
    index: int
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    cost: np.ndarray


class Enumeration:
    """All words of length k over ``gens`` (an (G, 4) int array of row-major matrices).

    ``costs`` is an additive integer statistic per generator (e.g. m + n for
    block symbols); each chunk carries its per-word total. ``first`` restricts
    the symbol at position 0.
    """

    def __init__(self, gens, k: int, costs=None, first: Sequence[int] | None = None,
                 chunk_target: int = DEFAULT_CHUNK, max_words: int | None = None):
        self.gens = np.asarray(gens, dtype=np.int64).reshape(-1, 4)
        self.G = len(self.gens)
        self.k = int(k)
        if self.k < 1:
            raise ValueError("word length must be >= 1")
        self.costs = (np.zeros(self.G, dtype=np.int64) if costs is None
                      else np.asarray(costs, dtype=np.int64))
        self.first = None if first is None else list(first)
        n_first = self.G if first is None else len(self.first)
        self.n_words = n_first * self.G ** (self.k - 1)
        if max_words is not None and self.n_words > max_words:
            raise ResourceLimitError(
                f"{self.n_words} words exceed the enumeration budget of {max_words}")
        a = 1
        while a < self.k and n_first * self.G**a <= chunk_target:
            a += 1
        self.a = a
        self.heads, self.head_cost = _expand(self.gens, self.costs, a, self.first)
        self.tails, self.tail_cost = _expand(self.gens, self.costs, self.k - a)
        _guard(self.tails, self.heads)

    @property
    def n_chunks(self) -> int:
        return len(self.tails)

    def chunk(self, j: int) -> Chunk:
        ta, tb, tc, td = (int(v) for v in self.tails[j])
        ha, hb, hc, hd = self.heads.T
        return Chunk(j, ta * ha + tb * hc, ta * hb + tb * hd,
                     tc * ha + td * hc, tc * hb + td * hd,
                     self.head_cost + self.tail_cost[j])

    def slot_symbols(self, pos: int, j: int):
        """Generator index at word position ``pos`` for every word of chunk j."""
        if pos < self.a:
            n0 = len(self.first) if self.first is not None else self.G
            if pos == 0:
                idx = np.arange(len(self.heads)) % n0
                return idx if self.first is None else np.asarray(self.first)[idx]
            idx = np.arange(len(self.heads)) // n0
            return (idx // self.G ** (pos - 1)) % self.G
        return (j // self.G ** (pos - self.a)) % self.G

    def map(self, fn: Callable[[Chunk], R], threads: int = 1,
            budget: Budget | None = None) -> list[R]:
        def run(j: int) -> R:
            if budget is not None:
                budget.check("enumeration")
            return fn(self.chunk(j))

        if threads <= 1 or self.n_chunks == 1:
            return [run(j) for j in range(self.n_chunks)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run, range(self.n_chunks)))
