"""Exact 2x2 integer matrices, words over {1, 2}, block words and operator norms.

Products are formed in exact Python integers. Only the final norm is turned
into a float-like value, with an explicit rounding direction so that lower and
upper certificates can round outward.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Literal, NamedTuple, Sequence

import mpmath
import numpy as np
from mpmath.libmp import (from_int, mpf_add, mpf_log, mpf_shift, mpf_sqrt,
                          round_ceiling, round_floor, round_nearest, to_float)

from .errors import InvalidInputError
from .rounding import UNIT

Rounding = Literal["nearest", "outward-lower", "outward-upper"]

_RND = {"nearest": round_nearest, "outward-lower": round_floor,
        "outward-upper": round_ceiling}

# working precision (bits) of the scalar norm path
NORM_PREC = 113


@dataclass(frozen=True)
class Mat2:
    """Row-major 2x2 matrix [[a, b], [c, d]] with exact integer entries."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for v in (self.a, self.b, self.c, self.d):
            if not isinstance(v, (int, np.integer)) or isinstance(v, bool):
                raise InvalidInputError(f"Mat2 entries must be integers, got {v!r}")
        # normalise numpy integers to Python ints (arbitrary precision)
        for name in "abcd":
            object.__setattr__(self, name, int(getattr(self, name)))

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1, 0, 0, 1)

    def __matmul__(self, o: "Mat2") -> "Mat2":
        return Mat2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                    self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def __pow__(self, k: int) -> "Mat2":
        if k < 0:
            raise InvalidInputError("negative powers are not supported")
        out, base = Mat2.identity(), self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def apply(self, x: int, y: int) -> tuple[int, int]:
        return self.a * x + self.b * y, self.c * x + self.d * y

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def frobenius_sq(self) -> int:
        return self.a**2 + self.b**2 + self.c**2 + self.d**2

    def flip(self) -> "Mat2":
        """Conjugate by the coordinate swap J: J M J."""
        return Mat2(self.d, self.c, self.b, self.a)

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def tolist(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]


A1 = Mat2(1, 0, 1, 1)
A2 = Mat2(1, 1, 0, 1)
GENERATORS = {1: A1, 2: A2}


@dataclass(frozen=True)
class Word:
    """Finite word i_0 ... i_{n-1} over the alphabet {1, 2}."""

    symbols: tuple[int, ...] = ()

    def __post_init__(self):
        syms = tuple(int(s) for s in self.symbols)
        bad = [s for s in syms if s not in (1, 2)]
        if bad:
            raise InvalidInputError(f"symbols must be 1 or 2, got {bad[0]!r}")
        object.__setattr__(self, "symbols", syms)

    @classmethod
    def parse(cls, text: str) -> "Word":
        if any(ch not in "12" for ch in text):
            raise InvalidInputError(f"word {text!r} contains symbols outside {{1, 2}}")
        return cls(tuple(int(ch) for ch in text))

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __str__(self) -> str:
        return "".join(map(str, self.symbols))

    def swap(self) -> "Word":
        return Word(tuple(3 - s for s in self.symbols))


@dataclass(frozen=True)
class BlockWord:
    """Alternating run lengths ((i_1, j_1), ..., (i_k, j_k)), i.e. 1^{i_1} 2^{j_1} ... 1^{i_k} 2^{j_k}."""

    blocks: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        blocks = tuple((int(i), int(j)) for i, j in self.blocks)
        for i, j in blocks:
            if i < 1 or j < 1:
                raise InvalidInputError(f"block lengths must be >= 1, got {(i, j)}")
        object.__setattr__(self, "blocks", blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def to_word(self) -> Word:
        out: list[int] = []
        for i, j in self.blocks:
            out += [1] * i + [2] * j
        return Word(tuple(out))

    def product(self) -> Mat2:
        out = Mat2.identity()
        for i, j in self.blocks:
            out = block_matrix(i, j) @ out
        return out

    @property
    def return_times(self) -> tuple[int, ...]:
        return tuple(i + j for i, j in self.blocks)


class BlockDecomposition(NamedTuple):
    leading: int    # length of a leading run of 2s (0 if the word starts with 1)
    blocks: BlockWord
    trailing: int   # length of a trailing run of 1s (0 if the word ends with 2)

    def product(self) -> Mat2:
        return A1**self.trailing @ self.blocks.product() @ A2**self.leading


def _as_word(w: Word | str | Iterable[int]) -> Word:
    if isinstance(w, Word):
        return w
    if isinstance(w, str):
        return Word.parse(w)
    return Word(tuple(w))


def word_product(w: Word | str | Iterable[int]) -> Mat2:
    """A_{i_{n-1}} ... A_{i_0}; later symbols multiply on the left."""
    out = Mat2.identity()
    for s in _as_word(w):
        out = GENERATORS[s] @ out
    return out


class NormValue:
    """A nonnegative real held at ``NORM_PREC`` bits, rounded in a stated direction."""

    __slots__ = ("_raw", "rounding")

    def __init__(self, raw, rounding: Rounding):
        self._raw = raw
        self.rounding = rounding

    @property
    def value(self) -> mpmath.mpf:
        return mpmath.mp.make_mpf(self._raw)

    def __float__(self) -> float:
        return to_float(self._raw, rnd=_RND[self.rounding])

    def log(self) -> float:
        """log of the value as a float, rounded in the same direction."""
        return to_float(mpf_log(self._raw, 60, _RND[self.rounding]), rnd=_RND[self.rounding])

    def __repr__(self) -> str:
        return f"NormValue({mpmath.nstr(self.value, 20)}, {self.rounding!r})"

    # comparisons are exact on the held binary value
    def __le__(self, other) -> bool:
        return self.value <= _cmp_value(other)

    def __ge__(self, other) -> bool:
        return self.value >= _cmp_value(other)

    def __lt__(self, other) -> bool:
        return self.value < _cmp_value(other)

    def __gt__(self, other) -> bool:
        return self.value > _cmp_value(other)


def _cmp_value(other):
    return other.value if isinstance(other, NormValue) else other


def operator_norm(m: Mat2, rounding: Rounding = "nearest") -> NormValue:
    """Spectral norm of an integer 2x2 matrix.

    Uses sigma^2 = (F + sqrt(F^2 - 4 det^2)) / 2 with F the exact squared
    Frobenius norm; for unimodular matrices this is (F + sqrt(F^2 - 4)) / 2.
    Each square root and addition is rounded in the requested direction.
    """
    if rounding not in _RND:
        raise InvalidInputError(f"unknown rounding {rounding!r}")
    rnd = _RND[rounding]
    F = m.frobenius_sq
    disc = F * F - 4 * m.det**2
    root = mpf_sqrt(from_int(disc), NORM_PREC, rnd)
    sq = mpf_shift(mpf_add(from_int(F), root, NORM_PREC, rnd), -1)
    return NormValue(mpf_sqrt(sq, NORM_PREC, rnd), rounding)


def norm_exceeds(m: Mat2, bound: int) -> bool:
    """Exact test of ||m|| >= bound for integer bound >= 0 (no rounding)."""
    # ||m||^2 >= B^2  <=>  sqrt(F^2 - 4 det^2) >= 2 B^2 - F
    F, lhs = m.frobenius_sq, 2 * bound * bound - m.frobenius_sq
    return lhs <= 0 or F * F - 4 * m.det**2 >= lhs * lhs


def norm_at_most(m: Mat2, bound_sq: int) -> bool:
    """Exact test of ||m||^2 <= bound_sq for an integer bound_sq >= 0."""
    F = m.frobenius_sq
    rhs = 2 * bound_sq - F
    return rhs >= 0 and F * F - 4 * m.det**2 <= rhs * rhs


def column_norm_dominates(m: Mat2) -> bool:
    """Exact test of 2 ||m e_1||^2 >= ||m||^2."""
    return not norm_exceeds_sq(m, 2 * (m.a**2 + m.c**2), strict=True)


def norm_exceeds_sq(m: Mat2, bound_sq: int, strict: bool = False) -> bool:
    """Exact test of ||m||^2 >= bound_sq (or > with ``strict``)."""
    F = m.frobenius_sq
    lhs = 2 * bound_sq - F
    disc = F * F - 4 * m.det**2
    if strict:
        return lhs < 0 or disc > lhs * lhs
    return lhs <= 0 or disc >= lhs * lhs


class PowerNorm(NamedTuple):
    exact: NormValue
    upper: float
    squared: float  # (n^2 + 2 + n sqrt(n^2 + 4)) / 2, the square of ``exact``


def power_norm(n: int) -> PowerNorm:
    """||A_1^n|| = ||A_2^n|| together with the elementary bound n + 1/n."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidInputError(f"power_norm needs n >= 1, got {n!r}")
    n = int(n)
    exact = operator_norm(Mat2(1, 0, n, 1))
    squared = (n * n + 2 + n * math.sqrt(n * n + 4)) / 2
    return PowerNorm(exact, n + 1 / n, squared)


def block_matrix(m: int, n: int) -> Mat2:
    """A_2^n A_1^m = [[1 + mn, n], [m, 1]]."""
    if m < 1 or n < 1:
        raise InvalidInputError(f"block lengths must be >= 1, got {(m, n)}")
    return Mat2(1 + m * n, n, m, 1)


def block_decompose(w: Word | str | Iterable[int]) -> BlockDecomposition:
    """Run-length encode w into (leading 2-run, alternating blocks, trailing 1-run)."""
    runs = [(s, len(list(g))) for s, g in itertools.groupby(_as_word(w))]
    leading = trailing = 0
    if runs and runs[0][0] == 2:
        leading = runs.pop(0)[1]
    if runs and runs[-1][0] == 1:
        trailing = runs.pop()[1]
    blocks = tuple((runs[k][1], runs[k + 1][1]) for k in range(0, len(runs), 2))
    return BlockDecomposition(leading, BlockWord(blocks), trailing)


def block_product_lower_bound(b: BlockWord) -> int:
    """prod (1 + i_l j_l), a lower bound for ||A_I|| of the block word."""
    if len(b) == 0:
        raise InvalidInputError("block word must be nonempty")
    return math.prod(1 + i * j for i, j in b)


class AlmostAdditivity(NamedTuple):
    joint: float
    product: float
    ratio: float


def almost_additivity_ratio(blocks: BlockWord | Sequence[tuple[int, int]], split: int) -> AlmostAdditivity:
    """Compare ||B_k...B_1|| with ||B_k...B_{s+1}|| * ||B_s...B_1|| for s = split."""
    if not isinstance(blocks, BlockWord):
        blocks = BlockWord(tuple(blocks))
    k = len(blocks)
    if not 1 <= split < k:
        raise InvalidInputError(f"split must lie in [1, {k - 1}], got {split}")
    head = BlockWord(blocks.blocks[:split]).product()
    tail = BlockWord(blocks.blocks[split:]).product()
    joint = operator_norm(tail @ head).value
    prod = operator_norm(tail).value * operator_norm(head).value
    return AlmostAdditivity(float(joint), float(prod), float(joint / prod))


ALMOST_ADDITIVITY_CONSTANT = 1 / (2 * math.sqrt(2))

# relative error bound of ``bulk_norms``; see its docstring
BULK_NORM_PAD = 32 * UNIT


def bulk_norms(a, b, c, d) -> np.ndarray:
    """Float64 spectral norms of many nonnegative matrices.

    sigma_max = (hypot(a + d, c - b) + hypot(a - d, b + c)) / 2. Every
    intermediate absolute error is a few ulp of an entry, and entries are
    bounded by sigma_max, so the relative error stays below 8 ulp; callers pad
    by ``BULK_NORM_PAD`` (32 ulp).
    """
    a, b, c, d = (np.asarray(v, dtype=np.float64) for v in (a, b, c, d))
    return 0.5 * (np.hypot(a + d, c - b) + np.hypot(a - d, b + c))
