"""Independent high-precision reference values.

Nothing here imports the package. Both series are rewritten as rapidly
convergent binomial expansions in Riemann zeta values:

    sum_n (n + 1/n)^t       = 2^t + sum_k C(t, k) (zeta(2k - t) - 1)
    sum_{i,j} (1 + ij)^t    = 2^t + sum_k C(t, k) (zeta(k - t)^2 - 1)

(expand (1 + x)^t with x = 1/n^2 or 1/(ij) <= 1/2 away from the first
term). Direct nsum extrapolation of the raw series is not accurate enough
here: the terms decay like n^-1.8. Matrices use plain integer arithmetic.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import mpmath

DPS = 30

# frozen from this module at 30 digits
T_STAR = "-2.174490920825595160061"
T_PRIME = "-1.820622088509217009540"


def pair_series(t) -> mpmath.mpf:
    """sum over i, j >= 1 of (1 + ij)^t."""
    with mpmath.workdps(DPS):
        t = mpmath.mpf(t)
        return 2**t + mpmath.nsum(lambda k: mpmath.binomial(t, k) * (mpmath.zeta(k - t) ** 2 - 1),
                                  [0, mpmath.inf])


def power_series(t) -> mpmath.mpf:
    """sum over n >= 1 of (n + 1/n)^t."""
    with mpmath.workdps(DPS):
        t = mpmath.mpf(t)
        return 2**t + mpmath.nsum(lambda k: mpmath.binomial(t, k) * (mpmath.zeta(2 * k - t) - 1),
                                  [0, mpmath.inf])


@lru_cache(maxsize=None)
def t_star() -> mpmath.mpf:
    with mpmath.workdps(DPS):
        return mpmath.findroot(lambda t: pair_series(t) - 1, (-2.18, -2.17), solver="anderson")


@lru_cache(maxsize=None)
def t_prime() -> mpmath.mpf:
    with mpmath.workdps(DPS):
        return mpmath.findroot(lambda t: power_series(t) - 1, (-1.83, -1.82), solver="anderson")


A1 = ((1, 0), (1, 1))
A2 = ((1, 1), (0, 1))


def matmul(x, y):
    return ((x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]),
            (x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]))


def product(word):
    """A_{w_n} ... A_{w_1}: later symbols multiply on the left."""
    m = ((1, 0), (0, 1))
    for s in word:
        m = matmul(A1 if s == 1 else A2, m)
    return m


def norm(m) -> mpmath.mpf:
    """Largest singular value from the characteristic polynomial of M^T M."""
    with mpmath.workdps(DPS):
        (a, b), (c, d) = m
        f = mpmath.mpf(a * a + b * b + c * c + d * d)
        det = mpmath.mpf(a * d - b * c)
        return mpmath.sqrt((f + mpmath.sqrt(f * f - 4 * det * det)) / 2)


def partition_sum(n: int, t) -> mpmath.mpf:
    """s_n(t) = sum of ||A_w||^t over all 2^n words, by brute force."""
    with mpmath.workdps(DPS):
        return mpmath.fsum(norm(product(w)) ** t for w in itertools.product((1, 2), repeat=n))


def block(m: int, n: int):
    """A2^n A1^m."""
    return product((1,) * m + (2,) * n)


def log2() -> float:
    return math.log(2.0)
