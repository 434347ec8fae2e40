import math

import pytest

import oracles
from paracocycle.enumerate import Budget, Enumeration
from paracocycle.errors import InvalidInputError, ResourceLimitError
from paracocycle.pressure import (LOG2, Method, PressureBracket, partition_sum, partition_sums,
                                  pressure_fekete_bounds)
from paracocycle.cocycle import word_product


@pytest.mark.parametrize("n", [1, 2, 5, 8])
@pytest.mark.parametrize("t", [-3.0, -1.0, 0.5, 2.0])
def test_partition_sum_contains_brute_force(n, t):
    s = partition_sum(n, t)
    ref = oracles.partition_sum(n, t)
    assert s.lo <= ref <= s.hi
    assert s.width / s.hi < 1e-11


def test_symmetric_and_full_enumeration_agree():
    for t in (-2.5, 1.3):
        a = partition_sum(10, t, symmetric=True)
        b = partition_sum(10, t, symmetric=False)
        assert a.lo <= b.hi and b.lo <= a.hi


def test_t_zero_is_exact_count():
    assert partition_sum(12, 0.0).as_tuple() == (4096.0, 4096.0)


def test_several_t_match_single_calls():
    ts = [-2.0, -0.5, 1.5]
    for t, b in zip(ts, partition_sums(9, ts)):
        assert b == partition_sum(9, t)


def test_partition_sum_validation():
    with pytest.raises(InvalidInputError):
        partition_sum(0, -1.0)
    with pytest.raises(ResourceLimitError):
        partition_sum(30, -1.0)


def test_anchor_at_zero_is_exactly_log2():
    pb = pressure_fekete_bounds(0.0, 8)
    assert pb.lower == pb.upper == LOG2 == math.log(2.0)
    assert pb.method is Method.EXACT_ANCHOR
    assert all(b.lo == b.hi == LOG2 for b in pb.sequence)


def test_frozen_side_lower_bounds():
    pb = pressure_fekete_bounds(-3.0, 16)
    lows = [b.lo for b in pb.sequence]
    assert all(x <= 0 for x in lows)
    assert all(b > a for a, b in zip(lows, lows[1:]))
    assert pb.lower == lows[-1] and pb.upper == LOG2
    assert pb.estimate >= 0


def test_positive_t_upper_bounds_nonincreasing():
    pb = pressure_fekete_bounds(1.0, 16)
    highs = [b.hi for b in pb.sequence]
    assert all(b <= a for a, b in zip(highs, highs[1:]))
    assert pb.lower == LOG2 and pb.upper == highs[-1]
    # P(1) = log 3 (the transfer estimate agrees); the bound is above it
    assert pb.upper > math.log(3.0)


def test_thread_count_does_not_change_bits():
    one = partition_sums(18, [-2.0, 1.0], threads=1)
    many = partition_sums(18, [-2.0, 1.0], threads=4)
    assert one == many


def test_budget_enforced():
    with pytest.raises(ResourceLimitError):
        partition_sum(22, -1.0, budget=Budget(1e-9))


def test_pressure_bracket_validation():
    with pytest.raises(ValueError):
        PressureBracket(-1.0, 0.5, 0.1, 1, Method.FULLSHIFT_FEKETE)
    with pytest.raises(ValueError):
        PressureBracket(-1.0, 0.1, 0.5, 1, Method.TRANSFER_HEURISTIC)
    PressureBracket(-1.0, -math.inf, math.inf, 1, Method.TRANSFER_HEURISTIC)


def test_enumeration_chunks_cover_all_words():
    gens = [[1, 0, 1, 1], [1, 1, 0, 1]]
    e = Enumeration(gens, 7, chunk_target=8)
    seen = set()
    for j in range(e.n_chunks):
        ch = e.chunk(j)
        for a, b, c, d in zip(ch.a, ch.b, ch.c, ch.d):
            seen.add((int(a), int(b), int(c), int(d)))
    import itertools
    ref = {word_product(w).entries() for w in itertools.product((1, 2), repeat=7)}
    assert seen == ref


def test_enumeration_slot_symbols():
    gens = [[1, 0, 1, 1], [1, 1, 0, 1]]
    e = Enumeration(gens, 6, chunk_target=8)
    for j in range(e.n_chunks):
        ch = e.chunk(j)
        import numpy as np
        syms = [np.broadcast_to(e.slot_symbols(p, j), ch.a.shape) for p in range(6)]
        for w in range(len(ch.a)):
            word = [int(syms[p][w]) + 1 for p in range(6)]
            assert word_product(word).entries() == (ch.a[w], ch.b[w], ch.c[w], ch.d[w])


def test_enumeration_word_budget():
    with pytest.raises(ResourceLimitError):
        Enumeration([[1, 0, 1, 1], [1, 1, 0, 1]], 20, max_words=1000)
