import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from paracocycle.cocycle import block_decompose, operator_norm, word_product
from paracocycle.errors import InfeasibleError, InvalidInputError
from paracocycle.induced import BlockMeasure
from paracocycle.measures import (build_renewal_spec, entropy_gap, kac_abramov_check,
                                  log_norm_along, mc_lyapunov, mc_lyapunov_stream,
                                  pair_block_certificate, pressure_witness,
                                  pressure_witness_bounds, renewal_entropy,
                                  renewal_lyapunov_bounds, runs_of, sample_blocks, sample_word)
from paracocycle.series import series_value

weights = st.lists(st.floats(1e-3, 1e3), min_size=1, max_size=15)


@given(weights, st.data())
def test_entropy_gap_nonnegative(a, data):
    raw = data.draw(st.lists(st.floats(0, 1), min_size=len(a), max_size=len(a)).filter(
        lambda r: sum(r) > 0))
    p = np.array(raw) / math.fsum(raw)
    p /= math.fsum(p)
    g = entropy_gap(p, a)
    assert g.equality_gap >= 0
    assert g.value <= g.max_value + 1e-12 * max(1.0, abs(g.max_value))


@given(weights)
def test_entropy_gap_equality(a):
    a = np.array(a)
    g = entropy_gap(a / math.fsum(a), a)
    assert g.equality_gap <= 1e-12
    assert abs(g.value - g.max_value) <= 1e-12 * max(1.0, abs(g.max_value))


def test_entropy_gap_validation():
    with pytest.raises(InvalidInputError):
        entropy_gap([0.5, 0.5], [1.0])
    with pytest.raises(InvalidInputError):
        entropy_gap([0.5, 0.6], [1.0, 1.0])
    with pytest.raises(InvalidInputError):
        entropy_gap([1.0, 0.0], [1.0, 0.0])


def test_pair_block_certificate_below_log_partial_sum():
    t, N = -2.0, 8
    i = np.arange(1, N + 1)
    a = (1.0 + np.outer(i, i)) ** t
    best = pair_block_certificate(t, a / a.sum())
    assert best == pytest.approx(math.log(a.sum()), abs=1e-12)
    other = pair_block_certificate(t, BlockMeasure.normalized(np.ones((N, N))))
    assert other < best


@pytest.mark.parametrize("t,N", [(-1.8, 94), (-1.5, 6), (-1.0, 3), (-0.5, 2)])
def test_renewal_spec_minimal_cap(t, N):
    spec = build_renewal_spec(t)
    assert spec.N == N
    assert spec.Q > 1
    k = np.arange(1, N)
    assert math.fsum((k + 1 / k) ** t) <= 1
    assert math.fsum(spec.p) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        spec.p[0] = 0.0


def test_renewal_spec_infeasible_and_invalid():
    with pytest.raises(InfeasibleError):
        build_renewal_spec(-1.9)
    with pytest.raises(InvalidInputError):
        build_renewal_spec(0.5)


def test_infeasibility_agrees_with_series():
    t = -1.8207
    assert series_value("n_plus_inv", t).total.hi <= 1.0
    with pytest.raises(InfeasibleError):
        build_renewal_spec(t)


@pytest.mark.parametrize("t", [-1.8, -1.5, -1.0, -0.5])
def test_witness_positive_and_below_pressure(t):
    spec = build_renewal_spec(t)
    w = pressure_witness_bounds(spec)
    assert 0 < w.lo <= pressure_witness(spec)
    assert w.lo < math.log(2)
    # the witness is h + t chi <= P, with h and the upper exponent bound
    lb = renewal_lyapunov_bounds(spec)
    assert pressure_witness(spec) <= renewal_entropy(spec) / spec.W + t * lb.lower_per_symbol + 1e-12


def test_lyapunov_bracket_ordered():
    lb = renewal_lyapunov_bounds(build_renewal_spec(-1.5))
    assert 0 < lb.lower_per_symbol < lb.upper_per_symbol
    assert lb.block_mass == pytest.approx(2 * lb.pair_mass)


def test_sampling_is_deterministic():
    spec = build_renewal_spec(-1.2)
    assert sample_word(spec, 500, 7) == sample_word(spec, 500, 7)
    assert sample_word(spec, 500, 7) != sample_word(spec, 500, 8)
    f1, l1 = sample_blocks(spec, 100, 3)
    f2, l2 = sample_blocks(spec, 100, 3)
    assert f1 == f2 and np.array_equal(l1, l2)
    assert len(sample_word(spec, 123, 0)) == 123


def test_runs_and_log_norm_match_exact():
    spec = build_renewal_spec(-1.0)
    w = sample_word(spec, 3000, 5)
    first, lengths = runs_of(w)
    assert lengths.sum() == 3000
    exact = operator_norm(word_product(w)).log()
    assert log_norm_along(first, lengths) == pytest.approx(exact, rel=1e-12)
    d = block_decompose(w)
    assert d.product() == word_product(w)


def test_single_run_warns():
    with pytest.warns(RuntimeWarning):
        value, _ = mc_lyapunov_stream(1, [1000])
    assert value == pytest.approx(math.log(1000 + 1 / 1000) / 1000, rel=1e-3)


def test_stream_checkpoints():
    spec = build_renewal_spec(-1.0)
    first, lengths = sample_blocks(spec, 5000, 1)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        value, marks = mc_lyapunov_stream(first, lengths, checkpoints=[100, 1000])
    assert [c for c, _ in marks] == [100, 1000]


def test_mc_inside_analytic_bracket_small():
    spec = build_renewal_spec(-1.0)
    lb = renewal_lyapunov_bounds(spec)
    mc = mc_lyapunov(spec, symbols=200_000, seeds=8)
    assert lb.lower_per_symbol <= mc.estimate <= lb.upper_per_symbol
    assert mc.ci[0] < mc.estimate < mc.ci[1]
    assert mc.symbols >= 200_000


@pytest.mark.parametrize("t", [-1.8, -1.0, -0.3])
def test_kac_abramov(t):
    rep = kac_abramov_check(build_renewal_spec(t), n_pairs=20_000, seed=2)
    assert rep.analytic_error <= 1e-12 * rep.expected
    assert rep.abramov_error <= 1e-15
    assert rep.empirical_ok
