import mpmath
import pytest

import oracles
from paracocycle.errors import DivergenceError, InvalidInputError, PrecisionError
from paracocycle.series import (SeriesKind, series_bracket, series_value, solve_t_prime,
                                solve_t_star, t_prime_bracket, t_star_bracket)


@pytest.mark.parametrize("t", [-3.0, -2.5, -2.17449])
def test_pair_series_contains_oracle(t):
    sb = series_value(SeriesKind.ONE_PLUS_IJ, t)
    assert sb.total.lo <= oracles.pair_series(t) <= sb.total.hi


@pytest.mark.parametrize("t", [-3.0, -2.0, -1.8206, -1.5])
def test_power_series_contains_oracle(t):
    sb = series_value(SeriesKind.N_PLUS_INV, t)
    assert sb.total.lo <= oracles.power_series(t) <= sb.total.hi


def test_pair_series_minus_three_digits():
    sb = series_value(SeriesKind.ONE_PLUS_IJ, -3.0)
    assert sb.total.lo <= 0.30556588372384 <= sb.total.hi
    assert sb.total.width < 1e-8


def test_tails_are_nonnegative_and_shrink():
    a = series_bracket(SeriesKind.ONE_PLUS_IJ, -2.5, 100)
    b = series_bracket(SeriesKind.ONE_PLUS_IJ, -2.5, 400)
    assert 0 <= a.tail_lo <= a.tail_hi
    assert b.total.width < a.total.width
    assert b.total.lo <= a.total.hi and a.total.lo <= b.total.hi


def test_divergence_and_validation():
    with pytest.raises(DivergenceError):
        series_bracket(SeriesKind.N_PLUS_INV, -1.0, 100)
    with pytest.raises(InvalidInputError):
        series_bracket(SeriesKind.N_PLUS_INV, -2.0, 1)
    with pytest.raises(ValueError):
        series_bracket("nonsense", -2.0, 100)


def test_t_star_bracket():
    r = solve_t_star(1e-6)
    assert r.width <= 1e-6
    assert -2.18 < r.lower < r.upper < -2.17
    assert r.value_at_lower.hi < 1 < r.value_at_upper.lo
    ref = mpmath.mpf(oracles.T_STAR)
    assert r.lower < ref < r.upper
    assert abs(r.lower - ref) <= 1e-6 and abs(r.upper - ref) <= 1e-6


def test_t_prime_bracket():
    r = solve_t_prime(1e-6)
    assert r.width <= 1e-6
    assert -1.83 < r.lower < r.upper < -1.82
    ref = mpmath.mpf(oracles.T_PRIME)
    assert r.lower < ref < r.upper


def test_root_endpoints_straddle_under_oracle():
    s, p = t_star_bracket(), t_prime_bracket()
    assert oracles.pair_series(s.lo) < 1 < oracles.pair_series(s.hi)
    assert oracles.power_series(p.lo) < 1 < oracles.power_series(p.hi)


def test_tighter_tolerance_nests():
    wide, tight = solve_t_star(1e-4), solve_t_star(1e-8)
    assert wide.lower <= tight.lower < tight.upper <= wide.upper
    assert tight.width <= 1e-8


def test_tolerance_validation():
    with pytest.raises(InvalidInputError):
        solve_t_star(0.0)
    with pytest.raises(PrecisionError):
        solve_t_star(1e-15)


@pytest.mark.slow
def test_oracle_roots_rederive_frozen_digits():
    with mpmath.workdps(30):
        assert abs(oracles.t_star() - mpmath.mpf(oracles.T_STAR)) < 1e-20
        assert abs(oracles.t_prime() - mpmath.mpf(oracles.T_PRIME)) < 1e-20
