import pytest

from paracocycle.curve import Regime, pressure_bracket, regime_of, t_grid
from paracocycle.errors import InvalidInputError
from paracocycle.pressure import LOG2, Method
from paracocycle.rounding import Bracket
from paracocycle.suites import SUITE_ALIASES, SUITES, run_suite


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suites_pass_small(name):
    r = run_suite(name, trials=300, seed=11)
    assert r.passed, r.counterexample


def test_aliases_resolve():
    for alias, name in SUITE_ALIASES.items():
        assert run_suite(alias, trials=5).suite == name
    with pytest.raises(InvalidInputError):
        run_suite("nope")


def test_swap_is_exhaustive():
    assert run_suite("swap").trials == 2**13 - 2


def test_regimes():
    tc = Bracket(-2.17, -1.96)
    assert regime_of(-2.5, tc) is Regime.FROZEN
    assert regime_of(-2.0, tc) is Regime.WINDOW
    assert regime_of(-1.0, tc) is Regime.POSITIVE


def test_t_grid_hits_zero():
    g = t_grid(-1.0, 1.0, 0.1)
    assert len(g) == 21 and 0.0 in g and g[-1] == 1.0


def test_pressure_bracket_combined():
    frozen = pressure_bracket(-3.0, 10)
    assert frozen.lower == frozen.upper == 0.0
    assert frozen.method is Method.INDUCED_FEKETE
    positive = pressure_bracket(-1.5, 10)
    assert 0.12 < positive.lower < positive.estimate < positive.upper < 0.2
    assert pressure_bracket(0.0, 4).lower == LOG2
    up = pressure_bracket(1.0, 12, induced=False)
    assert up.lower == LOG2 < up.upper
