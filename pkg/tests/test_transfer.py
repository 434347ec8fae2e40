import math

import numpy as np
import pytest

from paracocycle.errors import ConvergenceError
from paracocycle.transfer import (ProjectiveGrid, block_action, eigen_data, extrapolated_log_lambda,
                                  symbol_weights, transfer_eigenvalue)


def test_grid_refinement_keeps_nodes():
    g = ProjectiveGrid(64)
    r = g.refined()
    assert len(r.slopes) == 2 * len(g.slopes) - 1
    assert np.all(np.isin(g.slopes, r.slopes))
    assert g.slopes[0] == 0.0 and g.slopes[-1] == 1.0


def test_block_action_maps_into_cone():
    a = block_action(-2.0, 5, ProjectiveGrid(128))
    assert np.all((a.image >= 0) & (a.image <= 1))
    assert np.all(a.weight > 0)


@pytest.mark.parametrize("N", [1, 3, 7])
def test_t_zero_eigenvalue_counts_symbols(N):
    # at t = 0 every weight is 1 and constants are eigenfunctions
    r = transfer_eigenvalue(0.0, N, ProjectiveGrid(64))
    assert r.log_lambda == pytest.approx(2 * math.log(N), abs=1e-12)
    assert r.report.converged


def test_discount_factorizes_at_t_zero():
    P, N = 0.3, 6
    r = transfer_eigenvalue(0.0, N, ProjectiveGrid(64), P=P)
    ref = 2 * math.log(sum(math.exp(-m * P) for m in range(1, N + 1)))
    assert r.log_lambda == pytest.approx(ref, abs=1e-12)


def test_eigenvalue_monotone_in_t_and_N():
    g = ProjectiveGrid(256)
    a = transfer_eigenvalue(-2.2, 10, g).log_lambda
    b = transfer_eigenvalue(-2.0, 10, g).log_lambda
    c = transfer_eigenvalue(-2.0, 20, g).log_lambda
    assert a < b < c


def test_grid_convergence():
    coarse = transfer_eigenvalue(-1.9, 8, ProjectiveGrid(512)).log_lambda
    fine = transfer_eigenvalue(-1.9, 8, ProjectiveGrid(2048)).log_lambda
    assert abs(coarse - fine) < 1e-4


def test_symbol_weights_form_distribution():
    w = symbol_weights(eigen_data(-2.0, 6, ProjectiveGrid(256)))
    assert w.shape == (36,)
    assert np.all(w > 0)
    assert math.fsum(w) == pytest.approx(1.0, abs=1e-14)
    # block (1, 1) carries the most mass
    assert w.argmax() == 0


def test_power_iteration_budget():
    with pytest.raises(ConvergenceError) as info:
        transfer_eigenvalue(-2.0, 6, ProjectiveGrid(256), tol=1e-15, max_iter=2)
    assert info.value.residual is not None


def test_extrapolation_moves_toward_larger_N():
    g = ProjectiveGrid(512)
    e = extrapolated_log_lambda(-2.0, (20, 40), g)
    assert e > transfer_eigenvalue(-2.0, 40, g).log_lambda
