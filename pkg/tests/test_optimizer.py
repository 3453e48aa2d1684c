import numpy as np
import pytest

from latdisc.discrimination import analytic_subspace_optimum, beta_bound, build_E0, e0_matrix
from latdisc.linalg import is_psd
from latdisc.optimizer import (
    bound_disagreements,
    e0_min_eigenvalues,
    grid_search_optimum,
    identification_rates,
    verify_piecewise,
)
from latdisc.states import Priors


def test_identification_rates():
    r1, r2 = identification_rates()
    assert r1 == pytest.approx(1 / 3, abs=1e-15)
    assert r2 == pytest.approx(1 / 3, abs=1e-15)


def test_grid_equal_priors():
    res = grid_search_optimum(Priors(0.5), 10_000)
    assert abs(res.best_probability - 2 / 9) <= 1e-6
    assert abs(res.best_alpha - 2 / 3) <= 2e-4
    assert res.best_beta <= beta_bound(res.best_alpha) + 1e-12


def test_grid_low_prior():
    res = grid_search_optimum(Priors(0.1), 10_000)
    assert res.best_alpha == pytest.approx(0, abs=1e-3)
    assert res.best_beta == pytest.approx(1, abs=1e-3)
    assert res.best_probability == pytest.approx(0.3, abs=1e-6)


def test_grid_certain_prior():
    res = grid_search_optimum(Priors(1.0), 10_000)
    assert res.best_alpha == 1.0
    assert res.best_probability == pytest.approx(1 / 3, abs=1e-12)


@pytest.mark.parametrize("eta1", [0.0, 0.15, 0.2, 0.35, 0.5, 0.8, 0.9])
def test_full_scan_agrees_with_bound_scan(eta1):
    priors = Priors(eta1)
    full = grid_search_optimum(priors, 300, mode="full")
    exact = analytic_subspace_optimum(priors).probability
    assert full.best_probability <= exact + 1e-12
    assert exact - full.best_probability <= 10 / 300
    assert is_psd(build_E0(full.best_alpha, full.best_beta))


def test_full_scan_independent_of_worker_count():
    one = grid_search_optimum(Priors(0.43), 200, mode="full", workers=1)
    many = grid_search_optimum(Priors(0.43), 200, mode="full", workers=7)
    assert one == many


def test_tie_break_prefers_smallest_alpha():
    # eta1 = 0: objective depends on beta only, so every alpha with beta_bound >= 1 ties
    res = grid_search_optimum(Priors(0.0), 101, mode="full")
    assert res.best_alpha == 0.0 and res.best_beta == 1.0


def test_unknown_mode():
    with pytest.raises(ValueError):
        grid_search_optimum(Priors(0.5), 100, mode="random")


def test_verify_piecewise_sweep():
    rep = verify_piecewise(10_000, 101)
    assert rep.max_deviation <= 1e-3
    assert rep.max_excess <= 1e-12
    assert rep.passed


def test_verify_piecewise_includes_thresholds_without_spike():
    etas = np.linspace(0, 1, 101)
    assert 0.2 in etas and 0.8 in etas
    for eta1 in (0.2, 0.8):
        grid = grid_search_optimum(Priors(eta1), 10_000).best_probability
        assert abs(grid - analytic_subspace_optimum(Priors(eta1)).probability) <= 1e-6


def test_verify_piecewise_single_sample_is_equal_priors():
    rep = verify_piecewise(10_000, 1)
    single = grid_search_optimum(Priors(0.5), 10_000)
    assert rep.worst_eta1 == 0.5
    assert rep.max_deviation == pytest.approx(abs(single.best_probability - 2 / 9), abs=1e-15)


def test_coarse_resolution_bound():
    rep = verify_piecewise(100, 21)
    assert rep.tolerance == pytest.approx(0.1)
    assert rep.passed


def test_eigenvalue_grid_matches_per_matrix_eigenvalues():
    alphas = np.linspace(0, 1, 7)
    betas = np.linspace(0, 1, 5)
    got = e0_min_eigenvalues(alphas, betas)
    for i, a in enumerate(alphas):
        for j, b in enumerate(betas):
            assert got[i, j] == pytest.approx(np.linalg.eigvalsh(e0_matrix(a, b))[0], abs=1e-14)


def test_psd_test_agrees_with_bound_everywhere_on_grid():
    assert bound_disagreements(500) == 0


def test_faulty_inconclusive_element_is_detected():
    assert bound_disagreements(100, e0=lambda a, b: e0_matrix(a, -b)) > 0
