"""Brute-force grid search over the kernel-supported measurement family on H1.

This is the oracle for the closed-form optimum in :mod:`latdisc.discrimination`.
The success probability is evaluated from traces against the reduced states,
not from the closed form, and feasibility in the 2-D mode comes from the
eigenvalues of the inconclusive element rather than from the analytic bound.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .discrimination import (
    analytic_subspace_optimum,
    beta_bound,
    e0_matrix,
    kernel_kets,
    reduced_problem,
)
from .linalg import PSD_TOL, projector
from .states import Priors

DEFAULT_RESOLUTION = 10_000
DEFAULT_RESOLUTION_2D = 500
BOUND_BAND = 1e-6


@dataclass(frozen=True)
class GridSearchResult:
    best_alpha: float
    best_beta: float
    best_probability: float
    resolution: int
    mode: str = "bound"


def identification_rates() -> tuple[float, float]:
    """``Tr(rho'_1 P1)`` and ``Tr(rho'_2 P2)`` for unit-weight identify elements on H1."""
    problem = reduced_problem(1, np.pi / 2)
    first, second = kernel_kets(1)
    rate_1 = np.trace(problem.rho_a @ projector(first)).real
    rate_2 = np.trace(problem.rho_b @ projector(second)).real
    return float(rate_1), float(rate_2)


def e0_min_eigenvalues(alphas, betas, e0=e0_matrix) -> np.ndarray:
    """Smallest eigenvalue of the inconclusive element on the grid ``alphas x betas``."""
    alphas = np.asarray(alphas, dtype=float)
    betas = np.asarray(betas, dtype=float)
    mats = np.empty((alphas.size, betas.size, 3, 3), dtype=complex)
    # the element is affine in beta
    for i, a in enumerate(alphas):
        base = e0(a, 0.0)
        mats[i] = base + betas[:, None, None] * (e0(a, 1.0) - base)
    return np.linalg.eigvalsh(mats)[..., 0]


def _best_on_rows(alphas, betas, probs, feasible):
    """Maximum over feasible nodes; ties go to the smallest alpha, then smallest beta."""
    masked = np.where(feasible, probs, -np.inf)
    flat = int(np.argmax(masked))  # argmax returns the first maximum in row-major order
    i, j = np.unravel_index(flat, masked.shape)
    return float(masked[i, j]), int(i), int(j)


def grid_search_optimum(
    priors: Priors,
    resolution: int = DEFAULT_RESOLUTION,
    mode: str = "bound",
    workers: int = 1,
    e0=e0_matrix,
) -> GridSearchResult:
    """Maximise the H1 success probability over a grid of ``(alpha, beta)``.

    ``mode="bound"`` scans ``resolution`` values of alpha with beta pinned at
    ``min(1, beta_bound(alpha))``, which is optimal for fixed alpha because the
    objective increases with beta. ``mode="full"`` scans a
    ``resolution x resolution`` grid and keeps the nodes whose inconclusive
    element passes the eigenvalue PSD test; it does not rely on that argument.
    """
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    rate_1, rate_2 = identification_rates()
    alphas = np.linspace(0.0, 1.0, resolution)

    if mode == "bound":
        betas = np.minimum(1.0, beta_bound(alphas))
        probs = priors.eta1 * rate_1 * alphas + priors.eta2 * rate_2 * betas
        i = int(np.argmax(probs))
        return GridSearchResult(float(alphas[i]), float(betas[i]), float(probs[i]), resolution, mode)

    if mode != "full":
        raise ValueError(f"unknown mode {mode!r}")

    betas = np.linspace(0.0, 1.0, resolution)
    chunks = np.array_split(np.arange(resolution), max(1, min(workers, resolution)))

    def scan(rows):
        min_eigs = e0_min_eigenvalues(alphas[rows], betas, e0)
        probs = (
            priors.eta1 * rate_1 * alphas[rows, None]
            + priors.eta2 * rate_2 * betas[None, :]
        )
        best, i, j = _best_on_rows(alphas[rows], betas, probs, min_eigs >= -PSD_TOL)
        return best, int(rows[i]), j

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(scan, chunks))
    else:
        results = [scan(rows) for rows in chunks]
    # chunks are in ascending alpha order, so a strict ">" keeps the smallest-alpha tie
    best, i, j = results[0]
    for cand in results[1:]:
        if cand[0] > best:
            best, i, j = cand
    return GridSearchResult(float(alphas[i]), float(betas[j]), float(best), resolution, mode)


@dataclass(frozen=True)
class PiecewiseReport:
    max_deviation: float
    worst_eta1: float
    max_excess: float
    tolerance: float
    eta_samples: int

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance and self.max_excess <= 1e-12


def eta_grid(eta_samples: int) -> np.ndarray:
    if eta_samples < 1:
        raise ValueError(f"eta_samples must be >= 1, got {eta_samples}")
    if eta_samples == 1:
        return np.array([0.5])
    return np.linspace(0.0, 1.0, eta_samples)


def verify_piecewise(
    resolution: int = DEFAULT_RESOLUTION,
    eta_samples: int = 101,
    mode: str = "bound",
    workers: int = 1,
    e0=e0_matrix,
) -> PiecewiseReport:
    """Compare the grid optimum with the closed-form optimum across a sweep of priors.

    ``max_excess`` is how far the grid ever climbs above the closed form; it
    must stay at roundoff since the closed form is a true upper bound.
    """
    worst, worst_eta, excess = 0.0, float("nan"), -np.inf
    for eta1 in eta_grid(eta_samples):
        priors = Priors(eta1)
        grid = grid_search_optimum(priors, resolution, mode=mode, workers=workers, e0=e0)
        exact = analytic_subspace_optimum(priors).probability
        dev = abs(grid.best_probability - exact)
        excess = max(excess, grid.best_probability - exact)
        if dev > worst or np.isnan(worst_eta):
            worst, worst_eta = dev, float(eta1)
    return PiecewiseReport(worst, worst_eta, float(excess), 10.0 / resolution, eta_samples)


def bound_disagreements(resolution: int = DEFAULT_RESOLUTION_2D, e0=e0_matrix) -> int:
    """Grid nodes where the eigenvalue PSD test contradicts the analytic beta bound.

    Nodes within ``BOUND_BAND`` above the bound are skipped; there the
    eigenvalue is too close to zero for the test to be meaningful.
    """
    alphas = np.linspace(0.0, 1.0, resolution)
    betas = np.linspace(0.0, 1.0, resolution)
    psd = e0_min_eigenvalues(alphas, betas, e0) >= -PSD_TOL
    bound = beta_bound(alphas)[:, None]
    below = betas[None, :] <= bound
    above = betas[None, :] > bound + BOUND_BAND
    return int(np.count_nonzero(below & ~psd) + np.count_nonzero(above & psd))
