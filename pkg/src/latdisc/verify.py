"""Composite oracle checks behind ``latdisc verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .discrimination import (
    analytic_subspace_optimum,
    direct_pure_state_success,
    e0_matrix,
    pure_state_success,
    subspace_povm,
    total_povm,
)
from .optimizer import DEFAULT_RESOLUTION_2D, bound_disagreements, eta_grid, verify_piecewise
from .states import Priors, average_state_closed, average_state_quadrature


@dataclass(frozen=True)
class CheckResult:
    name: str
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.deviation <= self.tolerance)


def check_state_equivalence(theta_samples: int = 50, nodes: int = 64) -> CheckResult:
    worst = 0.0
    for theta in np.linspace(0.0, math.pi, theta_samples):
        for which in (1, 2):
            diff = average_state_closed(which, theta) - average_state_quadrature(which, theta, nodes)
            worst = max(worst, float(np.max(np.abs(diff))))
    return CheckResult("state_equivalence", worst, 1e-11)


def check_grid_optimum(resolution: int, eta_samples: int, e0=e0_matrix) -> list[CheckResult]:
    report = verify_piecewise(resolution, eta_samples, e0=e0)
    return [
        CheckResult("grid_vs_analytic", report.max_deviation, report.tolerance),
        CheckResult("grid_upper_bound", max(0.0, report.max_excess), 1e-12),
    ]


def check_bound_agreement(resolution: int = DEFAULT_RESOLUTION_2D, e0=e0_matrix) -> CheckResult:
    return CheckResult("beta_bound_vs_eigenvalues", float(bound_disagreements(resolution, e0)), 0.0)


def check_subspace_element(eta_samples: int, e0=e0_matrix) -> CheckResult:
    """Inconclusive element built from kernel kets against the explicit 3x3 form."""
    worst = 0.0
    for eta1 in eta_grid(eta_samples):
        opt = analytic_subspace_optimum(Priors(eta1))
        for k in (1, 2):
            local = subspace_povm(k, opt.alpha, opt.beta)
            worst = max(worst, float(np.max(np.abs(local.inconclusive - e0(opt.alpha, opt.beta)))))
    return CheckResult("subspace_inconclusive_element", worst, 1e-12)


def check_povms(theta_samples: int = 21, eta_samples: int = 41) -> list[CheckResult]:
    psd = completeness = wrong = identity = 0.0
    thetas = np.linspace(0.0, math.pi, theta_samples)
    for eta1 in np.linspace(0.0, 1.0, eta_samples):
        priors = Priors(eta1)
        povm = total_povm(priors)
        psd = max(psd, -povm.min_eigenvalue())
        completeness = max(completeness, povm.completeness_defect())
        for theta in thetas:
            rho1 = average_state_closed(1, theta)
            rho2 = average_state_closed(2, theta)
            wrong = max(
                wrong,
                abs(np.trace(rho1 @ povm.identify_2)),
                abs(np.trace(rho2 @ povm.identify_1)),
            )
            for phi1, phi2 in ((0.3, 2.1), (1.0, 1.0 + math.pi), (5.5, 0.4)):
                identity = max(
                    identity,
                    abs(
                        direct_pure_state_success(theta, phi1, phi2, priors, povm)
                        - pure_state_success(theta, phi1, phi2, priors)
                    ),
                )
    return [
        CheckResult("povm_positivity", psd, 1e-10),
        CheckResult("povm_completeness", completeness, 1e-12),
        CheckResult("unambiguity", float(wrong), 1e-13),
        CheckResult("pure_state_identity", identity, 1e-12),
    ]


def run_all(
    resolution: int = 10_000,
    eta_samples: int = 101,
    quadrature_nodes: int = 64,
    theta_samples: int = 50,
    inject_fault: bool = False,
) -> list[CheckResult]:
    e0 = e0_matrix
    if inject_fault:
        # sign error on the beta term: the eigenvalue tests must notice
        def e0(alpha, beta):
            return e0_matrix(alpha, -beta)

    return [
        check_state_equivalence(theta_samples, quadrature_nodes),
        *check_grid_optimum(resolution, eta_samples, e0),
        check_bound_agreement(e0=e0),
        check_subspace_element(eta_samples, e0),
        *check_povms(),
    ]
