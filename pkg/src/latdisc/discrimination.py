"""Optimal unambiguous discrimination of the phase-averaged inputs.

The averaged inputs split into three invariant blocks. The block spanned by
``|000>, |111>`` carries identical states and is never identified. The blocks
H1 (one excitation) and H2 (two excitations) each reduce to a problem between
two rank-2 mixed states on a 3-dimensional space. H2 is the bit-flip image of
H1, and every H2 quantity here is obtained from the H1 one by that relabeling.

Subspace operators are expressed in a local orthonormal frame. For H1 the
frame is ``(|001>, |u>|0>, |v>|0>)`` with ``u``/``v`` the symmetric/singlet
two-qubit kets; for H2 it is the bit-flipped frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import PSD_TOL, basis_ket, dagger, hermitian_eigenvalues, kron, kron_all, projector
from .states import (
    KET0,
    Priors,
    check_theta,
    half_angle_weights,
    occurrence_weight,
    special_kets,
    total_input_kets,
)

LOW, MIDDLE, HIGH = "low", "middle", "high"
LOWER_THRESHOLD = 1 / 5
UPPER_THRESHOLD = 4 / 5
UNAMBIGUITY_TOL = 1e-12
IDENTITY_TOL = 1e-10

_X = np.array([[0, 1], [1, 0]], dtype=complex)
FLIP_ALL = kron_all(_X, _X, _X)


class UnambiguityError(ValueError):
    """A measurement would misidentify one of the two states."""


def regime(priors: Priors) -> str:
    if priors.eta1 < LOWER_THRESHOLD:
        return LOW
    if priors.eta1 > UPPER_THRESHOLD:
        return HIGH
    return MIDDLE


@dataclass(frozen=True, eq=False)
class Povm:
    """Three-outcome measurement ordered (identify-1, identify-2, inconclusive).

    Construction checks that every element is PSD and that the elements sum
    to the identity; pass ``check=False`` to build a deliberately broken one.
    """

    identify_1: np.ndarray
    identify_2: np.ndarray
    inconclusive: np.ndarray
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        if self.check:
            self.validate()

    @property
    def elements(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.identify_1, self.identify_2, self.inconclusive

    @property
    def dim(self) -> int:
        return self.identify_1.shape[0]

    @classmethod
    def from_identify(cls, e1, e2, check: bool = True) -> "Povm":
        e1 = np.asarray(e1, dtype=complex)
        e2 = np.asarray(e2, dtype=complex)
        return cls(e1, e2, np.eye(e1.shape[0]) - e1 - e2, check=check)

    def completeness_defect(self) -> float:
        total = self.identify_1 + self.identify_2 + self.inconclusive
        return float(np.max(np.abs(total - np.eye(self.dim))))

    def min_eigenvalue(self) -> float:
        return min(float(hermitian_eigenvalues(e)[0]) for e in self.elements)

    def validate(self, tol: float = IDENTITY_TOL) -> None:
        shapes = {e.shape for e in self.elements}
        if len(shapes) != 1:
            raise ValueError(f"POVM elements have mismatched shapes {shapes}")
        if self.completeness_defect() > tol:
            raise ValueError("POVM elements do not sum to the identity")
        if self.min_eigenvalue() < -PSD_TOL:
            raise ValueError("POVM element is not positive semidefinite")


def subspace_frame(k: int) -> np.ndarray:
    """8x3 isometry whose columns are the local orthonormal frame of H_k."""
    u, v = special_kets()
    frame1 = np.column_stack([basis_ket(0b001, 8), kron(u, KET0), kron(v, KET0)])
    if k == 1:
        return frame1
    if k == 2:
        return FLIP_ALL @ frame1
    raise ValueError(f"subspace index must be 1 or 2, got {k!r}")


def kernel_kets(k: int) -> tuple[np.ndarray, np.ndarray]:
    """Global kets spanning the kernels inside H_k of the second and first reduced states.

    The first ket (``|0>|v>`` for H1) is the only direction that may signal
    state 1; the second (``|v>|0>``) the only one that may signal state 2.
    """
    _, v = special_kets()
    first, second = kron(KET0, v), kron(v, KET0)
    if k == 1:
        return first, second
    if k == 2:
        return FLIP_ALL @ first, FLIP_ALL @ second
    raise ValueError(f"subspace index must be 1 or 2, got {k!r}")


@dataclass(frozen=True, eq=False)
class SubspaceProblem:
    k: int
    rho_a: np.ndarray
    rho_b: np.ndarray
    weight: float

    @property
    def frame(self) -> np.ndarray:
        return subspace_frame(self.k)

    def local(self, op) -> np.ndarray:
        """Express a global 8x8 operator in the 3-dimensional frame of H_k."""
        f = self.frame
        return dagger(f) @ np.asarray(op, dtype=complex) @ f

    def embed(self, op) -> np.ndarray:
        f = self.frame
        return f @ np.asarray(op, dtype=complex) @ dagger(f)


def reduced_problem(k: int, theta: float) -> SubspaceProblem:
    """Normalized reduced states of both averaged inputs inside H_k."""
    if k not in (1, 2):
        raise ValueError(f"subspace index must be 1 or 2, got {k!r}")
    u, _ = special_kets()
    rho_a = projector(basis_ket(0b001, 8)) / 3 + 2 * projector(kron(u, KET0)) / 3
    rho_b = projector(basis_ket(0b100, 8)) / 3 + 2 * projector(kron(KET0, u)) / 3
    if k == 2:
        rho_a = FLIP_ALL @ rho_a @ FLIP_ALL
        rho_b = FLIP_ALL @ rho_b @ FLIP_ALL
    return SubspaceProblem(k, rho_a, rho_b, occurrence_weight(k, theta))


def unambiguity_defect(povm: Povm, rho_a, rho_b) -> tuple[float, float]:
    """``(Tr(rho_a E2), Tr(rho_b E1))``; both vanish for an error-free measurement."""
    rho_a = np.asarray(rho_a, dtype=complex)
    rho_b = np.asarray(rho_b, dtype=complex)
    if rho_a.shape != (povm.dim, povm.dim) or rho_b.shape != (povm.dim, povm.dim):
        raise ValueError(
            f"dimension mismatch: POVM is {povm.dim}-dimensional, states are "
            f"{rho_a.shape} and {rho_b.shape}"
        )
    return (
        float(np.trace(rho_a @ povm.identify_2).real),
        float(np.trace(rho_b @ povm.identify_1).real),
    )


def success_probability(povm: Povm, rho_a, rho_b, priors: Priors) -> float:
    wrong_a, wrong_b = unambiguity_defect(povm, rho_a, rho_b)
    if max(abs(wrong_a), abs(wrong_b)) > UNAMBIGUITY_TOL:
        raise UnambiguityError(
            f"measurement misidentifies the states (defects {wrong_a:.3e}, {wrong_b:.3e})"
        )
    rho_a = np.asarray(rho_a, dtype=complex)
    rho_b = np.asarray(rho_b, dtype=complex)
    return float(
        priors.eta1 * np.trace(rho_a @ povm.identify_1).real
        + priors.eta2 * np.trace(rho_b @ povm.identify_2).real
    )


def _check_unit(name: str, x: float) -> float:
    x = float(x)
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {x!r}")
    return x


def e0_matrix(alpha: float, beta: float) -> np.ndarray:
    """Inconclusive element on H1 in the local frame, without range checks.

    Used to probe parameter values just outside the unit square; everything
    else should go through :func:`build_E0`.
    """
    off = alpha / (2 * math.sqrt(2))
    return np.array(
        [
            [1 - alpha / 2, off, off],
            [off, 1 - alpha / 4, -alpha / 4],
            [off, -alpha / 4, 1 - alpha / 4 - beta],
        ],
        dtype=complex,
    )


def build_E0(alpha: float, beta: float) -> np.ndarray:
    return e0_matrix(_check_unit("alpha", alpha), _check_unit("beta", beta))


def beta_bound(alpha) -> float | np.ndarray:
    """Largest ``beta`` that keeps the inconclusive element PSD for given ``alpha``."""
    alpha = np.asarray(alpha, dtype=float)
    out = (4 - 4 * alpha) / (4 - 3 * alpha)
    return float(out) if out.ndim == 0 else out


def subspace_povm(k: int, alpha: float, beta: float, check: bool = True) -> Povm:
    """Kernel-supported measurement on H_k in local-frame coordinates."""
    _check_unit("alpha", alpha)
    _check_unit("beta", beta)
    f = subspace_frame(k)
    first, second = kernel_kets(k)
    e1 = alpha * projector(dagger(f) @ first)
    e2 = beta * projector(dagger(f) @ second)
    return Povm.from_identify(e1, e2, check=check)


@dataclass(frozen=True)
class OptimumReport:
    regime: str
    alpha: float
    beta: float
    probability: float

    @property
    def c1(self) -> float:
        return self.alpha

    @property
    def c2(self) -> float:
        return self.beta


def _clip_unit(x: float) -> float:
    # sqrt roundoff at the thresholds can push the coefficients a few ulp out of [0, 1]
    return min(1.0, max(0.0, x))


def analytic_subspace_optimum(priors: Priors) -> OptimumReport:
    """Closed-form optimum of one subspace problem (identical for H1 and H2)."""
    eta1, eta2 = priors.eta1, priors.eta2
    r = regime(priors)
    if r == LOW:
        return OptimumReport(LOW, 0.0, 1.0, eta2 / 3)
    if r == HIGH:
        return OptimumReport(HIGH, 1.0, 0.0, eta1 / 3)
    alpha = _clip_unit(2 / 3 * (2 - math.sqrt(eta2 / eta1)))
    beta = _clip_unit(2 / 3 * (2 - math.sqrt(eta1 / eta2)))
    return OptimumReport(MIDDLE, alpha, beta, 4 / 9 * (1 - math.sqrt(eta1 * eta2)))


def subspace_optimal_povm(k: int, priors: Priors) -> Povm:
    opt = analytic_subspace_optimum(priors)
    return subspace_povm(k, opt.alpha, opt.beta)


def total_povm(priors: Priors) -> Povm:
    """Optimal measurement on all three registers.

    Identify-1 is ``c1 * I_A (x) |v><v|_BC`` and identify-2 is
    ``c2 * |v><v|_AB (x) I_C``.
    """
    opt = analytic_subspace_optimum(priors)
    _, v = special_kets()
    pv = projector(v)
    eye2 = np.eye(2, dtype=complex)
    return Povm.from_identify(opt.c1 * kron(eye2, pv), opt.c2 * kron(pv, eye2))


def povm_from_subspaces(theta: float, priors: Priors) -> Povm:
    """Global measurement assembled from the optimal H1 and H2 solutions at latitude ``theta``."""
    check_theta(theta)
    e1 = np.zeros((8, 8), dtype=complex)
    e2 = np.zeros((8, 8), dtype=complex)
    for k in (1, 2):
        problem = reduced_problem(k, theta)
        local = subspace_optimal_povm(k, priors)
        e1 += problem.embed(local.identify_1)
        e2 += problem.embed(local.identify_2)
    return Povm.from_identify(e1, e2)


def optimal_average_probability(theta: float, priors: Priors) -> float:
    """Optimal success probability for the phase-averaged inputs.

    Both subspaces share the same optimum, so this is ``(p1 + p2) * P_sub``
    with ``p1 + p2 = 3 c^2 s^2``.
    """
    c2, s2 = half_angle_weights(theta)
    opt = analytic_subspace_optimum(priors)
    return 3 * c2 * s2 * opt.probability


def overlap_sq(theta: float, dphi: float) -> float:
    """``|<psi1|psi2>|^2`` for two latitudinal kets separated by phase ``dphi``."""
    c2, s2 = half_angle_weights(theta)
    return 1 - 2 * c2 * s2 * (1 - math.cos(dphi))


def pure_state_coefficient(priors: Priors) -> float:
    """Factor multiplying ``1 - |<psi1|psi2>|^2`` in the pure-state success probability."""
    opt = analytic_subspace_optimum(priors)
    return 0.5 * (priors.eta1 * opt.c1 + priors.eta2 * opt.c2)


def pure_state_success(theta: float, phi1: float, phi2: float, priors: Priors) -> float:
    eta1, eta2 = priors.eta1, priors.eta2
    distinguishability = 1 - overlap_sq(theta, phi1 - phi2)
    r = regime(priors)
    if r == LOW:
        return eta2 / 2 * distinguishability
    if r == HIGH:
        return eta1 / 2 * distinguishability
    return 2 / 3 * (1 - math.sqrt(eta1 * eta2)) * distinguishability


def direct_pure_state_success(
    theta: float, phi1: float, phi2: float, priors: Priors, povm: Povm | None = None
) -> float:
    """``eta1 <Psi1|Pi1|Psi1> + eta2 <Psi2|Pi2|Psi2>`` evaluated from the matrices."""
    povm = total_povm(priors) if povm is None else povm
    psi1 = total_input_kets(1, theta, phi1, phi2)
    psi2 = total_input_kets(2, theta, phi1, phi2)
    p1 = np.vdot(psi1, povm.identify_1 @ psi1).real
    p2 = np.vdot(psi2, povm.identify_2 @ psi2).real
    return float(priors.eta1 * p1 + priors.eta2 * p2)
