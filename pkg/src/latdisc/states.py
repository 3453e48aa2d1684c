"""Latitudinal qubit states, the three-register inputs and their phase averages.

Registers are ordered A, B, C and the 3-qubit computational basis is binary
ordered, so ``|q_A q_B q_C>`` sits at index ``4*q_A + 2*q_B + q_C``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import basis_ket, kron, kron_all, projector

TWO_PI = 2.0 * math.pi
DEFAULT_NODES = 64

KET0 = basis_ket(0, 2)
KET1 = basis_ket(1, 2)


def check_theta(theta: float) -> float:
    theta = float(theta)
    if not (0.0 <= theta <= math.pi):
        raise ValueError(f"theta must lie in [0, pi], got {theta!r}")
    return theta


def check_which(which: int) -> int:
    if which not in (1, 2):
        raise ValueError(f"which must be 1 or 2, got {which!r}")
    return which


@dataclass(frozen=True)
class LatitudinalParams:
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta", check_theta(self.theta))
        object.__setattr__(self, "phi", float(self.phi) % TWO_PI)


@dataclass(frozen=True)
class Priors:
    """Prior probabilities of the data register holding state 1 or state 2."""

    eta1: float

    def __post_init__(self):
        eta1 = float(self.eta1)
        if not (0.0 <= eta1 <= 1.0):
            raise ValueError(f"eta1 must lie in [0, 1], got {self.eta1!r}")
        object.__setattr__(self, "eta1", eta1)

    @property
    def eta2(self) -> float:
        return 1.0 - self.eta1


def half_angle_amplitudes(theta: float) -> tuple[float, float]:
    """``(cos(theta/2), sin(theta/2))``, exact at the poles."""
    theta = check_theta(theta)
    if theta == math.pi:
        return 0.0, 1.0
    return math.cos(theta / 2), math.sin(theta / 2)


def half_angle_weights(theta: float) -> tuple[float, float]:
    """Return ``(cos^2(theta/2), sin^2(theta/2))``."""
    c, s = half_angle_amplitudes(theta)
    return c * c, s * s


def latitudinal_ket(theta: float, phi: float = 0.0) -> np.ndarray:
    """``cos(theta/2)|0> + exp(-i phi) sin(theta/2)|1>``."""
    p = LatitudinalParams(theta, phi)
    c, s = half_angle_amplitudes(p.theta)
    return np.array([c, np.exp(-1j * p.phi) * s], dtype=complex)


def _latitudinal_kets(theta: float, phis: np.ndarray) -> np.ndarray:
    phis = np.asarray(phis, dtype=float)
    c, s = half_angle_amplitudes(theta)
    out = np.empty(phis.shape + (2,), dtype=complex)
    out[..., 0] = c
    out[..., 1] = np.exp(-1j * phis) * s
    return out


def total_input_kets(which: int, theta: float, phi1, phi2) -> np.ndarray:
    """Vectorised :func:`total_input_ket` over broadcastable phase arrays.

    Returns an array of shape ``broadcast(phi1, phi2).shape + (8,)``.
    """
    check_which(which)
    theta = check_theta(theta)
    phi1, phi2 = np.broadcast_arrays(np.asarray(phi1, float), np.asarray(phi2, float))
    k1 = _latitudinal_kets(theta, phi1)
    k2 = _latitudinal_kets(theta, phi2)
    a, b, c = (k1, k1, k2) if which == 1 else (k1, k2, k2)
    out = a[..., :, None, None] * b[..., None, :, None] * c[..., None, None, :]
    return out.reshape(phi1.shape + (8,))


def total_input_ket(which: int, theta: float, phi1: float, phi2: float) -> np.ndarray:
    """``|psi1>|psi1>|psi2>`` for ``which=1``, ``|psi1>|psi2>|psi2>`` for ``which=2``."""
    check_which(which)
    psi1 = latitudinal_ket(theta, phi1)
    psi2 = latitudinal_ket(theta, phi2)
    if which == 1:
        return kron_all(psi1, psi1, psi2)
    return kron_all(psi1, psi2, psi2)


def special_kets() -> tuple[np.ndarray, np.ndarray]:
    """The symmetric and antisymmetric (singlet) two-qubit kets ``(u, v)``."""
    r = 1.0 / math.sqrt(2.0)
    u = np.array([0.0, r, r, 0.0], dtype=complex)
    v = np.array([0.0, r, -r, 0.0], dtype=complex)
    return u, v


def single_copy_average(theta: float) -> np.ndarray:
    c2, s2 = half_angle_weights(theta)
    return np.diag([c2, s2]).astype(complex)


def pair_copy_average(theta: float) -> np.ndarray:
    c2, s2 = half_angle_weights(theta)
    u, _ = special_kets()
    return (
        c2 * c2 * projector(kron(KET0, KET0))
        + s2 * s2 * projector(kron(KET1, KET1))
        + 2 * c2 * s2 * projector(u)
    )


def average_state_closed(which: int, theta: float) -> np.ndarray:
    """Phase-averaged input density matrix from its six-term closed form."""
    check_which(which)
    c2, s2 = half_angle_weights(theta)
    u, _ = special_kets()
    pu = projector(u)
    p0 = projector(KET0)
    p1 = projector(KET1)

    def ket3(bits: str) -> np.ndarray:
        return basis_ket(int(bits, 2), 8)

    if which == 1:
        lone = ("001", "110")
        sym0, sym1 = kron(pu, p0), kron(pu, p1)
    else:
        lone = ("100", "011")
        sym0, sym1 = kron(p0, pu), kron(p1, pu)
    return (
        c2**3 * projector(ket3("000"))
        + c2**2 * s2 * projector(ket3(lone[0]))
        + c2 * s2**2 * projector(ket3(lone[1]))
        + s2**3 * projector(ket3("111"))
        + 2 * c2**2 * s2 * sym0
        + 2 * c2 * s2**2 * sym1
    )


def average_state_quadrature(which: int, theta: float, nodes: int = DEFAULT_NODES) -> np.ndarray:
    """Double phase average of ``|Psi><Psi|`` by the periodic trapezoidal rule.

    The integrand is a trigonometric polynomial of degree at most two in each
    phase, so any ``nodes >= 4`` integrates it exactly up to roundoff.
    """
    if nodes < 4:
        raise ValueError(f"nodes must be >= 4, got {nodes}")
    phis = TWO_PI * np.arange(nodes) / nodes
    kets = total_input_kets(which, theta, phis[:, None], phis[None, :]).reshape(-1, 8)
    rho = kets.T @ kets.conj() / kets.shape[0]
    return 0.5 * (rho + rho.conj().T)


def subspace_basis(k: int) -> list[np.ndarray]:
    """Spanning kets of the invariant subspaces H0, H1, H2 (not orthogonalised)."""
    u, _ = special_kets()

    def ket3(bits: str) -> np.ndarray:
        return basis_ket(int(bits, 2), 8)

    if k == 0:
        return [ket3("000"), ket3("111")]
    if k == 1:
        return [ket3("001"), kron(u, KET0), ket3("100"), kron(KET0, u)]
    if k == 2:
        return [ket3("110"), kron(u, KET1), ket3("011"), kron(KET1, u)]
    raise ValueError(f"subspace index must be 0, 1 or 2, got {k!r}")


def subspace_rank(k: int, tol: float = 1e-10) -> int:
    return int(np.linalg.matrix_rank(np.column_stack(subspace_basis(k)), tol=tol))


def subspace_projector(k: int, tol: float = 1e-10) -> np.ndarray:
    """Orthogonal projector onto the span of :func:`subspace_basis`."""
    stack = np.column_stack(subspace_basis(k))
    q, sv, _ = np.linalg.svd(stack, full_matrices=False)
    q = q[:, sv > tol]
    return q @ q.conj().T


def occurrence_weight(k: int, theta: float) -> float:
    """Probability that either averaged input lands in subspace ``k`` (1 or 2)."""
    c2, s2 = half_angle_weights(theta)
    if k == 1:
        return 3 * c2 * c2 * s2
    if k == 2:
        return 3 * c2 * s2 * s2
    raise ValueError(f"subspace index must be 1 or 2, got {k!r}")
