"""Small dense complex linear algebra used by the rest of the package.

Matrices are plain ``numpy`` complex arrays and kets are 1-D complex arrays.
All the operators handled here are at most 8x8, so nothing is tuned for size.
"""

from __future__ import annotations

import math

import numpy as np

HERMITIAN_TOL = 1e-9
PSD_TOL = 1e-10
NORM_TOL = 1e-9


class LinalgError(ValueError):
    """Raised when an input matrix or ket violates an operation's contract."""


def as_matrix(m) -> np.ndarray:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise LinalgError(f"expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise LinalgError("matrix has non-finite entries")
    return arr


def ket(amplitudes) -> np.ndarray:
    """Return ``amplitudes`` as a normalized-checked complex vector."""
    v = np.asarray(amplitudes, dtype=complex).reshape(-1)
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > NORM_TOL:
        raise LinalgError(f"ket is not normalized (norm={norm!r})")
    return v


def basis_ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def kron(a, b) -> np.ndarray:
    """Kronecker product; block ``(i, j)`` of the result is ``a[i, j] * b``.

    Works on matrices and, for convenience, on 1-D kets (giving a 1-D ket).
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return np.kron(a, b)


def kron_all(*factors) -> np.ndarray:
    out = np.asarray(factors[0], dtype=complex)
    for f in factors[1:]:
        out = kron(out, f)
    return out


def dagger(m) -> np.ndarray:
    return np.conj(np.asarray(m, dtype=complex)).T


def projector(k) -> np.ndarray:
    """Rank-one projector ``|k><k|`` for a normalized ket."""
    v = ket(k)
    return np.outer(v, np.conj(v))


def hermiticity_defect(m) -> float:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise LinalgError(f"matrix is not square: {m.shape}")
    return float(np.max(np.abs(m - dagger(m)), initial=0.0))


def hermitian_eigenvalues(m) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix in ascending order.

    Raises :class:`LinalgError` if ``m`` is not square or deviates from its
    adjoint by more than ``HERMITIAN_TOL`` in max-norm.
    """
    m = as_matrix(m)
    defect = hermiticity_defect(m)
    if defect > HERMITIAN_TOL:
        raise LinalgError(f"matrix is not Hermitian (max |m - m^H| = {defect:.3e})")
    return np.linalg.eigvalsh(m)


def is_psd(m, tol: float = PSD_TOL) -> bool:
    return bool(hermitian_eigenvalues(m)[0] >= -tol)


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_defect(m) <= tol


def is_density_matrix(m, tol: float = PSD_TOL) -> bool:
    """Hermitian, unit trace and positive semidefinite, all within ``tol``."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1] or hermiticity_defect(m) > tol:
        return False
    if abs(np.trace(m) - 1.0) > tol:
        return False
    return is_psd(m, tol)


def cubic_hermitian_eigenvalues(m) -> list[float]:
    """Eigenvalues of a 3x3 Hermitian matrix from its characteristic polynomial.

    Closed-form trigonometric solution of the depressed cubic. Kept as an
    independent cross-check of :func:`hermitian_eigenvalues`.
    """
    m = as_matrix(m)
    if m.shape != (3, 3):
        raise LinalgError(f"expected a 3x3 matrix, got {m.shape}")
    if hermiticity_defect(m) > HERMITIAN_TOL:
        raise LinalgError("matrix is not Hermitian")
    q = float(np.trace(m).real) / 3.0
    shifted = m - q * np.eye(3)
    p2 = float(np.sum(np.abs(shifted) ** 2).real) / 6.0
    if p2 == 0.0:
        return [q, q, q]
    p = math.sqrt(p2)
    # det of a Hermitian matrix is real; drop the roundoff imaginary part.
    r = float(np.linalg.det(shifted / p).real) / 2.0
    r = min(1.0, max(-1.0, r))
    phi = math.acos(r) / 3.0
    largest = q + 2.0 * p * math.cos(phi)
    smallest = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    middle = 3.0 * q - largest - smallest
    return sorted([smallest, middle, largest])
