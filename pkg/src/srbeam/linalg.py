"""Dense complex linear-algebra kernel: SVD, Hermitian EVD, GEVD, Cholesky.

All matrices are small (tens of rows at most) double-precision numpy arrays.
Eigenvalues are always returned in descending order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, NumericalFailureError

# Relative tolerance for treating a matrix as Hermitian.
HERMITIAN_RTOL = 1e-12


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Validate and return m as a finite 2-D complex128 array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise InvalidArgumentError(f"{name} must be a 2-D matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise InvalidArgumentError(f"{name} contains non-finite entries")
    return a


def _require_hermitian(m: np.ndarray, name: str) -> np.ndarray:
    """Check Hermitian symmetry within HERMITIAN_RTOL, return the symmetrized matrix."""
    defect = np.linalg.norm(m - m.conj().T)
    if defect > HERMITIAN_RTOL * max(1.0, np.linalg.norm(m)):
        raise InvalidArgumentError(
            f"{name} is not Hermitian (defect {defect:.3e})"
        )
    return 0.5 * (m + m.conj().T)


@dataclass(frozen=True)
class GevdResult:
    """Generalized eigendecomposition of a Hermitian pair {A, B}, B positive definite.

    eigenvalues are sorted descending; eigenvectors[:, i] pairs with
    eigenvalues[i] and the columns are B-orthonormal: T^H B T = I,
    T^H A T = diag(eigenvalues).
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def svd(m, full_matrices: bool = False):
    """Singular value decomposition M = U diag(S) V^H.

    Returns (U, S, V) with S non-negative descending and U, V having
    orthonormal columns. Note V is returned, not V^H.
    """
    a = as_matrix(m, "svd input")
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=full_matrices)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"SVD did not converge: {exc}") from exc
    return u, s, vh.conj().T


def hermitian_evd(m):
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    The input is symmetrized before factoring; inputs that are not Hermitian
    within HERMITIAN_RTOL (relative Frobenius) are rejected.
    """
    a = as_matrix(m, "hermitian_evd input")
    if a.shape[0] != a.shape[1]:
        raise InvalidArgumentError(f"hermitian_evd input must be square, got {a.shape}")
    a = _require_hermitian(a, "hermitian_evd input")
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"EVD did not converge: {exc}") from exc
    return w[::-1].copy(), v[:, ::-1].copy()


def cholesky(m) -> np.ndarray:
    """Lower-triangular L with L L^H = M, for Hermitian positive definite M."""
    a = as_matrix(m, "cholesky input")
    if a.shape[0] != a.shape[1]:
        raise InvalidArgumentError(f"cholesky input must be square, got {a.shape}")
    a = _require_hermitian(a, "cholesky input")
    try:
        return np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise InvalidArgumentError(f"matrix is not positive definite: {exc}") from exc


def logdet_pd(m) -> float:
    """Natural-log determinant of a Hermitian positive definite matrix."""
    ell = cholesky(m)
    return 2.0 * float(np.sum(np.log(np.real(np.diag(ell)))))


def gevd(a, b) -> GevdResult:
    """Generalized eigendecomposition of the pair {A, B}.

    A must be Hermitian and B Hermitian positive definite. Computed by
    Cholesky-reducing B = L L^H and taking the standard Hermitian EVD of
    L^-1 A L^-H; eigenvectors are mapped back through L^-H so that
    T^H B T = I.
    """
    a = as_matrix(a, "gevd A")
    b = as_matrix(b, "gevd B")
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise InvalidArgumentError(
            f"gevd needs square matrices of equal size, got {a.shape} and {b.shape}"
        )
    a = _require_hermitian(a, "gevd A")
    ell = cholesky(b)
    # C = L^-1 A L^-H via two triangular solves; re-symmetrize the rounding.
    tmp = np.linalg.solve(ell, a)
    c = np.linalg.solve(ell, tmp.conj().T).conj().T
    c = 0.5 * (c + c.conj().T)
    try:
        w, q = np.linalg.eigh(c)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"EVD did not converge: {exc}") from exc
    t = np.linalg.solve(ell.conj().T, q[:, ::-1])
    return GevdResult(eigenvalues=w[::-1].copy(), eigenvectors=t)
