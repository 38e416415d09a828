"""Dense complex Hermitian linear algebra shared by every other module.

Covariance matrices estimated from Monte Carlo samples are Hermitian only up
to sampling noise, so Hermitian symmetry is enforced by averaging with the
conjugate transpose instead of rejecting near-misses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Relative tolerance below which negative eigenvalues count as rounding
#: noise.  Covariance assembly accumulates O(k * eps) error per entry.
DEFAULT_PSD_TOL = 1e-10


class EigenConvergenceError(RuntimeError):
    """The iterative eigensolver did not converge."""


class NotPositiveSemidefiniteError(ValueError):
    """A matrix eigenvalue lies below the allowed negative tolerance."""

    def __init__(self, min_eigenvalue: float, threshold: float):
        self.min_eigenvalue = float(min_eigenvalue)
        self.threshold = float(threshold)
        super().__init__(
            "matrix is not positive semi-definite: smallest eigenvalue "
            f"{self.min_eigenvalue:.6e} lies below -{self.threshold:.6e}"
        )


def hermitian_part(a) -> np.ndarray:
    """Average a square complex matrix with its conjugate transpose.

    The result satisfies ``h[i, j] == conj(h[j, i])`` exactly as stored:
    both entries are ``0.5 * (x + y)`` of the same two addends, and
    ``0.5 * (z + conj(z))`` has exactly zero imaginary part in IEEE
    arithmetic, so the diagonal is exactly real.  Already-Hermitian input
    is returned bitwise unchanged.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return 0.5 * (a + a.conj().T)


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues (real, descending) and matching unitary eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


def hermitian_eig(a) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Raises ``EigenConvergenceError`` if the solver fails and ``ValueError``
    on non-finite input.
    """
    h = hermitian_part(a)
    if not np.all(np.isfinite(h)):
        raise ValueError("matrix has non-finite entries")
    try:
        values, vectors = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        k = h.shape[0]
        raise EigenConvergenceError(
            f"eigendecomposition of a {k}x{k} Hermitian matrix did not converge"
        ) from exc
    return EigenDecomposition(values[::-1].copy(), vectors[:, ::-1].copy())


def frobenius_distance(a, b) -> float:
    """Square root of the summed squared entry magnitudes of ``a - b``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def spectral_distance(a, b) -> float:
    """Largest singular value of ``a - b``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b, ord=2))


def psd_project(a, tol: float = DEFAULT_PSD_TOL) -> np.ndarray:
    """Clamp rounding-level negative eigenvalues of a Hermitian matrix to zero.

    Eigenvalues in ``[-tol * scale, 0)`` with ``scale = 1 + max(eig)`` are
    treated as noise and clamped; anything more negative raises
    ``NotPositiveSemidefiniteError`` carrying the offending eigenvalue.
    Input that is already positive semi-definite is returned unchanged, so
    the projection is idempotent and preserves exact zero patterns.
    """
    h = hermitian_part(a)
    eig = hermitian_eig(h)
    lo = float(eig.values[-1])
    threshold = tol * (1.0 + max(float(eig.values[0]), 0.0))
    if lo < -threshold:
        raise NotPositiveSemidefiniteError(lo, threshold)
    if lo >= 0.0:
        return h
    clamped = np.clip(eig.values, 0.0, None)
    return hermitian_part((eig.vectors * clamped) @ eig.vectors.conj().T)
