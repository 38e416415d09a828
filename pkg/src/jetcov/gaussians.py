"""Mean-zero complex Gaussian measures with positive semi-definite covariance.

A covariance matrix ``D`` determines the measure through the moments
``<z_j> = 0``, ``<z_j z_k> = 0``, ``<z_j conj(z_k)> = D_jk``.  When ``D`` is
singular the measure lives on the span of the eigenvectors with positive
eigenvalue; the zero matrix gives the point mass at the origin.  Densities in
the singular case are taken with respect to Lebesgue measure on that support,
the only measure class in which the full-rank density formula extends.
"""

from __future__ import annotations

import numpy as np

from .linalg import DEFAULT_PSD_TOL, hermitian_eig, hermitian_part, psd_project
from .rng import DEFAULT_CHUNK, chunk_layout, chunk_stream

#: Eigenvalues below ``DEFAULT_RANK_CUTOFF * lambda_max`` do not count toward
#: the support: separates structurally forced zeros from rounding noise.
DEFAULT_RANK_CUTOFF = 1e-12


class SupportResidualError(ValueError):
    """A vector lies measurably outside the support of a singular Gaussian."""

    def __init__(self, residual: float, tolerance: float):
        self.residual = float(residual)
        self.tolerance = float(tolerance)
        super().__init__(
            f"vector lies off the support: residual {self.residual:.6e} "
            f"exceeds tolerance {self.tolerance:.6e}"
        )


def standard_complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """Complex normals with ``<z conj(z)> = 1``.

    Real and imaginary parts are independent mean-zero normals of variance
    one half each.
    """
    out = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    out *= np.sqrt(0.5)
    return out


def real_covariance(delta) -> np.ndarray:
    """Real 2k x 2k covariance of ``(Re z, Im z)`` for complex covariance ``delta``.

    Block structure ``0.5 * [[Re D, -Im D], [Im D, Re D]]``; symmetric because
    the real part of a Hermitian matrix is symmetric and the imaginary part is
    antisymmetric.
    """
    d = hermitian_part(delta)
    re, im = d.real, d.imag
    top = np.hstack([re, -im])
    bottom = np.hstack([im, re])
    return 0.5 * np.vstack([top, bottom])


class GeneralizedGaussian:
    """Complex Gaussian determined by a positive semi-definite covariance.

    Construction symmetrizes and PSD-projects the covariance, then splits off
    the support: the eigenvectors whose eigenvalues exceed
    ``rank_cutoff * lambda_max``.  Samples are built as
    ``sum_i sqrt(lambda_i) * zeta_i * v_i`` with independent standard complex
    normals ``zeta_i``, so they lie in the support by construction.
    """

    def __init__(self, covariance, rank_cutoff: float = DEFAULT_RANK_CUTOFF,
                 psd_tol: float = DEFAULT_PSD_TOL):
        delta = psd_project(covariance, psd_tol)
        eig = hermitian_eig(delta)
        lam_max = float(eig.values[0]) if eig.values.size else 0.0
        rank = int(np.count_nonzero(eig.values > rank_cutoff * lam_max)) if lam_max > 0 else 0
        self.covariance = delta
        self.dim = delta.shape[0]
        self.rank = rank
        self.rank_cutoff = rank_cutoff
        self.support_values = eig.values[:rank].copy()
        self.support_vectors = eig.vectors[:, :rank].copy()
        # Measures are immutable after construction; safe to share.
        for arr in (self.covariance, self.support_values, self.support_vectors):
            arr.setflags(write=False)

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Draw ``count`` samples as rows of a ``(count, dim)`` complex array."""
        if count < 1:
            raise ValueError("count must be at least 1")
        if self.rank == 0:
            return np.zeros((count, self.dim), dtype=complex)
        zeta = standard_complex_normal(rng, (count, self.rank))
        return (zeta * np.sqrt(self.support_values)) @ self.support_vectors.T

    def sample_chunked(self, seed: int, count: int,
                       chunk_size: int = DEFAULT_CHUNK) -> np.ndarray:
        """Deterministic chunked sampling keyed by ``(seed, chunk index)``."""
        parts = [self.sample(chunk_stream(seed, i), c)
                 for i, c in chunk_layout(count, chunk_size)]
        if not parts:
            return np.zeros((0, self.dim), dtype=complex)
        return np.vstack(parts)

    def density(self, z) -> float:
        """Density ``exp(-<D^-1 z, conj z>) / (pi^r det+ D)`` on the support.

        ``r`` is the support dimension and the inverse and determinant are
        taken there.  For singular covariance the argument must lie in the
        support up to a relative residual of 1e-8, otherwise
        ``SupportResidualError`` reports the residual.
        """
        z = np.asarray(z, dtype=complex).reshape(self.dim)
        coords = self.support_vectors.conj().T @ z
        if self.rank < self.dim:
            residual = float(np.linalg.norm(z - self.support_vectors @ coords))
            tolerance = 1e-8 * (1.0 + float(np.linalg.norm(z)))
            if residual > tolerance:
                raise SupportResidualError(residual, tolerance)
        if self.rank == 0:
            return 1.0
        exponent = float(np.sum(np.abs(coords) ** 2 / self.support_values))
        log_norm = self.rank * np.log(np.pi) + float(np.sum(np.log(self.support_values)))
        return float(np.exp(-exponent - log_norm))

    def characteristic_function(self, t) -> complex:
        """Fourier transform ``exp(-0.5 t . C t)`` at a real 2k-vector ``t``.

        ``C`` is the real embedding ``real_covariance(D)`` acting on
        ``(Re z, Im z)``.
        """
        t = np.asarray(t, dtype=float).reshape(2 * self.dim)
        c = real_covariance(self.covariance)
        return complex(np.exp(-0.5 * float(t @ c @ t)))

    def pushforward(self, transform) -> "GeneralizedGaussian":
        """Image measure under a linear map: covariance becomes ``T D T*``."""
        t = np.asarray(transform, dtype=complex)
        if t.ndim != 2 or t.shape[1] != self.dim:
            raise ValueError(
                f"transform must have {self.dim} columns, got shape {t.shape}"
            )
        return GeneralizedGaussian(t @ self.covariance @ t.conj().T,
                                   rank_cutoff=self.rank_cutoff)


def empirical_second_moments(samples) -> tuple[np.ndarray, np.ndarray]:
    """Empirical ``<z_j conj(z_k)>`` (Hermitian-symmetrized) and ``<z_j z_k>``."""
    z = np.asarray(samples, dtype=complex)
    if z.ndim != 2 or z.shape[0] == 0:
        raise ValueError("samples must be a non-empty 2-d array")
    count = z.shape[0]
    cov = hermitian_part(z.T @ z.conj() / count)
    pseudo = z.T @ z / count
    return cov, pseudo


def empirical_characteristic_function(samples, t) -> complex:
    """Mean of ``exp(i t . (Re z, Im z))`` over sample rows."""
    z = np.asarray(samples, dtype=complex)
    t = np.asarray(t, dtype=float).reshape(2 * z.shape[1])
    x = np.hstack([z.real, z.imag])
    return complex(np.mean(np.exp(1j * (x @ t))))
