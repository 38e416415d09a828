"""Uniform measure on high-dimensional spheres and its linear projections.

The scaled coordinate marginals of the uniform sphere measure converge to
independent standard normals (the Poincare-Borel limit), and linear images
of sphere samples have covariance ``T T* / d`` exactly in expectation.  The
projection of the sphere onto its first ``k`` coordinates, dilated by
``sqrt(d)``, has the closed-form density ``psi_d`` implemented here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.special import gammaln

from .linalg import hermitian_part
from .rng import chunk_layout, chunk_stream

#: Chunk size for sphere sweeps; smaller than the global default because a
#: chunk holds a dense (chunk, d) block for the largest d in the sweep.
SWEEP_CHUNK = 8192


def sample_sphere(dim: int, rng: np.random.Generator, count: int) -> np.ndarray:
    """Uniform samples on the unit sphere of R^dim as a ``(count, dim)`` array.

    Standard normal vectors normalized to unit length; exact Haar law in any
    dimension.
    """
    if dim < 1:
        raise ValueError("dim must be at least 1")
    if count < 1:
        raise ValueError("count must be at least 1")
    x = rng.standard_normal((count, dim))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return x


def projection_density(d: int, k: int, x) -> np.ndarray | float:
    """Density of the sqrt(d)-dilated first-k-coordinate sphere marginal.

    ``psi_d(x) = (sigma_{d-k}/sigma_d) d^{-k/2} (1 - |x|^2/d)^{(d-k-2)/2}``
    for ``|x| < sqrt(d)`` and zero otherwise, with ``sigma_n`` the surface
    area of the unit (n-1)-sphere.  Integrates to one over R^k and converges
    pointwise to the standard normal density as ``d`` grows.

    ``x`` may be a single k-vector or an ``(n, k)`` batch.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if d < k + 2:
        raise ValueError(f"need d >= k + 2, got d={d}, k={k}")
    arr = np.asarray(x, dtype=float)
    single = arr.ndim == 1
    arr = np.atleast_2d(arr)
    if arr.shape[-1] != k:
        raise ValueError(f"points must have {k} coordinates, got shape {arr.shape}")
    sq = np.sum(arr * arr, axis=-1)
    log_const = (gammaln(d / 2.0) - gammaln((d - k) / 2.0)
                 - 0.5 * k * (np.log(np.pi) + np.log(d)))
    out = np.zeros_like(sq)
    inside = sq < d
    out[inside] = np.exp(log_const + 0.5 * (d - k - 2) * np.log1p(-sq[inside] / d))
    return float(out[0]) if single else out


@dataclass(frozen=True)
class PoincareBorelReport:
    """Per-coordinate normality diagnostics for scaled sphere marginals."""

    d: int
    k: int
    samples: int
    ks_distances: np.ndarray
    covariance: np.ndarray


def _scaled_marginals(dim: int, k: int, rng: np.random.Generator, count: int,
                      chunk: int = SWEEP_CHUNK) -> np.ndarray:
    parts = []
    remaining = count
    while remaining > 0:
        c = min(chunk, remaining)
        x = sample_sphere(dim, rng, c)
        parts.append(np.sqrt(dim) * x[:, :k])
        remaining -= c
    return np.vstack(parts)


def poincare_borel_check(d: int, k: int, rng: np.random.Generator,
                         samples: int) -> PoincareBorelReport:
    """Map sphere samples through ``x -> sqrt(d) (x_1, ..., x_k)`` and test normality.

    Reports the Kolmogorov-Smirnov distance of each scaled coordinate against
    the standard normal CDF together with the empirical k x k covariance.
    """
    if d < k + 2:
        raise ValueError(f"need d >= k + 2, got d={d}, k={k}")
    y = _scaled_marginals(d, k, rng, samples)
    ks = np.array([stats.kstest(y[:, j], "norm").statistic for j in range(k)])
    cov = y.T @ y / samples
    return PoincareBorelReport(d, k, samples, ks, cov)


def poincare_borel_sweep(ds, k: int, seed: int, samples: int,
                         chunk_size: int = SWEEP_CHUNK) -> list[PoincareBorelReport]:
    """Run the marginal-normality check over increasing dimensions.

    All dimensions share nested common random numbers: every ``d`` reuses the
    first ``d`` columns of one underlying normal draw, so differences between
    the reported KS distances reflect the change in ``d`` rather than
    resampling noise.
    """
    ds = [int(d) for d in ds]
    if any(b <= a for a, b in zip(ds, ds[1:])):
        raise ValueError("dimensions must be strictly increasing")
    if any(d < k + 2 for d in ds):
        raise ValueError("every dimension must be at least k + 2")
    d_max = max(ds)
    collected: dict[int, list[np.ndarray]] = {d: [] for d in ds}
    for index, count in chunk_layout(samples, chunk_size):
        g = chunk_stream(seed, index).standard_normal((count, d_max))
        for d in ds:
            block = g[:, :d]
            norms = np.linalg.norm(block, axis=1, keepdims=True)
            collected[d].append(np.sqrt(d) * block[:, :k] / norms)
    reports = []
    for d in ds:
        y = np.vstack(collected[d])
        ks = np.array([stats.kstest(y[:, j], "norm").statistic for j in range(k)])
        reports.append(PoincareBorelReport(d, k, samples, ks, y.T @ y / samples))
    return reports


def spherical_pushforward_covariance(transform, rng: np.random.Generator,
                                     samples: int,
                                     chunk: int = SWEEP_CHUNK) -> np.ndarray:
    """Empirical covariance of ``T x`` for ``x`` uniform on the unit sphere.

    Converges to ``T T* / d`` as the sample count grows; the expectation is
    exact because ``E[x x^T] = I / d`` on the sphere.
    """
    t = np.asarray(transform, dtype=complex)
    if t.ndim != 2:
        raise ValueError(f"transform must be a matrix, got shape {t.shape}")
    k, d = t.shape
    acc = np.zeros((k, k), dtype=complex)
    remaining = samples
    while remaining > 0:
        c = min(chunk, remaining)
        y = sample_sphere(d, rng, c) @ t.T
        acc += y.T @ y.conj()
        remaining -= c
    return hermitian_part(acc / samples)
