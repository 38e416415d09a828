"""Covariance matrices of section jets and their universal scaling limit.

The 1-jet of a section at ``n`` points in C^m is the complex ``n (2m + 1)``
vector of lifted values ``x^p`` and scaled horizontal derivatives
``xi^p_q = N^{-1/2} grad_q`` (holomorphic for ``q <= m``, anti-holomorphic
above).  For an orthonormal basis of ``d_N`` sections with coefficient
covariance ``I / d_N`` the jet covariance is ``(1/d_N) J J*`` where ``J``
stacks the basis jets; blockwise it is assembled from the reproducing kernel
and its horizontal derivatives.  Dilating the points by ``1/sqrt(N)`` and
letting ``N`` grow drives this covariance to a universal limit built from the
Heisenberg model kernel, supported on the holomorphic jet slots.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .ensembles import ModelFamily, SectionEnsemble
from .gaussians import GeneralizedGaussian, standard_complex_normal
from .linalg import (DEFAULT_PSD_TOL, frobenius_distance, hermitian_part,
                     psd_project, spectral_distance)
from .rng import DEFAULT_CHUNK, chunk_layout, chunk_stream

COEFFICIENT_LAWS = ("normalized-gaussian", "spherical", "unnormalized-gaussian", "ball")


@dataclass(frozen=True)
class PointConfiguration:
    """Points ``z^1, ..., z^n`` in C^m, coordinates centered at the base point."""

    m: int
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[1] != self.m:
            raise ValueError(f"points must have shape (n, {self.m}), got {pts.shape}")
        if pts.shape[0] < 1:
            raise ValueError("need at least one point")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point coordinates must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def scaled_by(self, factor: float) -> "PointConfiguration":
        return PointConfiguration(self.m, self.points * factor)


@dataclass(frozen=True)
class JetLayout:
    """Slot ordering of the ``k = n (2m + 1)`` jet variables.

    Value slots come first (point index ascending), then derivative slots
    with the point index major and the direction ``q in 1..2m`` minor;
    directions above ``m`` are anti-holomorphic.
    """

    m: int
    n: int

    @property
    def k(self) -> int:
        return self.n * (2 * self.m + 1)

    def value_slot(self, p: int) -> int:
        return p

    def deriv_slot(self, p: int, q: int) -> int:
        """Slot of ``xi^p_q`` with 0-based point ``p`` and 0-based ``q < 2m``."""
        return self.n + p * 2 * self.m + q

    def antiholomorphic_slots(self) -> np.ndarray:
        return np.array([self.deriv_slot(p, q)
                         for p in range(self.n)
                         for q in range(self.m, 2 * self.m)], dtype=int)

    def holomorphic_slots(self) -> np.ndarray:
        slots = [self.value_slot(p) for p in range(self.n)]
        slots += [self.deriv_slot(p, q)
                  for p in range(self.n) for q in range(self.m)]
        return np.array(sorted(slots), dtype=int)

    def labels(self) -> list[str]:
        out = [f"x[{p + 1}]" for p in range(self.n)]
        out += [f"xi[{p + 1},{q + 1}]"
                for p in range(self.n) for q in range(2 * self.m)]
        return out


@dataclass(frozen=True)
class CovarianceBlocks:
    """Value/derivative blocks of a jet covariance: full matrix [[A, B], [B*, C]]."""

    m: int
    n: int
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def full(self) -> np.ndarray:
        layout = JetLayout(self.m, self.n)
        k, n = layout.k, self.n
        out = np.zeros((k, k), dtype=complex)
        out[:n, :n] = self.A
        out[:n, n:] = self.B
        out[n:, :n] = self.B.conj().T
        out[n:, n:] = self.C
        return out


def heisenberg_kernel(u, v, m: int) -> complex:
    """Limit kernel ``pi^-m exp(u . conj(v) - (|u|^2 + |v|^2) / 2)``."""
    u = np.asarray(u, dtype=complex).reshape(m)
    v = np.asarray(v, dtype=complex).reshape(m)
    expo = u @ v.conj() - 0.5 * ((u * u.conj()).real.sum() + (v * v.conj()).real.sum())
    return complex(np.exp(expo) / np.pi ** m)


def limit_covariance_blocks(config: PointConfiguration,
                            limit_factor: float = 1.0) -> CovarianceBlocks:
    """Closed-form limit of the scaled jet covariance, as blocks.

    With ``Pi(u, v)`` the Heisenberg model kernel:
    ``A[p, p'] = Pi(z^p, z^p')``,
    ``B[p, (p', q')] = (z^p_q' - z^p'_q') Pi(z^p, z^p')`` for holomorphic
    ``q'`` and zero otherwise, and
    ``C[(p, q), (p', q')] = (d_qq' + conj(z^p'_q - z^p_q)(z^p_q' - z^p'_q'))
    Pi(z^p, z^p')`` for holomorphic ``q, q'`` and zero whenever either
    direction is anti-holomorphic.  Every entry is multiplied by
    ``limit_factor``.
    """
    if limit_factor <= 0:
        raise ValueError("limit_factor must be positive")
    m, n = config.m, config.n
    z = config.points
    kern = np.empty((n, n), dtype=complex)
    for p in range(n):
        for pp in range(n):
            kern[p, pp] = heisenberg_kernel(z[p], z[pp], m)
    a = limit_factor * kern
    b = np.zeros((n, 2 * m * n), dtype=complex)
    c = np.zeros((2 * m * n, 2 * m * n), dtype=complex)
    for p in range(n):
        for pp in range(n):
            diff = z[p] - z[pp]  # (m,) holomorphic coordinate differences
            for qq in range(m):
                b[p, pp * 2 * m + qq] = limit_factor * diff[qq] * kern[p, pp]
            for q in range(m):
                for qq in range(m):
                    val = (1.0 if q == qq else 0.0) + np.conj(-diff[q]) * diff[qq]
                    c[p * 2 * m + q, pp * 2 * m + qq] = limit_factor * val * kern[p, pp]
    return CovarianceBlocks(m, n, a, b, c)


def limit_covariance(config: PointConfiguration, limit_factor: float = 1.0,
                     psd_tol: float = DEFAULT_PSD_TOL) -> np.ndarray:
    """Assembled ``k x k`` limit covariance, Hermitian positive semi-definite.

    Rows and columns of anti-holomorphic derivative slots are identically
    zero; the PSD guard acts on the holomorphic sub-block only, so those
    structural zeros survive exactly.
    """
    blocks = limit_covariance_blocks(config, limit_factor)
    layout = JetLayout(config.m, config.n)
    full = blocks.full()
    holo = layout.holomorphic_slots()
    sub = psd_project(full[np.ix_(holo, holo)], psd_tol)
    out = np.zeros_like(full)
    out[np.ix_(holo, holo)] = sub
    return out


def jet_matrix(ensemble: SectionEnsemble, config: PointConfiguration) -> np.ndarray:
    """Stacked basis jets: ``(k, d_N)`` with rows ordered by ``JetLayout``.

    Derivative rows carry the ``N^{-1/2}`` jet scaling.
    """
    if config.m != ensemble.m:
        raise ValueError(f"configuration is in C^{config.m}, ensemble in C^{ensemble.m}")
    layout = JetLayout(config.m, config.n)
    scale = 1.0 / np.sqrt(ensemble.N)
    out = np.empty((layout.k, ensemble.dim), dtype=complex)
    for p in range(config.n):
        jets = ensemble.basis_jets(config.points[p])
        out[layout.value_slot(p), :] = jets[:, 0]
        for q in range(2 * config.m):
            out[layout.deriv_slot(p, q), :] = scale * jets[:, 1 + q]
    return out


def jet_eval(ensemble: SectionEnsemble, coefficients,
             config: PointConfiguration) -> np.ndarray:
    """Jet vector of the section with the given basis coefficients."""
    c = np.asarray(coefficients, dtype=complex).reshape(-1)
    if c.shape[0] != ensemble.dim:
        raise ValueError(f"expected {ensemble.dim} coefficients, got {c.shape[0]}")
    return jet_matrix(ensemble, config) @ c


def exact_covariance(ensemble: SectionEnsemble,
                     config: PointConfiguration) -> CovarianceBlocks:
    """Jet covariance blocks from kernel-derivative contractions.

    Each block entry is ``(1/d_N) sum_j (jet of S_j at z^p) conj(jet of S_j
    at z^p')``, i.e. the reproducing kernel and its horizontal derivatives
    contracted pairwise over the points.
    """
    if config.m != ensemble.m:
        raise ValueError(f"configuration is in C^{config.m}, ensemble in C^{ensemble.m}")
    m, n = config.m, config.n
    scale = 1.0 / np.sqrt(ensemble.N)
    jets = []
    for p in range(n):
        j = ensemble.basis_jets(config.points[p]).copy()
        j[:, 1:] *= scale
        jets.append(j)
    a = np.empty((n, n), dtype=complex)
    b = np.zeros((n, 2 * m * n), dtype=complex)
    c = np.zeros((2 * m * n, 2 * m * n), dtype=complex)
    inv_d = 1.0 / ensemble.dim
    for p in range(n):
        for pp in range(n):
            block = inv_d * (jets[p].T @ jets[pp].conj())  # (1+2m, 1+2m)
            a[p, pp] = block[0, 0]
            b[p, pp * 2 * m:(pp + 1) * 2 * m] = block[0, 1:]
            c[p * 2 * m:(p + 1) * 2 * m, pp * 2 * m:(pp + 1) * 2 * m] = block[1:, 1:]
    return CovarianceBlocks(m, n, a, b, c)


def scaled_covariance(ensemble: SectionEnsemble,
                      config: PointConfiguration) -> np.ndarray:
    """Full jet covariance at the configuration dilated by ``1/sqrt(N)``."""
    return exact_covariance(ensemble, config.scaled_by(1.0 / np.sqrt(ensemble.N))).full()


def draw_coefficients(law: str, dim: int, rng: np.random.Generator,
                      count: int) -> np.ndarray:
    """Coefficient vectors of one of the supported ensemble laws.

    normalized-gaussian: i.i.d. complex normals with ``<c conj c> = I / dim``;
    spherical: uniform on the unit sphere of C^dim;
    unnormalized-gaussian: i.i.d. standard complex normals;
    ball: uniform in the unit ball of C^dim.
    """
    if law == "normalized-gaussian":
        return standard_complex_normal(rng, (count, dim)) / np.sqrt(dim)
    if law == "unnormalized-gaussian":
        return standard_complex_normal(rng, (count, dim))
    if law in ("spherical", "ball"):
        z = standard_complex_normal(rng, (count, dim))
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        if law == "ball":
            z *= rng.random((count, 1)) ** (1.0 / (2 * dim))
        return z
    raise ValueError(f"unknown coefficient law {law!r}; choose from {COEFFICIENT_LAWS}")


def empirical_covariance(ensemble: SectionEnsemble, config: PointConfiguration,
                         law: str, seed: int, samples: int,
                         chunk_size: int = DEFAULT_CHUNK) -> np.ndarray:
    """Monte Carlo jet covariance under a coefficient law, Hermitian-symmetrized.

    Deterministic for fixed ``(seed, chunk_size)``; chunks draw from streams
    derived from the master seed and the chunk index.
    """
    if law not in COEFFICIENT_LAWS:
        raise ValueError(f"unknown coefficient law {law!r}; choose from {COEFFICIENT_LAWS}")
    if samples < 10:
        raise ValueError("need at least 10 samples")
    j = jet_matrix(ensemble, config)
    k = j.shape[0]
    acc = np.zeros((k, k), dtype=complex)
    for index, count in chunk_layout(samples, chunk_size):
        coeffs = draw_coefficients(law, ensemble.dim, chunk_stream(seed, index), count)
        y = coeffs @ j.T  # (count, k) jet vectors
        acc += y.T @ y.conj()
    return hermitian_part(acc / samples)


def jpd_measure(delta, rank_cutoff: float | None = None) -> GeneralizedGaussian:
    """The jet distribution with covariance ``delta``: a generalized Gaussian."""
    if rank_cutoff is None:
        return GeneralizedGaussian(delta)
    return GeneralizedGaussian(delta, rank_cutoff=rank_cutoff)


@dataclass(frozen=True)
class ConvergencePoint:
    N: int
    frobenius: float
    spectral: float
    seconds: float


@dataclass(frozen=True)
class ConvergenceReport:
    """Distances to the limit covariance over increasing N, with fitted rate."""

    points: list[ConvergencePoint] = field(default_factory=list)
    slope: float = float("nan")

    def frobenius_distances(self) -> np.ndarray:
        return np.array([p.frobenius for p in self.points])


def fit_loglog_slope(ns, distances) -> float:
    """Least-squares slope of ``log(distance)`` against ``log(N)``."""
    ns = np.asarray(ns, dtype=float)
    ds = np.asarray(distances, dtype=float)
    if ns.size < 2 or np.any(ds <= 0):
        return float("nan")
    return float(np.polyfit(np.log(ns), np.log(ds), 1)[0])


def converge_sweep(family: ModelFamily, config: PointConfiguration, ns,
                   comparison: str = "exact", seed: int = 0,
                   samples: int = 100_000,
                   chunk_size: int = DEFAULT_CHUNK) -> ConvergenceReport:
    """Distance of the scaled jet covariance from its limit over a list of N.

    ``comparison`` selects the finite-N route: ``exact`` uses the kernel
    contraction, ``spherical-mc`` and ``gaussian-mc`` use Monte Carlo with
    the corresponding coefficient law at the dilated configuration.  The
    limit uses the family's ``limit_factor``.  Monte Carlo seeds are derived
    per N from the master seed, so reports are deterministic for fixed
    ``(seed, chunk_size)``.
    """
    ns = [int(v) for v in ns]
    if not ns:
        raise ValueError("need at least one N")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("N values must be strictly increasing")
    if any(v < 4 for v in ns):
        raise ValueError("every N must be at least 4")
    if comparison not in ("exact", "spherical-mc", "gaussian-mc"):
        raise ValueError(f"unknown comparison {comparison!r}")
    target = limit_covariance(config, family.limit_factor)
    points = []
    for idx, n_power in enumerate(ns):
        start = time.perf_counter()
        ensemble = family.build(n_power)
        if comparison == "exact":
            current = scaled_covariance(ensemble, config)
        else:
            law = "spherical" if comparison == "spherical-mc" else "normalized-gaussian"
            current = empirical_covariance(
                ensemble, config.scaled_by(1.0 / np.sqrt(n_power)), law,
                seed=_per_n_seed(seed, idx), samples=samples, chunk_size=chunk_size)
        elapsed = time.perf_counter() - start
        points.append(ConvergencePoint(
            N=n_power,
            frobenius=frobenius_distance(current, target),
            spectral=spectral_distance(current, target),
            seconds=elapsed,
        ))
    slope = fit_loglog_slope([p.N for p in points], [p.frobenius for p in points])
    return ConvergenceReport(points=points, slope=slope)


def _per_n_seed(seed: int, index: int) -> int:
    """Stable derived seed for the index-th N of a sweep."""
    return int(np.random.SeedSequence(seed, spawn_key=(index,)).generate_state(1)[0])
