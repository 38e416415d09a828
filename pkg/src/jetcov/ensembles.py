"""Finite-dimensional section ensembles with computable reproducing kernels.

An ensemble is an orthonormal family of holomorphic sections together with
evaluators for the equivariant lift at angle zero: the lifted value and the
horizontal derivatives.  For a Kaehler potential ``phi`` the lift of a
coefficient function ``f`` is ``f exp(-N phi / 2)``, its holomorphic
horizontal derivative is ``(df/dz_q - N (dphi/dz_q) f) exp(-N phi / 2)``, and
the anti-holomorphic horizontal derivative is ``(df/dzbar_q) exp(-N phi / 2)``,
which vanishes identically for holomorphic ``f``.

Two families are provided: the truncated Bargmann-Fock ensemble, whose
orthonormalization is known in closed form, and Gram ensembles that
orthonormalize an arbitrary raw basis against a quadrature inner product via
the inverse Cholesky factor of the Gram matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import cholesky, solve_triangular
from scipy.special import gammaln

from .linalg import hermitian_part
from .quadrature import ComplexQuadrature

#: Node block size for Gram matrix accumulation.
_GRAM_CHUNK = 4096


class IllConditionedGramError(ValueError):
    """The raw basis is numerically dependent under the quadrature inner product."""

    def __init__(self, condition: float, limit: float):
        self.condition = float(condition)
        self.limit = float(limit)
        super().__init__(
            f"Gram matrix condition number {self.condition:.3e} exceeds {self.limit:.3e}"
        )


@dataclass(frozen=True)
class KaehlerPotential:
    """Potential ``phi`` and its holomorphic gradient, defining lift and connection."""

    phi: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]


def flat_potential() -> KaehlerPotential:
    """Euclidean potential ``|z|^2`` with gradient ``conj(z)``."""
    return KaehlerPotential(
        phi=lambda z: float(np.sum((z * z.conj()).real)),
        grad=lambda z: z.conj(),
    )


def fubini_study_potential() -> KaehlerPotential:
    """Potential ``log(1 + |z|^2)`` of the round metric on the plane."""

    def phi(z: np.ndarray) -> float:
        return float(np.log1p(np.sum((z * z.conj()).real)))

    def grad(z: np.ndarray) -> np.ndarray:
        return z.conj() / (1.0 + np.sum((z * z.conj()).real))

    return KaehlerPotential(phi=phi, grad=grad)


def monomial_exponents(m: int, max_degree: int) -> np.ndarray:
    """All exponent tuples in N^m of total degree <= max_degree, graded order."""
    if m < 1:
        raise ValueError("m must be at least 1")

    def parts(coords: int, total: int):
        if coords == 1:
            yield (total,)
            return
        for first in range(total, -1, -1):
            for rest in parts(coords - 1, total - first):
                yield (first,) + rest

    rows = [alpha for total in range(max_degree + 1) for alpha in parts(m, total)]
    return np.array(rows, dtype=int)


class SectionEnsemble:
    """Shared evaluator surface; subclasses fill in ``basis_jets``."""

    m: int
    N: int
    dim: int
    limit_factor: float

    def basis_jets(self, z) -> np.ndarray:
        """Lifted value and horizontal derivatives of every basis section.

        Returns a ``(dim, 1 + 2m)`` array: column 0 the lifted values, columns
        ``1..m`` the holomorphic horizontal derivatives, columns ``m+1..2m``
        the anti-holomorphic ones (identically zero here: the bases are
        holomorphic).
        """
        raise NotImplementedError

    def basis_values(self, z) -> np.ndarray:
        return self.basis_jets(z)[:, 0]

    def kernel(self, z, w) -> complex:
        """Reproducing kernel ``sum_j S_j(z) conj(S_j(w))`` of lifted values."""
        return complex(self.basis_values(z) @ self.basis_values(w).conj())


class BargmannFockEnsemble(SectionEnsemble):
    """Monomials of total degree <= N orthonormalized against ``exp(-N |z|^2)``.

    The normalized lifted basis is
    ``S_alpha(z) = sqrt(N^(|alpha| + m) / (pi^m alpha!)) z^alpha exp(-N |z|^2 / 2)``
    and all evaluators are closed-form.  Ladder recurrences keep every factor
    within the bound ``|S_alpha(z)| <= (N / pi)^(m/2)``, so evaluation does
    not overflow at any point or degree.
    """

    def __init__(self, m: int, N: int):
        if m < 1 or N < 1:
            raise ValueError("need m >= 1 and N >= 1")
        self.m = m
        self.N = N
        self._alphas = monomial_exponents(m, N)
        self.dim = self._alphas.shape[0]  # == C(N + m, m)
        # Large-N limit of N^m / dim for this family.
        self.limit_factor = float(math.factorial(m))

    def _ladders(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Per-coordinate arrays T[q, a] = sqrt(N/pi) sqrt(N^a/a!) z_q^a e^{-N|z_q|^2/2}
        and D[q, a] = sqrt(N a) T[q, a-1]."""
        n, m = self.N, self.m
        t = np.empty((m, n + 1), dtype=complex)
        t[:, 0] = np.sqrt(n / np.pi) * np.exp(-0.5 * n * (z * z.conj()).real)
        for a in range(1, n + 1):
            t[:, a] = t[:, a - 1] * z * np.sqrt(n / a)
        d = np.zeros((m, n + 1), dtype=complex)
        d[:, 1:] = t[:, :-1] * np.sqrt(n * np.arange(1, n + 1))
        return t, d

    def basis_jets(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex).reshape(self.m)
        t, d = self._ladders(z)
        cols = np.arange(self.m)
        factors = t[cols[None, :], self._alphas]  # (dim, m)
        jets = np.zeros((self.dim, 1 + 2 * self.m), dtype=complex)
        jets[:, 0] = factors.prod(axis=1)
        zbar = z.conj()
        for q in range(self.m):
            others = np.prod(np.delete(factors, q, axis=1), axis=1)
            dq = d[q, self._alphas[:, q]]
            jets[:, 1 + q] = (dq - self.N * zbar[q] * factors[:, q]) * others
        return jets

    def basis_values(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex).reshape(self.m)
        t, _ = self._ladders(z)
        cols = np.arange(self.m)
        return t[cols[None, :], self._alphas].prod(axis=1)


class MonomialBasis:
    """Raw one-variable monomials ``scale_a z^a`` for a Gram ensemble.

    ``scale`` rescales each degree; feeding well-scaled monomials keeps the
    Gram matrix conditioned.  Evaluation threads an optional prefactor through
    the degree ladder so weight factors can be folded in before any large
    power is formed.
    """

    def __init__(self, degree: int, scale=None):
        if degree < 0:
            raise ValueError("degree must be non-negative")
        self.degree = degree
        self.count = degree + 1
        if scale is None:
            scale = np.ones(self.count)
        self.scale = np.asarray(scale, dtype=float)
        if self.scale.shape != (self.count,) or np.any(self.scale <= 0):
            raise ValueError("scale must be positive with one entry per degree")
        self._ratio = np.ones(self.count)
        self._ratio[1:] = self.scale[1:] / self.scale[:-1]

    def value_matrix(self, nodes, prefactor=None) -> np.ndarray:
        """Values ``prefactor_i scale_a z_i^a`` as a ``(Q, count)`` array."""
        z = np.asarray(nodes, dtype=complex).ravel()
        out = np.empty((z.size, self.count), dtype=complex)
        start = self.scale[0] if prefactor is None else self.scale[0] * np.asarray(prefactor)
        out[:, 0] = start
        for a in range(1, self.count):
            out[:, a] = out[:, a - 1] * z * self._ratio[a]
        return out

    def jets(self, z: complex, prefactor: float = 1.0) -> np.ndarray:
        """Values and first derivatives at one point, ``(count, 2)``."""
        values = self.value_matrix(np.array([z]), np.array([prefactor]))[0]
        derivs = np.zeros(self.count, dtype=complex)
        degrees = np.arange(1, self.count)
        derivs[1:] = degrees * self._ratio[1:] * values[:-1]
        return np.stack([values, derivs], axis=1)


class GramEnsemble(SectionEnsemble):
    """Raw basis orthonormalized by the inverse Cholesky factor of its Gram matrix.

    The Gram matrix is accumulated from quadrature nodes with the square root
    of each node weight folded into the basis ladder, so badly scaled node
    values never materialize.  Construction fails with the estimated condition
    number when the basis is numerically dependent.
    """

    def __init__(self, N: int, basis: MonomialBasis, rule: ComplexQuadrature,
                 potential: KaehlerPotential, limit_factor: float = 1.0,
                 max_condition: float = 1e12):
        if N < 1:
            raise ValueError("N must be at least 1")
        self.m = 1
        self.N = N
        self.basis = basis
        self.potential = potential
        self.dim = basis.count
        self.limit_factor = float(limit_factor)
        gram = np.zeros((self.dim, self.dim), dtype=complex)
        nodes = rule.nodes
        sqrt_w = np.sqrt(rule.weights)
        for lo in range(0, nodes.size, _GRAM_CHUNK):
            hi = min(lo + _GRAM_CHUNK, nodes.size)
            v = basis.value_matrix(nodes[lo:hi], sqrt_w[lo:hi])
            gram += v.conj().T @ v
        gram = hermitian_part(gram)
        eigs = np.linalg.eigvalsh(gram)
        if eigs[0] <= 0:
            raise IllConditionedGramError(np.inf, max_condition)
        condition = float(eigs[-1] / eigs[0])
        if condition > max_condition:
            raise IllConditionedGramError(condition, max_condition)
        self.gram = gram
        lower = cholesky(gram, lower=True)
        self._transform = solve_triangular(lower, np.eye(self.dim, dtype=complex),
                                           lower=True)

    def basis_jets(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex).reshape(1)
        lift = float(np.exp(-0.5 * self.N * self.potential.phi(z)))
        raw = self.basis.jets(complex(z[0]), prefactor=lift)
        ortho = self._transform @ raw
        jets = np.zeros((self.dim, 3), dtype=complex)
        jets[:, 0] = ortho[:, 0]
        jets[:, 1] = ortho[:, 1] - self.N * self.potential.grad(z)[0] * ortho[:, 0]
        return jets


def fubini_study_ensemble(N: int) -> GramEnsemble:
    """Degree <= N monomials under the inner product with weight ``(1+|z|^2)^(-N-2)``.

    The raw monomials carry binomial scales ``sqrt(C(N, a))``, which makes the
    Gram matrix a multiple of the identity instead of exponentially
    ill-conditioned; the span, and hence the ensemble, is unchanged.
    """
    from .quadrature import rational_weight_rule

    degrees = np.arange(N + 1)
    log_binom = (gammaln(N + 1) - gammaln(degrees + 1) - gammaln(N - degrees + 1))
    scale = np.exp(0.5 * log_binom)  # sqrt(C(N, a)) without integer overflow
    basis = MonomialBasis(N, scale)
    rule = rational_weight_rule(N + 2, N)
    return GramEnsemble(N, basis, rule, fubini_study_potential(), limit_factor=1.0)


@dataclass(frozen=True)
class ModelFamily:
    """A section-ensemble family indexed by the tensor power N."""

    name: str
    m: int
    build: Callable[[int], SectionEnsemble]
    limit_factor: float


def bargmann_fock_family(m: int) -> ModelFamily:
    return ModelFamily("bargmann-fock", m,
                       lambda N: BargmannFockEnsemble(m, N),
                       float(math.factorial(m)))


def fubini_study_family() -> ModelFamily:
    return ModelFamily("fubini-study", 1, fubini_study_ensemble, 1.0)
