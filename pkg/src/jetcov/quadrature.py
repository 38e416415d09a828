"""Quadrature rules for Hermitian inner products on the complex plane.

A rule carries nodes ``z_i`` and positive weights ``w_i`` approximating
``<f, g> = integral of f conj(g) rho dA`` for a radial weight ``rho(|z|^2)``.
Rules are built in polar form: a 1-d radial rule in ``t = r^2`` crossed with
equally spaced angles.  With ``n_angular > D`` angles the angular sum kills
every ``z^a conj(z)^b`` cross term with ``0 < |a - b| <= D`` exactly, so
bilinear exactness for polynomial degrees up to ``D`` only requires the
radial rule to integrate ``t^a rho(t)`` for ``a <= D``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import roots_laguerre


@dataclass(frozen=True)
class ComplexQuadrature:
    """Nodes ``(Q,)`` complex and weights ``(Q,)`` positive, weight folded in."""

    nodes: np.ndarray
    weights: np.ndarray

    def inner(self, f_values, g_values) -> complex:
        """Discrete inner product of function values at the nodes."""
        return complex(np.sum(self.weights * np.asarray(f_values)
                              * np.conj(np.asarray(g_values))))


def polar_rule(radial_nodes, radial_weights, n_angular: int) -> ComplexQuadrature:
    """Cross a radial rule in ``t = r^2`` with ``n_angular`` uniform angles.

    The radial rule approximates ``integral g(t) rho(t) dt``; the assembled
    plane rule then approximates ``integral f rho(|z|^2) dA`` with weights
    ``pi * v_i / n_angular`` at nodes ``sqrt(t_i) exp(2 pi i j / n_angular)``.
    """
    t = np.asarray(radial_nodes, dtype=float)
    v = np.asarray(radial_weights, dtype=float)
    if t.shape != v.shape or t.ndim != 1:
        raise ValueError("radial nodes and weights must be matching 1-d arrays")
    if n_angular < 1:
        raise ValueError("n_angular must be positive")
    angles = np.exp(2j * np.pi * np.arange(n_angular) / n_angular)
    nodes = (np.sqrt(t)[:, None] * angles[None, :]).ravel()
    weights = np.repeat(np.pi * v / n_angular, n_angular)
    return ComplexQuadrature(nodes, weights)


def gaussian_weight_rule(rate: float, degree: int) -> ComplexQuadrature:
    """Plane rule for the weight ``exp(-rate |z|^2)``.

    Exact for ``f conj(g)`` with ``f, g`` polynomials of degree at most
    ``degree``: Gauss-Laguerre handles ``t^a exp(-rate t)`` up to
    ``a = degree`` and the angular count exceeds ``degree``.
    """
    if rate <= 0:
        raise ValueError("rate must be positive")
    n_radial = degree // 2 + 1
    s, u = roots_laguerre(n_radial)
    return polar_rule(s / rate, u / rate, degree + 1)


def rational_weight_rule(power: int, degree: int) -> ComplexQuadrature:
    """Plane rule for the weight ``(1 + |z|^2)^(-power)``.

    Substituting ``t = s / (1 - s)`` turns ``t^a (1 + t)^(-power)`` into the
    polynomial ``s^a (1 - s)^(power - 2 - a)`` on (0, 1), so Gauss-Legendre
    is exact for ``a <= degree`` whenever ``power >= degree + 2``.
    """
    if power < degree + 2:
        raise ValueError(f"need power >= degree + 2, got power={power}, degree={degree}")
    n_radial = (power - 2) // 2 + 1
    x, w = leggauss(n_radial)
    s = 0.5 * (x + 1.0)
    w = 0.5 * w
    t = s / (1.0 - s)
    v = w * (1.0 - s) ** (power - 2)
    return polar_rule(t, v, degree + 1)
