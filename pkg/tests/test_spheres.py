import numpy as np
import pytest
from scipy import integrate
from scipy.special import gammaln

from jetcov import (poincare_borel_check, poincare_borel_sweep,
                    projection_density, sample_sphere,
                    spherical_pushforward_covariance, stream)

SAMPLES = 100_000


def sphere_area(n):
    return 2.0 * np.pi ** (n / 2.0) / np.exp(gammaln(n / 2.0))


def test_samples_have_unit_norm():
    x = sample_sphere(7, stream(0), 1000)
    assert np.abs(np.linalg.norm(x, axis=1) - 1.0).max() < 1e-12


def test_low_dimension_coordinate_means():
    x = sample_sphere(2, stream(1), SAMPLES)
    assert np.abs(x.mean(axis=0)).max() < 0.02


def test_coordinate_second_moment_is_one_over_d():
    x = sample_sphere(3, stream(2), SAMPLES)
    assert abs(np.mean(x[:, 0] ** 2) - 1.0 / 3.0) < 0.01


def test_sphere_covariance_identity_over_d():
    for d in (2, 10, 100):
        x = sample_sphere(d, stream(3), SAMPLES)
        emp = x.T @ x / SAMPLES
        assert np.abs(emp - np.eye(d) / d).max() < 5.0 / np.sqrt(SAMPLES)


def test_sample_sphere_validation():
    with pytest.raises(ValueError):
        sample_sphere(0, stream(0), 1)
    with pytest.raises(ValueError):
        sample_sphere(3, stream(0), 0)


def test_projection_density_uniform_for_d3_k1():
    # The d=3, k=1 marginal is uniform on (-sqrt(3), sqrt(3)).
    for x in (-1.5, -0.2, 0.0, 0.9, 1.7):
        assert projection_density(3, 1, [x]) == pytest.approx(1.0 / (2.0 * np.sqrt(3.0)),
                                                              rel=1e-14)
    assert projection_density(3, 1, [np.sqrt(3.0) + 1e-9]) == 0.0
    assert projection_density(3, 1, [-5.0]) == 0.0


def test_projection_density_requires_margin():
    with pytest.raises(ValueError):
        projection_density(4, 3, [0.0, 0.0, 0.0])


def test_projection_density_gaussian_limit_value():
    val = projection_density(10_000, 2, [0.0, 0.0])
    assert abs(val - 1.0 / (2.0 * np.pi)) < 1e-3


def _radial_integral(d, k):
    # Independent normalization oracle: reduce to a 1-d radial integral.
    def radial(r):
        return projection_density(d, k, np.array([[r] + [0.0] * (k - 1)])) [0] * r ** (k - 1)

    upper = np.sqrt(d)
    value, _ = integrate.quad(radial, 0.0, upper, epsabs=1e-12, limit=200)
    return sphere_area(k) * value if k > 1 else 2.0 * value


def test_projection_density_normalization():
    for d, k in ((5, 1), (10, 3), (100, 2)):
        assert _radial_integral(d, k) == pytest.approx(1.0, abs=1e-6)


def test_projection_density_gaussian_envelope():
    # psi_d(x) <= e^{(k+2)/2} (2 pi)^{-k/2} e^{-|x|^2/2} for all d >= k + 2.
    for d, k in ((5, 1), (10, 3), (12, 2), (1000, 1)):
        c_k = np.exp(0.5 * (k + 2)) * (2.0 * np.pi) ** (-k / 2.0)
        radii = np.linspace(0.0, np.sqrt(d) * 0.999, 200)
        pts = np.zeros((radii.size, k))
        pts[:, 0] = radii
        vals = projection_density(d, k, pts)
        envelope = c_k * np.exp(-0.5 * radii ** 2)
        assert np.all(vals <= envelope * (1.0 + 1e-12))


def test_projection_density_pointwise_gaussian_limit():
    xs = np.linspace(-3.0, 3.0, 121)[:, None]
    normal = np.exp(-0.5 * xs[:, 0] ** 2) / np.sqrt(2.0 * np.pi)
    gaps = []
    for d in (100, 1000, 10_000):
        vals = projection_density(d, 1, xs)
        gaps.append(np.abs(vals - normal).max())
    assert gaps[0] > gaps[1] > gaps[2]


def test_poincare_borel_check_large_d():
    report = poincare_borel_check(1000, 1, stream(4), SAMPLES)
    assert report.ks_distances[0] < 0.01
    assert abs(report.covariance[0, 0] - 1.0) < 0.02


def test_poincare_borel_small_d_covariance():
    report = poincare_borel_check(4, 2, stream(5), SAMPLES)
    assert np.abs(report.covariance - np.eye(2)).max() < 0.02


def test_poincare_borel_sweep_decreasing():
    reports = poincare_borel_sweep((10, 100, 1000), 1, seed=0, samples=SAMPLES)
    ks = [float(r.ks_distances[0]) for r in reports]
    assert ks[0] > ks[1] > ks[2]
    assert ks[2] < 0.01


def test_poincare_borel_sweep_validation():
    with pytest.raises(ValueError):
        poincare_borel_sweep((100, 10), 1, seed=0, samples=100)
    with pytest.raises(ValueError):
        poincare_borel_sweep((2, 10), 1, seed=0, samples=100)


def test_spherical_pushforward_projection_recovers_identity():
    d = 50
    t = np.sqrt(d) * np.eye(3, d)
    cov = spherical_pushforward_covariance(t, stream(6), SAMPLES)
    assert np.abs(cov - np.eye(3)).max() < 5.0 / np.sqrt(SAMPLES)


def test_spherical_pushforward_zero_map():
    cov = spherical_pushforward_covariance(np.zeros((2, 9)), stream(7), 100)
    assert np.all(cov == 0)


def test_spherical_pushforward_random_map(rng):
    d, k = 50, 3
    t = rng.standard_normal((k, d)) + 1j * rng.standard_normal((k, d))
    target = t @ t.conj().T / d
    cov = spherical_pushforward_covariance(t, stream(8), SAMPLES)
    diag = np.abs(np.diag(target)).real
    band = 5.0 * np.sqrt(np.outer(diag, diag)) / np.sqrt(SAMPLES)
    assert np.all(np.abs(cov - target) < band)
