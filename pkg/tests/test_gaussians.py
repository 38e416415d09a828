import numpy as np
import pytest
from scipy import integrate

from jetcov import (GeneralizedGaussian, NotPositiveSemidefiniteError,
                    SupportResidualError, empirical_characteristic_function,
                    empirical_second_moments, frobenius_distance,
                    real_covariance, standard_complex_normal, stream)

from conftest import random_psd

SAMPLES = 100_000
BAND = 5.0 / np.sqrt(SAMPLES)


def test_standard_complex_normal_moments():
    z = standard_complex_normal(stream(0), SAMPLES)
    assert abs(np.mean(np.abs(z) ** 2) - 1.0) < BAND
    assert abs(np.mean(z)) < BAND
    assert abs(np.mean(z * z)) < BAND


def test_identity_covariance_unit_moments():
    g = GeneralizedGaussian(np.eye(3))
    z = g.sample(stream(1), SAMPLES)
    cov, pseudo = empirical_second_moments(z)
    assert np.abs(cov - np.eye(3)).max() < BAND
    assert np.abs(pseudo).max() < BAND


def test_zero_covariance_is_point_mass():
    g = GeneralizedGaussian(np.zeros((3, 3)))
    z = g.sample(stream(2), 100)
    assert g.rank == 0
    assert np.all(z == 0)


def test_degenerate_diagonal_covariance():
    g = GeneralizedGaussian(np.diag([2.0, 0.0]))
    z = g.sample(stream(3), SAMPLES)
    assert np.all(z[:, 1] == 0)  # exact: support is the first axis
    emp = np.mean(np.abs(z[:, 0]) ** 2)
    assert abs(emp - 2.0) < 5.0 * 2.0 / np.sqrt(SAMPLES)


def test_rank_one_covariance_samples_parallel(rng):
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    v /= np.linalg.norm(v)
    g = GeneralizedGaussian(np.outer(v, v.conj()))
    assert g.rank == 1
    z = g.sample(stream(4), 200)
    unit = v / np.linalg.norm(v)
    residual = z - np.outer(z @ unit.conj(), unit)
    norms = np.linalg.norm(z, axis=1)
    assert np.all(np.linalg.norm(residual, axis=1) <= 1e-10 * (1 + norms))


def test_sampling_requires_positive_count():
    g = GeneralizedGaussian(np.eye(2))
    with pytest.raises(ValueError):
        g.sample(stream(0), 0)


def test_non_psd_covariance_rejected():
    with pytest.raises(NotPositiveSemidefiniteError):
        GeneralizedGaussian(np.diag([1.0, -0.5]))


def test_density_values_full_rank():
    g = GeneralizedGaussian(np.eye(1))
    assert g.density([0.0]) == pytest.approx(1.0 / np.pi, rel=1e-14)
    assert g.density([1.0]) == pytest.approx(np.exp(-1.0) / np.pi, rel=1e-14)


def test_density_degenerate_matches_restriction_oracle():
    # Density of diag(1, 0) on its support equals that of the 1-d restriction.
    g = GeneralizedGaussian(np.diag([1.0, 0.0]))
    restricted = GeneralizedGaussian(np.eye(1))
    assert g.density([0.0, 0.0]) == pytest.approx(1.0 / np.pi, rel=1e-14)
    for x in (0.3 + 0.1j, -1.2j, 0.7):
        assert g.density([x, 0.0]) == pytest.approx(restricted.density([x]), rel=1e-12)


def test_density_off_support_rejected():
    g = GeneralizedGaussian(np.diag([1.0, 0.0]))
    with pytest.raises(SupportResidualError) as info:
        g.density([0.0, 0.5])
    assert info.value.residual == pytest.approx(0.5, rel=1e-10)


def test_density_normalizes_full_rank():
    # Quadrature oracle: the k=1 density integrates to one over the plane.
    g = GeneralizedGaussian(np.array([[0.7]]))
    total, _ = integrate.dblquad(
        lambda y, x: g.density([x + 1j * y]), -6, 6, -6, 6, epsabs=1e-10)
    assert total == pytest.approx(1.0, abs=1e-8)


def test_characteristic_function_values():
    g = GeneralizedGaussian(np.eye(1))
    assert g.characteristic_function([0.0, 0.0]) == pytest.approx(1.0)
    assert g.characteristic_function([1.0, 0.0]) == pytest.approx(np.exp(-0.25), rel=1e-14)


def test_characteristic_function_integral_oracle():
    # Independent oracle: integrate exp(i t.x) against the density directly.
    g = GeneralizedGaussian(np.eye(1))
    t = np.array([1.3, -0.4])

    def integrand(y, x):
        return g.density([x + 1j * y]) * np.cos(t[0] * x + t[1] * y)

    oracle, _ = integrate.dblquad(integrand, -6, 6, -6, 6, epsabs=1e-10)
    assert complex(g.characteristic_function(t)).real == pytest.approx(oracle, abs=1e-8)


def test_characteristic_function_empirical(rng):
    delta = random_psd(rng, 3)
    g = GeneralizedGaussian(delta)
    z = g.sample(stream(5), SAMPLES)
    for t in (np.array([1.0, 0, 0, 0, 0, 0]),
              np.array([0.3, -0.2, 0.5, 0.1, -0.4, 0.2])):
        emp = empirical_characteristic_function(z, t)
        assert abs(emp - g.characteristic_function(t)) < 0.02


def test_real_covariance_block_structure(rng):
    delta = random_psd(rng, 3)
    c = real_covariance(delta)
    assert np.allclose(c[:3, :3], 0.5 * delta.real)
    assert np.allclose(c[3:, 3:], 0.5 * delta.real)
    assert np.allclose(c[:3, 3:], -0.5 * delta.imag)
    assert np.allclose(c[3:, :3], 0.5 * delta.imag)
    assert np.abs(c - c.T).max() < 1e-12
    # Sample-moment cross-check on (Re z, Im z).
    z = GeneralizedGaussian(delta).sample(stream(6), SAMPLES)
    x = np.hstack([z.real, z.imag])
    emp = x.T @ x / SAMPLES
    assert np.abs(emp - c).max() < 2 * BAND


def test_pushforward_identity(rng):
    delta = random_psd(rng, 3)
    g = GeneralizedGaussian(delta)
    assert frobenius_distance(g.pushforward(np.eye(3)).covariance, g.covariance) < 1e-12


def test_pushforward_coordinate_projection():
    g = GeneralizedGaussian(np.eye(2))
    out = g.pushforward(np.array([[1.0, 0.0]]))
    assert out.covariance.shape == (1, 1)
    assert out.covariance[0, 0] == pytest.approx(1.0)


def test_pushforward_shape_mismatch(rng):
    g = GeneralizedGaussian(np.eye(3))
    with pytest.raises(ValueError):
        g.pushforward(np.zeros((2, 4)))


def test_pushforward_law_monte_carlo(rng):
    delta = random_psd(rng, 4)
    g = GeneralizedGaussian(delta)
    t = (rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))) / 2.0
    target = t @ delta @ t.conj().T
    mapped = g.sample(stream(7), SAMPLES) @ t.T
    cov, _ = empirical_second_moments(mapped)
    scale = np.sqrt(np.outer(np.abs(np.diag(target)), np.abs(np.diag(target)))) + 1e-12
    assert np.all(np.abs(cov - target) < 5.0 * np.sqrt(scale) / np.sqrt(SAMPLES) + 5e-3)


def test_pushforward_two_route_agreement(rng):
    # Mapping samples and sampling the pushforward estimate the same covariance.
    delta = random_psd(rng, 4, rank=2)
    g = GeneralizedGaussian(delta)
    t = (rng.standard_normal((2, 4)) + 1j * rng.standard_normal((2, 4))) / 2.0
    route_a, _ = empirical_second_moments(g.sample(stream(8), SAMPLES) @ t.T)
    route_b, _ = empirical_second_moments(
        g.pushforward(t).sample(stream(9), SAMPLES))
    assert np.abs(route_a - route_b).max() < 10.0 / np.sqrt(SAMPLES)


def test_moment_contract_random_covariances():
    rng = np.random.default_rng(11)
    for trial in range(6):
        dim = int(rng.integers(2, 9))
        rank = dim if trial % 2 == 0 else max(1, dim - int(rng.integers(1, dim)))
        delta = random_psd(rng, dim, rank=rank)
        g = GeneralizedGaussian(delta)
        z = g.sample(stream(100 + trial), SAMPLES)
        cov, pseudo = empirical_second_moments(z)
        diag = np.abs(np.diag(delta)).real
        band = 5.0 * np.sqrt(np.outer(diag, diag)) / np.sqrt(SAMPLES) + 1e-12
        assert np.all(np.abs(cov - delta) < band)
        assert np.all(np.abs(pseudo) < band)
        assert np.all(np.abs(np.mean(z, axis=0)) < 5.0 * np.sqrt(diag / SAMPLES) + 1e-12)


def test_support_invariant_rank_deficient(rng):
    delta = random_psd(rng, 5, rank=2)
    g = GeneralizedGaussian(delta)
    assert g.rank == 2
    z = g.sample(stream(12), 500)
    coords = z @ g.support_vectors.conj()
    residual = z - coords @ g.support_vectors.T
    assert np.all(np.linalg.norm(residual, axis=1)
                  <= 1e-10 * (1 + np.linalg.norm(z, axis=1)))


def test_weak_continuity_proxy(rng):
    # CF of nearby covariances stays within a Lipschitz band of the limit CF.
    delta0 = random_psd(rng, 3)
    bump = random_psd(rng, 3)
    tests = [np.array([1.0, 0, 0, 0.5, 0, 0]),
             np.array([0.2, -0.3, 0.4, 0.0, 0.6, -0.1])]
    for n in (4, 16, 64):
        delta_n = delta0 + bump / n
        g_n = GeneralizedGaussian(delta_n)
        z = g_n.sample(stream(200 + n), SAMPLES)
        dist = frobenius_distance(delta_n, delta0)
        cf0 = GeneralizedGaussian(delta0)
        for t in tests:
            lip = 0.5 * float(t @ t)
            gap = abs(empirical_characteristic_function(z, t)
                      - cf0.characteristic_function(t))
            assert gap <= lip * dist + 3.0 / np.sqrt(SAMPLES)


def test_chunked_sampling_deterministic():
    g = GeneralizedGaussian(np.diag([1.0, 0.5]))
    a = g.sample_chunked(seed=5, count=1000, chunk_size=256)
    b = g.sample_chunked(seed=5, count=1000, chunk_size=256)
    assert np.array_equal(a, b)
    c = g.sample_chunked(seed=5, count=1000, chunk_size=512)
    assert a.shape == c.shape == (1000, 2)
    assert not np.array_equal(a, c)  # chunk size is part of the contract
