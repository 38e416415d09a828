"""Numerical laboratory for jet covariances of random holomorphic sections.

Generalized complex Gaussian measures with semi-definite covariance, uniform
measures on high-dimensional spheres and their Gaussian limits, section
ensembles with computable reproducing kernels, and the exact, empirical, and
limiting covariance matrices of section jets.
"""

from .ensembles import (BargmannFockEnsemble, GramEnsemble,
                        IllConditionedGramError, KaehlerPotential,
                        ModelFamily, MonomialBasis, SectionEnsemble,
                        bargmann_fock_family, flat_potential,
                        fubini_study_ensemble, fubini_study_family,
                        fubini_study_potential, monomial_exponents)
from .gaussians import (GeneralizedGaussian, SupportResidualError,
                        empirical_characteristic_function,
                        empirical_second_moments, real_covariance,
                        standard_complex_normal)
from .jets import (COEFFICIENT_LAWS, ConvergencePoint, ConvergenceReport,
                   CovarianceBlocks, JetLayout, PointConfiguration,
                   converge_sweep, draw_coefficients, empirical_covariance,
                   exact_covariance, fit_loglog_slope, heisenberg_kernel,
                   jet_eval, jet_matrix, jpd_measure, limit_covariance,
                   limit_covariance_blocks, scaled_covariance)
from .linalg import (DEFAULT_PSD_TOL, EigenConvergenceError,
                     EigenDecomposition, NotPositiveSemidefiniteError,
                     frobenius_distance, hermitian_eig, hermitian_part,
                     psd_project, spectral_distance)
from .quadrature import (ComplexQuadrature, gaussian_weight_rule, polar_rule,
                         rational_weight_rule)
from .rng import DEFAULT_CHUNK, chunk_layout, chunk_stream, stream
from .spheres import (PoincareBorelReport, poincare_borel_check,
                      poincare_borel_sweep, projection_density, sample_sphere,
                      spherical_pushforward_covariance)

__version__ = "0.1.0"

__all__ = [
    "BargmannFockEnsemble", "COEFFICIENT_LAWS", "ComplexQuadrature",
    "ConvergencePoint", "ConvergenceReport", "CovarianceBlocks",
    "DEFAULT_CHUNK", "DEFAULT_PSD_TOL", "EigenConvergenceError",
    "EigenDecomposition", "GeneralizedGaussian", "GramEnsemble",
    "IllConditionedGramError", "JetLayout", "KaehlerPotential", "ModelFamily",
    "MonomialBasis", "NotPositiveSemidefiniteError", "PoincareBorelReport",
    "PointConfiguration", "SectionEnsemble", "SupportResidualError",
    "bargmann_fock_family", "chunk_layout", "chunk_stream", "converge_sweep",
    "draw_coefficients", "empirical_characteristic_function",
    "empirical_covariance", "empirical_second_moments", "exact_covariance",
    "fit_loglog_slope", "flat_potential", "frobenius_distance",
    "fubini_study_ensemble", "fubini_study_family", "fubini_study_potential",
    "gaussian_weight_rule", "heisenberg_kernel", "hermitian_eig",
    "hermitian_part", "jet_eval", "jet_matrix", "jpd_measure",
    "limit_covariance", "limit_covariance_blocks", "monomial_exponents",
    "poincare_borel_check", "poincare_borel_sweep", "polar_rule",
    "projection_density", "psd_project", "rational_weight_rule",
    "real_covariance", "sample_sphere", "scaled_covariance",
    "spectral_distance", "spherical_pushforward_covariance",
    "standard_complex_normal", "stream",
]
