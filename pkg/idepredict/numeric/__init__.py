"""
Numeric primitives

- gaussian: Normal cdf/ccdf through the complementary error function
- quadrature: Adaptive Gauss-Kronrod integration with tolerances and budget
- sampling: Seeded random streams and complex/real Gaussian noise
- orthant: Monte Carlo multivariate-normal orthant probabilities
"""

from .gaussian import normal_ccdf, normal_cdf
from .quadrature import (
    QuadResult, QuadTolerances, adaptive_quad, integrate_with,
    DEFAULT_TOLERANCES, BAYES_TOLERANCES, ZZB_TOLERANCES
)
from .sampling import RngState, sample_complex_gaussian, sample_real_gaussian
from .orthant import OrthantEstimate, mvn_lower_orthant_mc, covariance_factor, orthant_from_normals

__all__ = [
    'normal_ccdf',
    'normal_cdf',
    'QuadResult',
    'QuadTolerances',
    'adaptive_quad',
    'integrate_with',
    'DEFAULT_TOLERANCES',
    'BAYES_TOLERANCES',
    'ZZB_TOLERANCES',
    'RngState',
    'sample_complex_gaussian',
    'sample_real_gaussian',
    'OrthantEstimate',
    'mvn_lower_orthant_mc',
    'covariance_factor',
    'orthant_from_normals',
]
