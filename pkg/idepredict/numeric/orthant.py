"""Monte Carlo lower-orthant probabilities of multivariate normals."""

from dataclasses import dataclass

import numpy as np

from ..utilities.error_handler import DomainError, NotPSDError
from .sampling import RngState

SYMMETRY_TOL = 1e-10
NEGATIVE_EIGEN_TOL = 1e-8
DEFAULT_SAMPLES = 100_000


@dataclass(frozen=True)
class OrthantEstimate:
    """Monte Carlo probability estimate with its binomial standard error."""
    probability: float
    stderr: float
    n_samples: int


def covariance_factor(cov: np.ndarray) -> np.ndarray:
    """
    Square-root factor ``F`` with ``F @ F.T == cov`` from the eigendecomposition.

    Eigenvalues slightly below zero are clamped, which also covers
    rank-deficient covariances.

    Raises:
        DomainError: ``cov`` not square or not symmetric within 1e-10
        NotPSDError: an eigenvalue below ``-1e-8 * max eigenvalue``
    """
    cov = np.atleast_2d(np.asarray(cov, dtype=float))
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] < 1:
        raise DomainError(f"covariance must be a non-empty square matrix, got shape {cov.shape}")
    if not np.all(np.isfinite(cov)):
        raise DomainError("covariance has non-finite entries")
    asym = np.max(np.abs(cov - cov.T))
    if asym > SYMMETRY_TOL:
        raise DomainError(f"covariance is not symmetric (max asymmetry {asym:.3e})")

    eigenvalues, eigenvectors = np.linalg.eigh(0.5 * (cov + cov.T))
    scale = max(float(np.max(eigenvalues)), 0.0)
    smallest = float(np.min(eigenvalues))
    if smallest < -NEGATIVE_EIGEN_TOL * scale or (scale == 0.0 and smallest < 0.0):
        raise NotPSDError(f"covariance is not positive semidefinite (eigenvalue {smallest:.3e})",
                          min_eigenvalue=smallest)
    return eigenvectors * np.sqrt(np.clip(eigenvalues, 0.0, None))


def orthant_from_normals(mu: np.ndarray, factor: np.ndarray,
                         normals: np.ndarray) -> OrthantEstimate:
    """
    Fraction of ``factor @ w <= mu`` over the rows ``w`` of ``normals``.

    Reusing the same ``normals`` for a family of (mu, cov) gives common
    random numbers across the family.
    """
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    draws = normals @ factor.T
    hits = np.all(draws <= mu, axis=1)
    n = hits.size
    p = float(np.count_nonzero(hits)) / n
    return OrthantEstimate(probability=p, stderr=float(np.sqrt(p * (1.0 - p) / n)), n_samples=n)


def mvn_lower_orthant_mc(mu, cov, n_samples: int = DEFAULT_SAMPLES,
                         rng: RngState = RngState(0)) -> OrthantEstimate:
    """
    Estimate ``P(Z <= mu)`` elementwise for ``Z ~ Normal(0, cov)``.

    Args:
        mu: Upper corner of the orthant, length K
        cov: K x K symmetric positive semidefinite covariance
        n_samples: Number of Monte Carlo draws
        rng: Random stream; equal states give equal estimates

    Returns:
        OrthantEstimate: Probability and binomial standard error
    """
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    factor = covariance_factor(cov)
    if factor.shape[0] != mu.size:
        raise DomainError(f"mu has length {mu.size} but cov is {factor.shape[0]}x{factor.shape[0]}")
    if n_samples < 1:
        raise DomainError(f"n_samples must be positive, got {n_samples}")
    normals = rng.generator().standard_normal((n_samples, mu.size))
    return orthant_from_normals(mu, factor, normals)
