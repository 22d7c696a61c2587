"""ML prediction with nuisance parameters concentrated out over a finite grid."""

import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ..models.manifold import ManifoldModel
from ..numeric.gaussian import normal_ccdf
from ..numeric.orthant import covariance_factor, orthant_from_normals
from ..numeric.quadrature import DEFAULT_TOLERANCES, QuadTolerances
from ..numeric.sampling import RngState
from ..utilities.error_handler import DomainError
from .core import PredictionResult, error_limits, finish, integrate_error_weighted
from .ml import check_sigma2

logger = logging.getLogger(__name__)

DEFAULT_MAX_GRID = 25
DEFAULT_MC_SAMPLES = 100_000


@dataclass(frozen=True, eq=False)
class NuisanceGrid:
    """Candidate nuisance vectors; row ``true_index`` holds the true nuisance value."""
    points: np.ndarray
    true_index: int = 0
    offsets: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float)
        if points.ndim == 1:
            points = points[:, None]
        if points.ndim != 2 or points.shape[0] == 0:
            raise DomainError(f"nuisance grid must be a non-empty (K, J-1) array, got {points.shape}")
        if not 0 <= self.true_index < points.shape[0]:
            raise DomainError(f"true_index {self.true_index} outside grid of size {points.shape[0]}")
        if np.unique(points, axis=0).shape[0] != points.shape[0]:
            raise DomainError("nuisance grid contains duplicate points")
        object.__setattr__(self, "points", points)

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def true_value(self) -> np.ndarray:
        return self.points[self.true_index]


def build_nuisance_grid(theta_bar_nuis: float, e_max: float, n_log: int = 60,
                        lower_floor: float = 1e-7,
                        support: Optional[Tuple[float, float]] = None) -> NuisanceGrid:
    """
    Log-spaced grid around a scalar nuisance value.

    The grid holds ``theta_bar_nuis`` and ``theta_bar_nuis -/+ e_i`` for
    ``n_log`` offsets ``e_i`` logarithmically spaced from ``lower_floor`` to
    ``e_max``. Points outside ``support`` are dropped.
    """
    if not 0 < lower_floor < e_max:
        raise DomainError(f"need 0 < lower_floor < e_max, got {lower_floor} and {e_max}")
    if n_log < 1:
        raise DomainError(f"n_log must be at least 1, got {n_log}")
    offsets = np.logspace(np.log10(lower_floor), np.log10(e_max), n_log)
    center = float(theta_bar_nuis)
    candidates = np.concatenate([[center], center - offsets, center + offsets])
    if support is not None:
        lo, hi = support
        if not lo <= center <= hi:
            raise DomainError(f"nuisance value {center} outside support [{lo}, {hi}]")
        candidates = candidates[(candidates >= lo) & (candidates <= hi)]
    return NuisanceGrid(points=candidates[:, None], true_index=0, offsets=offsets)


class _NuisanceDifferences:
    """``eps -> M_tilde`` with one row ``m(theta1 + 2 eps, t_k) - m(theta_bar)`` per grid point."""

    def __init__(self, model: ManifoldModel, theta1_bar: float, grid: NuisanceGrid,
                 estimate_index: int):
        if model.param_dim < 2:
            raise DomainError(f"{model.name} has no nuisance parameters")
        if not 0 <= estimate_index < model.param_dim:
            raise DomainError(f"estimate_index {estimate_index} out of range")
        nuisance_index = [i for i in range(model.param_dim) if i != estimate_index]
        if grid.points.shape[1] != len(nuisance_index):
            raise DomainError(
                f"grid has {grid.points.shape[1]} nuisance column(s), "
                f"model needs {len(nuisance_index)}")
        theta_bar = np.empty(model.param_dim)
        theta_bar[estimate_index] = theta1_bar
        theta_bar[nuisance_index] = grid.true_value
        self.m_bar = model.mean(theta_bar)
        self.thetas = np.repeat(theta_bar[None, :], grid.size, axis=0)
        self.thetas[:, nuisance_index] = grid.points
        model.mean_batch(self.thetas)
        self.model = model
        self.estimate_index = estimate_index
        self.theta1_bar = float(theta1_bar)
        self.bounds = model.supports[estimate_index]

    def __call__(self, eps: float) -> np.ndarray:
        lo, hi = self.bounds
        thetas = self.thetas.copy()
        thetas[:, self.estimate_index] = min(max(self.theta1_bar + 2.0 * eps, lo), hi)
        return self.model.mean_fn(thetas) - self.m_bar[None, :]


def mse_hat_ml_nuisance_min(model: ManifoldModel, theta1_bar: float, grid: NuisanceGrid,
                            sigma2: float, tols: QuadTolerances = DEFAULT_TOLERANCES,
                            estimate_index: int = 0) -> PredictionResult:
    """
    Predicted MSE of the joint ML estimator, nuisance minimized over the grid.

    The exceedance probability uses the closest competing mean,
    ``ccdf(min_k ||m_tilde_k||; 0, c * sigma2)``.

    Args:
        model: Full J-parameter model
        theta1_bar: True value of the parameter of interest
        grid: Nuisance grid containing the true nuisance value
        sigma2: Noise variance
        tols: Quadrature tolerances
        estimate_index: Index of the parameter of interest within the model
    """
    sigma2 = check_sigma2(sigma2)
    differences = _NuisanceDifferences(model, theta1_bar, grid, estimate_index)
    variance = model.noise_kind.difference_variance_factor * sigma2

    def exceed(eps: float) -> float:
        distance = float(np.min(np.linalg.norm(differences(eps), axis=1)))
        return normal_ccdf(distance, 0.0, variance)

    lo, hi = error_limits(model.supports[estimate_index], differences.theta1_bar)
    quad = integrate_error_weighted(exceed, lo, hi, tols)
    return finish(quad, "ml-nuisance-min")


def mse_hat_ml_nuisance_full(model: ManifoldModel, theta1_bar: float, grid: NuisanceGrid,
                             sigma2: float, mc_samples: int = DEFAULT_MC_SAMPLES,
                             rng: RngState = RngState(0),
                             tols: QuadTolerances = DEFAULT_TOLERANCES,
                             max_grid: int = DEFAULT_MAX_GRID,
                             estimate_index: int = 0) -> PredictionResult:
    """
    Predicted MSE of the joint ML estimator using the full union probability.

    At each ``eps`` the probability that any grid competitor beats the truth,
    ``1 - P(Z <= ||m_tilde_k||^2 for all k)`` with
    ``Z ~ Normal(0, c * sigma2 * Re{M_tilde^H M_tilde})``, is estimated by Monte
    Carlo. One set of normal draws is shared by all ``eps`` so the integrand
    is a deterministic function of ``eps``. The reported ``stderr`` is the
    integral of the pointwise standard errors.

    Raises:
        DomainError: grid larger than ``max_grid``
    """
    sigma2 = check_sigma2(sigma2)
    if grid.size > max_grid:
        raise DomainError(
            f"nuisance grid of {grid.size} points exceeds the limit of {max_grid} for the "
            f"full form; shrink the grid or use the min form",
            parameter="grid", value=grid.size)
    if mc_samples < 2:
        raise DomainError(f"mc_samples must be at least 2, got {mc_samples}")
    differences = _NuisanceDifferences(model, theta1_bar, grid, estimate_index)
    scale = model.noise_kind.difference_variance_factor * sigma2
    normals = rng.generator().standard_normal((mc_samples, grid.size))
    cache = {}

    def estimate(eps: float) -> Tuple[float, float]:
        if eps not in cache:
            diff = differences(eps)
            mu = np.sum(np.abs(diff) ** 2, axis=1)
            cov = scale * np.real(np.conj(diff) @ diff.T)
            result = orthant_from_normals(mu, covariance_factor(cov), normals)
            cache[eps] = (1.0 - result.probability, result.stderr)
        return cache[eps]

    lo, hi = error_limits(model.supports[estimate_index], differences.theta1_bar)
    value = integrate_error_weighted(lambda e: estimate(e)[0], lo, hi, tols,
                                     raise_on_budget=False)
    spread = integrate_error_weighted(lambda e: estimate(e)[1], lo, hi, tols,
                                      raise_on_budget=False)
    logger.debug(f"full nuisance form: {len(cache)} orthant estimates, "
                 f"K={grid.size}, samples={mc_samples}")
    return finish(value, "ml-nuisance-full", stderr=spread.value)
