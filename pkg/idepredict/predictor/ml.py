"""Maximum-likelihood prediction for parametric mean models."""

from typing import Callable

import numpy as np

from ..models.manifold import ManifoldModel
from ..numeric.gaussian import normal_ccdf
from ..numeric.quadrature import DEFAULT_TOLERANCES, QuadTolerances
from ..utilities.error_handler import DomainError
from .core import PredictionResult, error_limits, finish, integrate_error_weighted


def check_sigma2(sigma2: float, name: str = "sigma2") -> float:
    if not (sigma2 > 0 and np.isfinite(sigma2)):
        raise DomainError(f"{name} must be positive and finite, got {sigma2}",
                          parameter=name, value=sigma2)
    return float(sigma2)


def scalar_parameter(model: ManifoldModel, theta_bar) -> float:
    if model.param_dim != 1:
        raise DomainError(
            f"{model.name} has {model.param_dim} parameters; restrict it with "
            f"fix_parameters or use the nuisance predictors")
    return float(model.check(theta_bar, what="true value")[0])


def shifted_difference(model: ManifoldModel, theta_bar: float) -> Callable[[float], np.ndarray]:
    """``eps -> m(theta_bar + 2 eps) - m(theta_bar)`` for a one-parameter model."""
    lo, hi = model.supports[0]
    m_bar = model.mean(theta_bar)

    def difference(eps: float) -> np.ndarray:
        shifted = min(max(theta_bar + 2.0 * eps, lo), hi)
        return model.mean_fn(np.array([[shifted]]))[0] - m_bar

    return difference


def ml_exceedance(model: ManifoldModel, theta_bar: float,
                  sigma2: float) -> Callable[[float], float]:
    """Pairwise ML exceedance ``ccdf(||m_tilde||; 0, c * sigma2)``."""
    difference = shifted_difference(model, theta_bar)
    variance = model.noise_kind.difference_variance_factor * sigma2

    def exceed(eps: float) -> float:
        return normal_ccdf(np.linalg.norm(difference(eps)), 0.0, variance)

    return exceed


def mse_hat_ml_scalar(model: ManifoldModel, theta_bar: float, sigma2: float,
                      tols: QuadTolerances = DEFAULT_TOLERANCES) -> PredictionResult:
    """
    Predicted MSE of the ML estimator of a scalar parameter.

    Complex circular noise uses the pairwise variance ``2 sigma2``; real noise
    uses ``4 sigma2``.

    Args:
        model: One-parameter mean model with finite support
        theta_bar: True value
        sigma2: Noise variance per sample
        tols: Quadrature tolerances

    Returns:
        PredictionResult
    """
    sigma2 = check_sigma2(sigma2)
    theta_bar = scalar_parameter(model, theta_bar)
    lo, hi = error_limits(model.supports[0], theta_bar)
    quad = integrate_error_weighted(ml_exceedance(model, theta_bar, sigma2), lo, hi, tols)
    return finish(quad, "ml")
