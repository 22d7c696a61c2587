"""Prediction for the mismatched maximum-likelihood (MML) estimator."""

import numpy as np

from ..models.manifold import MismatchPair
from ..numeric.gaussian import normal_ccdf
from ..numeric.quadrature import DEFAULT_TOLERANCES, QuadTolerances
from .core import PredictionResult, error_limits, finish, integrate_error_weighted
from .ml import check_sigma2, scalar_parameter, shifted_difference


def mse_hat_mml(pair: MismatchPair, theta_bar: float,
                tols: QuadTolerances = DEFAULT_TOLERANCES) -> PredictionResult:
    """
    Predicted MSE of ML under the assumed model when data follow the true model.

    With ``m_tilde`` from the assumed model and ``mu = m_true - m_assumed`` at
    ``theta_bar``, the exceedance probability is
    ``ccdf(||m_tilde|| - 2 Re{m_tilde^H mu} / ||m_tilde||; 0, c * sigma_bar2)``.
    A zero ``m_tilde`` counts as a tie with probability one half.

    Args:
        pair: True and assumed models with their noise variances
        theta_bar: True parameter value
        tols: Quadrature tolerances
    """
    assumed = pair.assumed_model
    true_variance = check_sigma2(pair.true_noise_variance, "true_noise_variance")
    theta_bar = scalar_parameter(assumed, theta_bar)
    offset = pair.mu(theta_bar)
    difference = shifted_difference(assumed, theta_bar)
    variance = pair.true_model.noise_kind.difference_variance_factor * true_variance

    def exceed(eps: float) -> float:
        d = difference(eps)
        norm = float(np.linalg.norm(d))
        if norm == 0.0:
            return normal_ccdf(0.0, 0.0, variance)
        return normal_ccdf(norm - 2.0 * float(np.real(np.vdot(d, offset))) / norm,
                           0.0, variance)

    lo, hi = error_limits(assumed.supports[0], theta_bar)
    quad = integrate_error_weighted(exceed, lo, hi, tols)
    return finish(quad, "mml")
