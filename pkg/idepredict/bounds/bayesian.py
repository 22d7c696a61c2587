"""Bayesian bounds for an angle with a Beta prior on ``[0, pi]``."""

import logging

import numpy as np

from ..models.manifold import ManifoldModel
from ..numeric.gaussian import normal_ccdf
from ..numeric.quadrature import ZZB_TOLERANCES, QuadTolerances, integrate_with
from ..predictor.bayesian import BetaPrior, bayes_average
from ..predictor.core import ZERO_DECADES
from ..utilities.error_handler import DomainError
from .crlb import BoundKind, BoundValue, _check_sigma2

logger = logging.getLogger(__name__)


def p_min_e(model: ManifoldModel, phi1: float, phi2: float, prior1: float, prior2: float,
            sigma_w2: float) -> float:
    """
    Minimum error probability of the binary test between ``phi1`` and ``phi2``.

    Args:
        model: One-parameter model
        phi1: First hypothesis
        phi2: Second hypothesis
        prior1: Prior probability of ``phi1``
        prior2: Prior probability of ``phi2``; ``prior1 + prior2 == 1``
        sigma_w2: Noise variance

    Returns:
        float: Error probability of the optimal likelihood-ratio test
    """
    sigma_w2 = _check_sigma2(sigma_w2)
    if prior1 < 0 or prior2 < 0 or abs(prior1 + prior2 - 1.0) > 1e-9:
        raise DomainError(f"priors must be non-negative and sum to 1, got {prior1}, {prior2}")
    if prior1 == 0.0 or prior2 == 0.0:
        return 0.0
    distance = float(np.linalg.norm(model.mean(phi2) - model.mean(phi1)))
    if distance == 0.0:
        raise DomainError(f"hypotheses {phi1} and {phi2} have the same mean")
    return _p_min_e(distance, prior1, prior2, sigma_w2,
                    model.noise_kind.difference_variance_factor * sigma_w2)


def _p_min_e(distance: float, prior1: float, prior2: float, sigma_w2: float,
             variance: float) -> float:
    log_ratio = np.log(prior1 / prior2)
    shift = sigma_w2 / distance
    return float(prior1 * normal_ccdf(distance + shift * log_ratio, 0.0, variance)
                 + prior2 * normal_ccdf(distance - shift * log_ratio, 0.0, variance))


def zzb(model: ManifoldModel, prior: BetaPrior, sigma_w2: float,
        tols: QuadTolerances = ZZB_TOLERANCES) -> BoundValue:
    """
    Ziv-Zakai bound without valley filling.

        ZZB = 1/2 int_0^pi h int_0^(pi-h) (f(phi) + f(phi+h)) P_min^e(phi, phi+h) d phi dh

    with ``pi_1 = f(phi) / (f(phi) + f(phi + h))``. Both integrals use
    nested adaptive quadrature.
    """
    sigma_w2 = _check_sigma2(sigma_w2)
    if model.param_dim != 1 or tuple(model.supports[0]) != (0.0, np.pi):
        raise DomainError(f"ZZB needs a one-parameter model on [0, pi], got {model.name}")
    variance = model.noise_kind.difference_variance_factor * sigma_w2
    mean_fn = model.mean_fn
    inner_evals = [0]

    def inner_integrand(phi: float, h: float) -> float:
        f1 = float(prior.pdf(phi))
        f2 = float(prior.pdf(phi + h))
        total = f1 + f2
        if total == 0.0 or f1 == 0.0 or f2 == 0.0:
            return 0.0
        means = mean_fn(np.array([[phi], [phi + h]]))
        distance = float(np.linalg.norm(means[1] - means[0]))
        if distance == 0.0:
            return min(f1, f2)
        return total * _p_min_e(distance, f1 / total, f2 / total, sigma_w2, variance)

    def outer_integrand(h: float) -> float:
        if h >= np.pi:
            return 0.0
        result = integrate_with(lambda phi: inner_integrand(phi, h), 0.0, np.pi - h, tols)
        inner_evals[0] += result.n_evals
        return h * result.value

    # the outer integrand concentrates near h = 0 at high SNR
    scales = [np.pi * 10.0 ** -k for k in range(1, ZERO_DECADES + 1)]
    outer = integrate_with(outer_integrand, 0.0, np.pi, tols, breakpoints=scales)
    value = max(0.5 * outer.value, 0.0)
    logger.debug(f"ZZB={value:.6e} from {outer.n_evals} outer and {inner_evals[0]} inner evaluations")
    return BoundValue(BoundKind.ZZB, value, {
        "abs_error_estimate": 0.5 * outer.abs_error_estimate,
        "n_evals": outer.n_evals + inner_evals[0],
    })


def bcrlb(prior: BetaPrior, snr: float, n_sensors: int,
          grid_spacing: float = 0.01) -> BoundValue:
    """
    Bayesian CRLB of a half-wavelength ULA angle under a ``Beta(a, a)`` prior.

        BCRLB = (pi^2 SNR N(N-1)(2N-1)/3 E[sin^2 phi] + 4(a-1)(2a-1) / (pi^2 (a-2)))^-1

    Raises:
        DomainError: prior shape ``a <= 2`` (including the flat prior)
    """
    a = prior.shape
    if not a > 2:
        raise DomainError(f"BCRLB needs a prior shape above 2, got {a}", parameter="a", value=a)
    if not (snr >= 0 and np.isfinite(snr)):
        raise DomainError(f"SNR must be non-negative, got {snr}", parameter="snr", value=snr)
    if n_sensors < 2:
        raise DomainError(f"BCRLB needs at least 2 sensors, got {n_sensors}")
    sin2_moment = bayes_average(prior, lambda phi: np.sin(phi) ** 2, grid_spacing)
    n = n_sensors
    data_term = np.pi ** 2 * snr * n * (n - 1) * (2 * n - 1) / 3.0 * sin2_moment
    prior_term = 4.0 * (a - 1.0) * (2.0 * a - 1.0) / (np.pi ** 2 * (a - 2.0))
    return BoundValue(BoundKind.BCRLB, 1.0 / (data_term + prior_term), {
        "data_information": data_term,
        "prior_information": prior_term,
        "sin2_moment": sin2_moment,
    })
