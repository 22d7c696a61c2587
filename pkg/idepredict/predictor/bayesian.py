"""MAP prediction under a symmetric Beta prior on ``[0, pi]`` and Bayesian averaging."""

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import trapezoid
from scipy.special import betaln

from ..models.manifold import ManifoldModel
from ..numeric.gaussian import normal_ccdf
from ..numeric.quadrature import BAYES_TOLERANCES, QuadTolerances, adaptive_quad
from ..utilities.error_handler import DomainError
from .core import PredictionResult, error_limits, finish, integrate_error_weighted
from .ml import check_sigma2, mse_hat_ml_scalar, scalar_parameter, shifted_difference

logger = logging.getLogger(__name__)

PRIOR_SUPPORT = (0.0, np.pi)
DEFAULT_GRID_SPACING = 0.01
NORMALIZATION_TOL = 1e-6


@dataclass(frozen=True)
class BetaPrior:
    """Density of ``pi * B`` with ``B ~ Beta(a, a)``, or the flat density on ``[0, pi]``.

    Shapes ``a <= 2`` are rejected because the Bayesian bound needs a finite
    prior information term. ``uniform=True`` ignores ``a``.
    """
    a: float = 10.0
    uniform: bool = False

    def __post_init__(self):
        if not self.uniform:
            if not (np.isfinite(self.a) and self.a > 2):
                raise DomainError(f"Beta prior shape must exceed 2, got {self.a}",
                                  parameter="a", value=self.a)
            total = adaptive_quad(self.pdf, 0.0, np.pi, abs_tol=1e-10, rel_tol=1e-10).value
            if abs(total - 1.0) > NORMALIZATION_TOL:
                raise DomainError(f"prior density integrates to {total:.8f}, not 1")

    @classmethod
    def flat(cls) -> "BetaPrior":
        return cls(a=1.0, uniform=True)

    @property
    def shape(self) -> float:
        """Effective Beta shape; the flat prior has shape 1."""
        return 1.0 if self.uniform else float(self.a)

    @property
    def mean(self) -> float:
        return np.pi / 2.0

    @property
    def variance(self) -> float:
        return np.pi ** 2 / (4.0 * (2.0 * self.shape + 1.0))

    def logpdf(self, phi):
        phi = np.asarray(phi, dtype=float)
        inside = (phi >= 0.0) & (phi <= np.pi)
        if self.uniform:
            values = np.where(inside, -np.log(np.pi), -np.inf)
        else:
            a = self.a
            with np.errstate(divide="ignore", invalid="ignore"):
                core = (a - 1.0) * (np.log(phi) + np.log(np.pi - phi))
            values = np.where(inside, core - (2.0 * a - 1.0) * np.log(np.pi) - betaln(a, a),
                              -np.inf)
        return float(values) if values.ndim == 0 else values

    def pdf(self, phi):
        return np.exp(self.logpdf(phi))

    def sample(self, generator: np.random.Generator, n: int) -> np.ndarray:
        if self.uniform:
            return generator.uniform(0.0, np.pi, n)
        return np.pi * generator.beta(self.a, self.a, n)


def _check_prior_model(model: ManifoldModel) -> None:
    if tuple(model.supports[0]) != PRIOR_SUPPORT:
        raise DomainError(f"{model.name} support {model.supports[0]} does not match the "
                          f"prior support [0, pi]")


def mse_hat_map_at(model: ManifoldModel, prior: BetaPrior, phi: float, sigma2: float,
                   tols: QuadTolerances = BAYES_TOLERANCES) -> PredictionResult:
    """
    Predicted MSE of the MAP estimator at a fixed true angle ``phi``.

    The exceedance probability is
    ``ccdf(n + (s * sigma2 / n) * ln(f(phi) / f(phi + 2 eps)); 0, c * sigma2)``
    with ``n = ||m(phi + 2 eps) - m(phi)||``, ``s`` the likelihood scale and
    ``c`` the difference-variance factor of the noise kind. Candidates with zero prior
    density never win. With a flat prior this is the ML prediction.

    Raises:
        DomainError: ``phi`` outside the open support or where the prior vanishes
    """
    sigma2 = check_sigma2(sigma2)
    _check_prior_model(model)
    phi = scalar_parameter(model, phi)
    log_f_phi = prior.logpdf(phi)
    if not 0.0 < phi < np.pi or not np.isfinite(log_f_phi):
        raise DomainError(f"MAP prediction needs 0 < phi < pi with positive prior density, "
                          f"got {phi}", parameter="phi", value=phi)
    difference = shifted_difference(model, phi)
    variance = model.noise_kind.difference_variance_factor * sigma2
    prior_weight = model.noise_kind.likelihood_scale * sigma2

    def exceed(eps: float) -> float:
        log_f_shifted = prior.logpdf(phi + 2.0 * eps)
        if not np.isfinite(log_f_shifted):
            return 0.0
        log_ratio = log_f_phi - log_f_shifted
        norm = float(np.linalg.norm(difference(eps)))
        if norm == 0.0:
            argument = 0.0 if log_ratio == 0.0 else np.copysign(np.inf, log_ratio)
        else:
            argument = norm + (prior_weight / norm) * log_ratio
        return normal_ccdf(argument, 0.0, variance)

    lo, hi = error_limits(model.supports[0], phi)
    quad = integrate_error_weighted(exceed, lo, hi, tols)
    return finish(quad, "map")


def bayes_average(prior: BetaPrior, per_theta: Callable[[float], float],
                  grid_spacing: float = DEFAULT_GRID_SPACING) -> float:
    """
    Trapezoid average ``integral f(phi) g(phi) d phi`` on a uniform grid over ``[0, pi]``.

    ``per_theta`` is only evaluated where the prior density is positive;
    other grid points contribute zero.
    """
    if not 0 < grid_spacing < np.pi:
        raise DomainError(f"grid spacing must be in (0, pi), got {grid_spacing}")
    grid = np.linspace(0.0, np.pi, int(round(np.pi / grid_spacing)) + 1)
    weights = prior.pdf(grid)
    values = np.zeros_like(grid)
    active = np.flatnonzero(weights > 0)
    for i in active:
        values[i] = per_theta(float(grid[i]))
    logger.debug(f"Bayesian average over {active.size} of {grid.size} grid points")
    return float(trapezoid(weights * values, grid))


def mse_hat_ml_bayes(model: ManifoldModel, prior: BetaPrior, sigma2: float,
                     tols: QuadTolerances = BAYES_TOLERANCES,
                     grid_spacing: float = DEFAULT_GRID_SPACING) -> float:
    """Prior-averaged ML prediction."""
    _check_prior_model(model)
    return bayes_average(prior, lambda phi: mse_hat_ml_scalar(model, phi, sigma2, tols).mse,
                         grid_spacing)


def mse_hat_map_bayes(model: ManifoldModel, prior: BetaPrior, sigma2: float,
                      tols: QuadTolerances = BAYES_TOLERANCES,
                      grid_spacing: float = DEFAULT_GRID_SPACING) -> float:
    """Prior-averaged MAP prediction; the flat prior falls back to ML at the endpoints."""
    _check_prior_model(model)

    def per_theta(phi: float) -> float:
        if 0.0 < phi < np.pi:
            return mse_hat_map_at(model, prior, phi, sigma2, tols).mse
        return mse_hat_ml_scalar(model, phi, sigma2, tols).mse

    return bayes_average(prior, per_theta, grid_spacing)
