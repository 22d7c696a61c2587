"""Cost-difference moments of ESPRIT and its Gaussian-fit MSE prediction."""

import logging
from dataclasses import dataclass

import numpy as np

from ..bounds.crlb import BoundValue, crlb_scalar
from ..models.arrays import ula_manifold
from ..models.manifold import ManifoldModel
from ..numeric.gaussian import normal_cdf
from ..numeric.quadrature import DEFAULT_TOLERANCES, QuadTolerances
from ..predictor.core import PredictionResult, finish, integrate_error_weighted
from ..utilities.error_handler import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EspritScenario:
    """Single source ``alpha exp(j pi cos(phi_bar) n)`` in white complex noise."""
    n_sensors: int
    alpha: complex
    phi_bar: float
    sigma_w2: float

    def __post_init__(self):
        if self.n_sensors < 3:
            raise DomainError(f"ESPRIT scenario needs N >= 3, got {self.n_sensors}")
        if not 0.0 < self.phi_bar < np.pi:
            raise DomainError(f"phi_bar must lie strictly inside (0, pi), got {self.phi_bar}",
                              parameter="phi_bar", value=self.phi_bar)
        if not (self.sigma_w2 > 0 and np.isfinite(self.sigma_w2)):
            raise DomainError(f"sigma_w2 must be positive, got {self.sigma_w2}")

    @classmethod
    def from_snr_db(cls, n_sensors: int, alpha: complex, phi_bar: float,
                    snr_db: float) -> "EspritScenario":
        return cls(n_sensors, alpha, phi_bar, abs(alpha) ** 2 / 10.0 ** (snr_db / 10.0))

    @property
    def omega_bar(self) -> float:
        return float(np.pi * np.cos(self.phi_bar))

    @property
    def snr(self) -> float:
        return abs(self.alpha) ** 2 / self.sigma_w2

    @property
    def model(self) -> ManifoldModel:
        return ula_manifold(self.n_sensors, self.alpha)


@dataclass(frozen=True)
class DeltaJMoments:
    """Mean and variance of ``J(phi_bar + 2 eps) - J(phi_bar)``."""
    mu_delta: float
    sigma2_delta: float


def _coefficient(phi_bar: float, epsilon: float) -> complex:
    shifted = phi_bar + 2.0 * epsilon
    if not (0.0 <= phi_bar <= np.pi and 0.0 <= shifted <= np.pi):
        raise DomainError(f"phi_bar={phi_bar} and phi_bar + 2 eps={shifted} must lie in [0, pi]")
    return complex(np.exp(1j * np.pi * np.cos(phi_bar)) - np.exp(1j * np.pi * np.cos(shifted)))


def build_q_matrix(phi_bar: float, epsilon: float, n_sensors: int) -> np.ndarray:
    """
    Hermitian tridiagonal ``Q`` with ``x^H Q x = J(phi_bar + 2 eps) - J(phi_bar)``.

    ``Q = c L + conj(c) L^T`` where ``L`` has ones on the first subdiagonal and
    ``c = e^{j pi cos(phi_bar)} - e^{j pi cos(phi_bar + 2 eps)}``.
    """
    c = _coefficient(phi_bar, epsilon)
    lower = np.eye(n_sensors, k=-1)
    return c * lower + np.conj(c) * lower.T


def delta_j_moments(scenario: EspritScenario, epsilon: float) -> DeltaJMoments:
    """
    Exact first two moments of ``x^H Q x`` for ``x = m(phi_bar) + w``.

    ``tr(Q) = 0`` so the mean is ``m^H Q m``; the variance is
    ``sigma^4 tr(Q^2) + 2 sigma^2 ||Q m||^2`` with ``tr(Q^2) = 2 (N - 1) |c|^2``.
    """
    c = _coefficient(scenario.phi_bar, epsilon)
    m = scenario.model.mean(scenario.phi_bar)
    qm = np.zeros_like(m)
    qm[1:] += c * m[:-1]
    qm[:-1] += np.conj(c) * m[1:]
    sigma2 = scenario.sigma_w2
    mu_delta = float(np.real(np.vdot(m, qm)))
    sigma2_delta = (sigma2 ** 2 * 2.0 * (scenario.n_sensors - 1) * abs(c) ** 2
                    + 2.0 * sigma2 * float(np.sum(np.abs(qm) ** 2)))
    return DeltaJMoments(mu_delta, sigma2_delta)


def mse_hat_esprit(scenario: EspritScenario,
                   tols: QuadTolerances = DEFAULT_TOLERANCES) -> PredictionResult:
    """
    Gaussian-fit MSE prediction for ESPRIT.

    The probability that the cost at ``phi_bar + 2 eps`` undercuts the cost at
    the truth is ``Normal_cdf(0; mu_delta, sigma2_delta)``; it is 1 at ``eps = 0``.
    """
    phi_bar = scenario.phi_bar

    def exceed(eps: float) -> float:
        if eps == 0.0:
            return 1.0
        moments = delta_j_moments(scenario, eps)
        if moments.sigma2_delta <= 0.0:
            return 1.0 if moments.mu_delta <= 0.0 else 0.0
        return normal_cdf(0.0, moments.mu_delta, moments.sigma2_delta)

    quad = integrate_error_weighted(exceed, -phi_bar / 2.0, (np.pi - phi_bar) / 2.0, tols)
    return finish(quad, "esprit")


def esprit_crlb(scenario: EspritScenario) -> BoundValue:
    """CRLB of the ULA angle for the scenario, with the analytic derivative."""
    return crlb_scalar(scenario.model, scenario.phi_bar, scenario.sigma_w2, method="analytic")
