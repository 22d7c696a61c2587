"""Cramer-Rao type bounds for deterministic parameters."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Tuple

import numpy as np

from ..models.manifold import (
    ManifoldModel, MismatchPair, manifold_derivative, manifold_second_derivative
)
from ..utilities.error_handler import DegenerateCurvatureError, DomainError, SingularInformationError

logger = logging.getLogger(__name__)

SINGULAR_CONDITION = 1e12
CURVATURE_TOL = 1e-12


class BoundKind(Enum):
    """Bound families reported by the toolkit."""
    CRLB = "crlb"
    MCRLB = "mcrlb"
    HCRB = "hcrb"
    ZZB = "zzb"
    BCRLB = "bcrlb"


@dataclass(frozen=True)
class BoundValue:
    """A bound on the MSE with the intermediate quantities that produced it."""
    kind: BoundKind
    value: float
    diagnostics: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if not self.value >= 0:
            raise DomainError(f"{self.kind.value} must be non-negative, got {self.value}")


def _check_sigma2(sigma2: float) -> float:
    if not (sigma2 > 0 and np.isfinite(sigma2)):
        raise DomainError(f"sigma2 must be positive and finite, got {sigma2}",
                          parameter="sigma2", value=sigma2)
    return float(sigma2)


def crlb_scalar(model: ManifoldModel, theta_bar: float, sigma2: float,
                method: str = "finite", index: int = 0) -> BoundValue:
    """
    CRLB ``1 / ((c / sigma2) * ||dm/dtheta||^2)`` for one parameter.

    Args:
        model: Mean model; for J > 1 the other parameters count as known
        theta_bar: True parameter vector
        sigma2: Noise variance
        method: ``"finite"`` or ``"analytic"`` derivative
        index: Parameter index

    Raises:
        SingularInformationError: zero Fisher information
    """
    sigma2 = _check_sigma2(sigma2)
    derivative = manifold_derivative(model, theta_bar, index=index, method=method)
    information = model.noise_kind.fisher_factor / sigma2 * float(np.sum(np.abs(derivative.value) ** 2))
    if not information > 0:
        raise SingularInformationError(
            f"Fisher information of {model.name} vanishes at {np.atleast_1d(theta_bar).tolist()}")
    return BoundValue(BoundKind.CRLB, 1.0 / information, {
        "fisher_information": information,
        "derivative_scheme": derivative.scheme,
    })


def crlb_joint(model: ManifoldModel, theta_bar, sigma2: float,
               method: str = "finite") -> Tuple[BoundValue, ...]:
    """Diagonal of the inverse joint Fisher information, one bound per parameter."""
    sigma2 = _check_sigma2(sigma2)
    columns = [manifold_derivative(model, theta_bar, index=i, method=method).value
               for i in range(model.param_dim)]
    jacobian = np.stack(columns, axis=1)
    fisher = model.noise_kind.fisher_factor / sigma2 * np.real(np.conj(jacobian.T) @ jacobian)
    condition = np.linalg.cond(fisher)
    if not np.isfinite(condition) or condition > SINGULAR_CONDITION:
        raise SingularInformationError(
            f"joint Fisher information of {model.name} is singular (condition {condition:.3e})")
    inverse = np.linalg.inv(fisher)
    return tuple(
        BoundValue(BoundKind.CRLB, float(inverse[i, i]), {
            "parameter": model.param_names[i],
            "fisher_information": float(fisher[i, i]),
            "condition": float(condition),
        })
        for i in range(model.param_dim)
    )


def mcrlb_parametric_mean(pair: MismatchPair, theta_bar: float,
                          method: str = "finite") -> BoundValue:
    """
    Misspecified CRLB ``B / A^2`` for a parametric-mean mismatch.

    ``A`` is the expected curvature of the assumed log-likelihood at the true
    value and ``B`` the variance of its score under the true model:

        A = -(c / s2) ||m'||^2 + (c / s2) Re{m''^H mu}
        B = c * s2_bar / s2^2 * ||m'||^2

    where ``m`` is the assumed mean and ``mu = m_true - m_assumed``.

    Raises:
        DegenerateCurvatureError: ``|A|`` numerically zero
    """
    assumed = pair.assumed_model
    s2 = _check_sigma2(pair.assumed_noise_variance)
    s2_bar = _check_sigma2(pair.true_noise_variance)
    c = assumed.noise_kind.fisher_factor
    first = manifold_derivative(assumed, theta_bar, method=method).value
    second = manifold_second_derivative(assumed, theta_bar, method=method).value
    offset = pair.mu(theta_bar)

    slope = float(np.sum(np.abs(first) ** 2))
    information = c / s2 * slope
    curvature = -information + c / s2 * float(np.real(np.vdot(second, offset)))
    if abs(curvature) <= CURVATURE_TOL * max(information, 1e-300):
        raise DegenerateCurvatureError(
            f"expected curvature of the assumed likelihood vanishes ({curvature:.3e})",
            curvature=curvature)
    score_variance = c * s2_bar / s2 ** 2 * slope
    value = score_variance / curvature ** 2
    logger.debug(f"MCRLB: A={curvature:.6e}, B={score_variance:.6e}")
    return BoundValue(BoundKind.MCRLB, value, {
        "curvature": curvature,
        "score_variance": score_variance,
        "assumed_information": information,
        "offset_norm": float(np.linalg.norm(offset)),
    })
