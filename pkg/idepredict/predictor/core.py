"""Predicted mean-square error of implicitly defined estimators.

The prediction for a true value ``theta_bar`` is

    MSE_hat = 2 * integral |eps| * P(L(x; theta_bar + 2 eps) >= L(x; theta_bar)) d eps

taken over ``[(theta_min - theta_bar) / 2, (theta_max - theta_bar) / 2]``.
Every predictor in this package supplies the exceedance probability and
hands it to ``integrate_error_weighted``.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from ..numeric.quadrature import DEFAULT_TOLERANCES, QuadResult, QuadTolerances, integrate_with
from ..utilities.error_handler import ContractError, DomainError

logger = logging.getLogger(__name__)

PROBABILITY_SLACK = 1e-9
# decades of |eps| below the interval length that get their own subinterval
ZERO_DECADES = 8

ExceedanceFn = Callable[[float], float]


@dataclass(frozen=True)
class PredictionResult:
    """Predicted MSE with the quadrature record behind it.

    ``stderr`` is set only by Monte Carlo based predictors.
    """
    mse: float
    quad: QuadResult
    method: str
    stderr: Optional[float] = None

    def __post_init__(self):
        if not self.mse >= 0:
            raise DomainError(f"predicted MSE must be non-negative, got {self.mse}")

    @property
    def rmse(self) -> float:
        return float(np.sqrt(self.mse))


def error_limits(support: Tuple[float, float], theta_bar: float) -> Tuple[float, float]:
    """Integration limits in ``eps`` that keep ``theta_bar + 2 eps`` in the support."""
    lo, hi = support
    if not lo < hi:
        raise DomainError(f"support must satisfy lo < hi, got [{lo}, {hi}]")
    if not lo <= theta_bar <= hi:
        raise DomainError(f"true value {theta_bar} outside support [{lo}, {hi}]",
                          parameter="theta_bar", value=theta_bar)
    return (lo - theta_bar) / 2.0, (hi - theta_bar) / 2.0


def integrate_error_weighted(exceed_prob: ExceedanceFn, lo: float, hi: float,
                             tols: QuadTolerances = DEFAULT_TOLERANCES,
                             breakpoints: Sequence[float] = (),
                             raise_on_budget: bool = True) -> QuadResult:
    """
    Compute ``2 * integral_lo^hi |eps| * exceed_prob(eps) d eps``.

    The interval is split at ``eps = 0`` where ``|eps|`` has its kink. Each
    half also gets log-spaced breakpoints towards zero so that the narrow
    peak of a high-SNR integrand is sampled.
    """
    def integrand(eps: float) -> float:
        return 2.0 * abs(eps) * exceed_prob(eps)

    pieces = [(a, b) for a, b in ((lo, min(hi, 0.0)), (max(lo, 0.0), hi)) if a < b]
    if not pieces:
        raise DomainError(f"empty integration range [{lo}, {hi}]")
    total = None
    for a, b in pieces:
        far = a if abs(a) > abs(b) else b
        scales = [far * 10.0 ** -k for k in range(1, ZERO_DECADES + 1)]
        inner = sorted({p for p in list(breakpoints) + scales if a < p < b})
        part = integrate_with(integrand, a, b, tols, breakpoints=inner,
                              raise_on_budget=raise_on_budget)
        total = part if total is None else total + part
    return total


def finish(quad: QuadResult, method: str, stderr: Optional[float] = None) -> PredictionResult:
    """Wrap a quadrature value, absorbing round-off negatives below the error estimate."""
    value = quad.value
    if value < 0:
        if value < -max(quad.abs_error_estimate, 1e-300):
            raise ContractError(f"{method}: negative predicted MSE {value:.3e}")
        value = 0.0
    return PredictionResult(mse=value, quad=quad, method=method, stderr=stderr)


def _checked(exceed_prob: ExceedanceFn) -> ExceedanceFn:
    def wrapped(eps: float) -> float:
        p = float(exceed_prob(eps))
        if not (-PROBABILITY_SLACK <= p <= 1.0 + PROBABILITY_SLACK):
            raise ContractError(f"exceedance probability {p!r} at eps={eps} is outside [0, 1]",
                                parameter="exceed_prob", value=p)
        return min(max(p, 0.0), 1.0)
    return wrapped


def mse_hat_generic(exceed_prob: ExceedanceFn, theta_bar: float,
                    support: Tuple[float, float],
                    tols: QuadTolerances = DEFAULT_TOLERANCES,
                    breakpoints: Sequence[float] = ()) -> PredictionResult:
    """
    Predicted MSE from a caller-supplied exceedance probability.

    Args:
        exceed_prob: ``eps -> P(L(x; theta_bar + 2 eps) >= L(x; theta_bar))``
        theta_bar: True parameter value
        support: Finite parameter support ``(theta_min, theta_max)``
        tols: Quadrature tolerances
        breakpoints: Values of ``eps`` where ``exceed_prob`` jumps

    Returns:
        PredictionResult

    Raises:
        ContractError: ``exceed_prob`` returns a value outside ``[0, 1]``
    """
    lo, hi = error_limits(support, theta_bar)
    quad = integrate_error_weighted(_checked(exceed_prob), lo, hi, tols, breakpoints)
    return finish(quad, "generic")


def mse_hat_generic_nuisance(pairwise_prob: Callable[[float, np.ndarray], float],
                             theta_bar: float, support: Tuple[float, float],
                             nuisance_points: np.ndarray,
                             tols: QuadTolerances = DEFAULT_TOLERANCES) -> PredictionResult:
    """
    Predicted MSE with nuisance parameters maximized out of the objective.

    The exceedance probability at ``eps`` is approximated by the largest
    pairwise probability ``P(L(theta_bar + 2 eps, t) >= L(theta_bar, t_bar))``
    over the nuisance points ``t``.

    Args:
        pairwise_prob: ``(eps, nuisance point) -> probability``
        theta_bar: True value of the parameter of interest
        support: Support of the parameter of interest
        nuisance_points: Array of nuisance vectors, shape ``(K, J - 1)``
        tols: Quadrature tolerances
    """
    points = np.atleast_2d(np.asarray(nuisance_points, dtype=float))
    if points.shape[0] == 0:
        raise DomainError("nuisance grid is empty")

    def exceed(eps: float) -> float:
        return max(float(pairwise_prob(eps, point)) for point in points)

    lo, hi = error_limits(support, theta_bar)
    quad = integrate_error_weighted(_checked(exceed), lo, hi, tols)
    return finish(quad, "generic-nuisance")
