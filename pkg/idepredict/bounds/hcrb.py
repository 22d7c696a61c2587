"""Single-test-point Hammersley-Chapman-Robbins bound."""

import logging
from typing import Optional

import numpy as np

from ..models.manifold import ManifoldModel
from ..utilities.error_handler import DomainError
from .crlb import BoundKind, BoundValue, _check_sigma2

logger = logging.getLogger(__name__)

DEFAULT_TEST_POINTS = 3600
EXP_OVERFLOW = 700.0


def default_test_points(model: ManifoldModel, theta_bar: float,
                        n_points: int = DEFAULT_TEST_POINTS) -> np.ndarray:
    """Uniform grid over the support with the true value removed."""
    lo, hi = model.supports[0]
    grid = np.linspace(lo, hi, n_points)
    return grid[grid != theta_bar]


def hcrb_single_test_point(model: ManifoldModel, theta_bar: float, sigma2: float,
                           test_points: Optional[np.ndarray] = None) -> BoundValue:
    """
    HCRB ``max_phi (phi - theta_bar)^2 / (exp(c ||m(phi) - m(theta_bar)||^2 / sigma2) - 1)``.

    ``c`` is 2 for complex circular noise and 1 for real noise. Test points
    whose mean equals the true mean are not identifiable and are skipped.

    Args:
        model: One-parameter model
        theta_bar: True value
        sigma2: Noise variance
        test_points: Candidate test points; defaults to a 3600-point grid

    Raises:
        DomainError: a test point equals ``theta_bar``
    """
    sigma2 = _check_sigma2(sigma2)
    if model.param_dim != 1:
        raise DomainError(f"HCRB needs a one-parameter model, {model.name} has {model.param_dim}")
    theta_bar = float(model.check(theta_bar, what="true value")[0])
    points = (default_test_points(model, theta_bar) if test_points is None
              else np.asarray(test_points, dtype=float).ravel())
    if points.size == 0:
        raise DomainError("HCRB needs at least one test point")
    if np.any(points == theta_bar):
        raise DomainError("HCRB test points must differ from the true value",
                          parameter="test_points", value=theta_bar)

    gaps = points - theta_bar
    distances = np.sum(np.abs(model.mean_batch(points[:, None]) - model.mean(theta_bar)) ** 2,
                       axis=1)
    exponent = model.noise_kind.fisher_factor * distances / sigma2
    identifiable = exponent > 0
    if not np.any(identifiable):
        raise DomainError("no identifiable HCRB test point")
    skipped = int(np.count_nonzero(~identifiable))
    if skipped:
        logger.warning(f"HCRB skipped {skipped} test point(s) with the same mean as the truth")

    x = exponent[identifiable]
    d2 = gaps[identifiable] ** 2
    with np.errstate(over="ignore"):
        terms = np.where(x > EXP_OVERFLOW, d2 * np.exp(-np.minimum(x, 1e300)),
                         d2 / np.expm1(np.minimum(x, EXP_OVERFLOW)))
    best = int(np.argmax(terms))
    return BoundValue(BoundKind.HCRB, float(terms[best]), {
        "test_point": float(points[identifiable][best]),
        "n_test_points": int(points.size),
        "skipped": skipped,
    })
