"""Real Gaussian distribution functions."""

from typing import Union

import numpy as np
from scipy import special

from ..utilities.error_handler import DomainError

ArrayOrFloat = Union[float, np.ndarray]

_SQRT2 = np.sqrt(2.0)


def _standardize(x: ArrayOrFloat, mean: ArrayOrFloat, variance: ArrayOrFloat) -> np.ndarray:
    variance = np.asarray(variance, dtype=float)
    if np.any(~(variance > 0)) or np.any(~np.isfinite(variance)):
        raise DomainError(f"variance must be positive and finite, got {variance}",
                          parameter="variance", value=variance)
    return (np.asarray(x, dtype=float) - mean) / np.sqrt(variance)


def _unwrap(values: np.ndarray) -> ArrayOrFloat:
    return float(values) if np.ndim(values) == 0 else values


def normal_ccdf(x: ArrayOrFloat, mean: ArrayOrFloat = 0.0,
                variance: ArrayOrFloat = 1.0) -> ArrayOrFloat:
    """
    P(Z >= x) for Z ~ Normal(mean, variance).

    Evaluated through ``erfc`` so the upper tail keeps full relative
    precision instead of cancelling in ``1 - cdf``.

    Args:
        x: Evaluation point(s); ``+inf`` gives 0 and ``-inf`` gives 1
        mean: Distribution mean
        variance: Distribution variance, strictly positive

    Returns:
        Probability, scalar or array matching the broadcast input
    """
    z = _standardize(x, mean, variance)
    return _unwrap(0.5 * special.erfc(z / _SQRT2))


def normal_cdf(x: ArrayOrFloat, mean: ArrayOrFloat = 0.0,
               variance: ArrayOrFloat = 1.0) -> ArrayOrFloat:
    """P(Z <= x) for Z ~ Normal(mean, variance), tail-accurate."""
    z = _standardize(x, mean, variance)
    return _unwrap(0.5 * special.erfc(-z / _SQRT2))
