"""
ESPRIT as a quadratic-cost estimator

- estimator: Closed-form lag-one estimate and its cost function
- moments: Q matrix, cost-difference moments and the Gaussian-fit prediction
"""

from .estimator import EspritEstimate, esprit_estimate, esprit_estimate_batch, esprit_cost
from .moments import (
    EspritScenario, DeltaJMoments, build_q_matrix, delta_j_moments, mse_hat_esprit, esprit_crlb
)

__all__ = [
    'EspritEstimate',
    'esprit_estimate',
    'esprit_estimate_batch',
    'esprit_cost',
    'EspritScenario',
    'DeltaJMoments',
    'build_q_matrix',
    'delta_j_moments',
    'mse_hat_esprit',
    'esprit_crlb',
]
