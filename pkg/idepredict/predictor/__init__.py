"""
MSE predictors

- core: The error-weighted exceedance integral and the generic predictors
- ml: Scalar maximum likelihood
- nuisance: Joint ML with nuisance parameters on a grid
- mismatch: Mismatched ML
- bayesian: Beta prior, MAP prediction and Bayesian averaging
"""

from .core import (
    PredictionResult, error_limits, integrate_error_weighted,
    mse_hat_generic, mse_hat_generic_nuisance
)
from .ml import mse_hat_ml_scalar, ml_exceedance
from .nuisance import (
    NuisanceGrid, build_nuisance_grid, mse_hat_ml_nuisance_min, mse_hat_ml_nuisance_full
)
from .mismatch import mse_hat_mml
from .bayesian import (
    BetaPrior, mse_hat_map_at, bayes_average, mse_hat_ml_bayes, mse_hat_map_bayes
)

__all__ = [
    'PredictionResult',
    'error_limits',
    'integrate_error_weighted',
    'mse_hat_generic',
    'mse_hat_generic_nuisance',
    'mse_hat_ml_scalar',
    'ml_exceedance',
    'NuisanceGrid',
    'build_nuisance_grid',
    'mse_hat_ml_nuisance_min',
    'mse_hat_ml_nuisance_full',
    'mse_hat_mml',
    'BetaPrior',
    'mse_hat_map_at',
    'bayes_average',
    'mse_hat_ml_bayes',
    'mse_hat_map_bayes',
]
