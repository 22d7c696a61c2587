"""
idepredict: MSE prediction for implicitly defined estimators

This package contains:
- numeric: Gaussian tails, adaptive quadrature, seeded sampling, orthant probabilities
- models: Mean manifolds, array geometries and beampatterns
- predictor: Predicted MSE for ML, nuisance, mismatched and Bayesian estimators
- esprit: Lag-one ESPRIT and its Gaussian-fit prediction
- bounds: CRLB, misspecified CRLB, Hammersley-Chapman-Robbins, Ziv-Zakai and Bayesian CRLB
- simulate: Grid estimators and seeded Monte Carlo
- cli: Scenario files and the command-line front end
- utilities: Errors, structured logging, CSV and parallel execution
"""

from . import numeric
from . import models
from . import predictor
from . import esprit
from . import bounds
from . import simulate
from . import utilities

__version__ = "1.0.0"

__all__ = [
    'numeric',
    'models',
    'predictor',
    'esprit',
    'bounds',
    'simulate',
    'utilities',
]
