"""
Monte Carlo verification

- grids: Uniform, sphere and spatial-frequency search grids
- estimators: Grid ML/MAP estimators and the ESPRIT batch adapter
- monte_carlo: Seeded, sharded Monte Carlo runs
"""

from .grids import GridTag, SearchGrid, uniform_grid, sphere_grid, omega_grid
from .estimators import (
    MLGridEstimator, MAPGridEstimator, EspritBatchEstimator,
    ml_grid_estimate, map_grid_estimate
)
from .monte_carlo import McResult, draw_noise, run_monte_carlo, run_bayesian_monte_carlo, summarize

__all__ = [
    'GridTag',
    'SearchGrid',
    'uniform_grid',
    'sphere_grid',
    'omega_grid',
    'MLGridEstimator',
    'MAPGridEstimator',
    'EspritBatchEstimator',
    'ml_grid_estimate',
    'map_grid_estimate',
    'McResult',
    'draw_noise',
    'run_monte_carlo',
    'run_bayesian_monte_carlo',
    'summarize',
]
