"""Grid-search ML and MAP estimators and a batch adapter for ESPRIT."""

import logging
from typing import Optional

import numpy as np

from ..esprit.estimator import esprit_estimate_batch
from ..models.manifold import ManifoldModel
from ..predictor.bayesian import BetaPrior
from ..utilities.error_handler import DomainError
from .grids import SearchGrid

DEFAULT_CHUNK_ELEMENTS = 2_000_000
CONSTANT_NORM_TOL = 1e-9
OBJECTIVES = ("auto", "correlation", "residual")


class MLGridEstimator:
    """
    ML by exhaustive search over a fixed grid.

    The objective is ``-||x - m(theta)||^2``. When every grid mean has the same
    norm the equivalent correlation ``Re{x^H m(theta)}`` is used instead. Ties
    resolve to the lowest grid index.
    """

    def __init__(self, model: ManifoldModel, grid: SearchGrid, objective: str = "auto",
                 chunk_elements: int = DEFAULT_CHUNK_ELEMENTS):
        if objective not in OBJECTIVES:
            raise DomainError(f"unknown objective {objective!r}; use one of {OBJECTIVES}")
        if grid.dim != model.param_dim:
            raise DomainError(f"grid has {grid.dim} column(s), {model.name} needs {model.param_dim}")
        self.logger = logging.getLogger(self.__class__.__name__)
        self.model = model
        self.grid = grid
        self.means = model.mean_batch(grid.points)
        self.energies = np.sum(np.abs(self.means) ** 2, axis=1)
        if objective == "auto":
            spread = np.ptp(self.energies)
            objective = ("correlation" if spread <= CONSTANT_NORM_TOL * np.max(self.energies)
                         else "residual")
        self.objective = objective
        self.rows_per_chunk = max(1, chunk_elements // grid.count)
        self.logger.debug(f"{model.name}: {grid.count}-point {grid.tag.value} grid, "
                          f"{objective} objective")

    def scores(self, snapshots: np.ndarray) -> np.ndarray:
        """Objective values, shape ``(B, G)``; larger is better."""
        correlation = np.real(snapshots @ np.conj(self.means).T)
        if self.objective == "correlation":
            return correlation
        return 2.0 * correlation - self.energies[None, :]

    def estimate_batch(self, snapshots: np.ndarray) -> np.ndarray:
        """Grid estimates for a ``(B, N)`` array, shape ``(B, J)``."""
        snapshots = np.atleast_2d(np.asarray(snapshots, dtype=complex))
        if snapshots.shape[1] != self.model.n_sensors:
            raise DomainError(f"expected snapshots of length {self.model.n_sensors}, "
                              f"got {snapshots.shape[1]}")
        best = np.empty(snapshots.shape[0], dtype=int)
        for start in range(0, snapshots.shape[0], self.rows_per_chunk):
            stop = start + self.rows_per_chunk
            best[start:stop] = np.argmax(self.scores(snapshots[start:stop]), axis=1)
        return self.grid.points[best]

    def estimate(self, x) -> np.ndarray:
        return self.estimate_batch(np.asarray(x, dtype=complex)[None, :])[0]

    __call__ = estimate_batch


class MAPGridEstimator(MLGridEstimator):
    """
    MAP by grid search: ``(2 Re{x^H m} - ||m||^2) / (s * sigma_w2) + ln f(theta)``
    with ``s`` the likelihood scale of the model's noise kind.

    Grid points with zero prior density are removed.
    """

    def __init__(self, model: ManifoldModel, prior: BetaPrior, grid: SearchGrid,
                 sigma_w2: float, chunk_elements: int = DEFAULT_CHUNK_ELEMENTS):
        if not sigma_w2 > 0:
            raise DomainError(f"sigma_w2 must be positive, got {sigma_w2}")
        log_prior = prior.logpdf(grid.points[:, 0])
        keep = np.isfinite(log_prior)
        if not np.any(keep):
            raise DomainError("no grid point has positive prior density")
        kept = SearchGrid(grid.points[keep], grid.tag, grid.axes, grid.metadata)
        super().__init__(model, kept, "auto", chunk_elements)
        self.prior = prior
        self.sigma_w2 = float(sigma_w2)
        self.fit_scale = model.noise_kind.likelihood_scale * self.sigma_w2
        self.log_prior = log_prior[keep]

    def scores(self, snapshots: np.ndarray) -> np.ndarray:
        correlation = np.real(snapshots @ np.conj(self.means).T)
        if self.objective == "correlation":
            fit = 2.0 * correlation
        else:
            fit = 2.0 * correlation - self.energies[None, :]
        return fit / self.fit_scale + self.log_prior[None, :]


class EspritBatchEstimator:
    """Row-wise ESPRIT angle estimates; undefined rows give NaN."""

    def __call__(self, snapshots: np.ndarray) -> np.ndarray:
        _, phi = esprit_estimate_batch(snapshots)
        return phi[:, None]


def ml_grid_estimate(model: ManifoldModel, x, grid: SearchGrid,
                     objective: str = "auto") -> np.ndarray:
    """Grid ML estimate for a single snapshot."""
    return MLGridEstimator(model, grid, objective).estimate(x)


def map_grid_estimate(model: ManifoldModel, prior: BetaPrior, x, grid: SearchGrid,
                      sigma_w2: float) -> float:
    """Grid MAP estimate for a single snapshot."""
    return float(MAPGridEstimator(model, prior, grid, sigma_w2).estimate(x)[0])


def select_component(estimates: np.ndarray, component: Optional[int]) -> np.ndarray:
    estimates = np.asarray(estimates, dtype=float)
    if estimates.ndim == 1:
        return estimates
    return estimates[:, component or 0]
