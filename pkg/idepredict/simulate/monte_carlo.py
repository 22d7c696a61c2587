"""
Seeded Monte Carlo evaluation of estimator MSE.

Runs are split into fixed blocks of ``BLOCK_SIZE``; block ``b`` draws its
noise from the child stream ``RngState(seed).spawn(b)``. The block layout does
not depend on the worker count, so results are bit-identical for any number
of threads.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np

from ..models.manifold import ManifoldModel, NoiseKind
from ..numeric.sampling import RandomSource, RngState, sample_complex_gaussian, sample_real_gaussian
from ..predictor.bayesian import BetaPrior
from ..utilities.error_handler import DomainError, MonteCarloAbortError
from ..utilities.parallel_manager import DEFAULT_BLOCK_SIZE, ParallelShardExecutor, ShardPlan
from .estimators import select_component

logger = logging.getLogger(__name__)

BLOCK_SIZE = DEFAULT_BLOCK_SIZE
MAX_FAILURE_FRACTION = 0.01

BatchEstimator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class McResult:
    """Empirical MSE with the standard error of the mean squared error."""
    mse: float
    stderr: float
    n_runs: int
    seed: int
    bias: float = 0.0
    n_failed: int = 0

    def __post_init__(self):
        if self.n_runs < 1:
            raise DomainError(f"McResult needs at least one run, got {self.n_runs}")
        if not (self.mse >= 0 and self.stderr >= 0):
            raise DomainError(f"MSE and stderr must be non-negative, got {self.mse}, {self.stderr}")


def draw_noise(model: ManifoldModel, source: RandomSource, rows: int, sigma2: float) -> np.ndarray:
    """``(rows, N)`` noise matching the model's noise kind."""
    sampler = sample_complex_gaussian if model.noise_kind is NoiseKind.COMPLEX else sample_real_gaussian
    return sampler(source, (rows, model.n_sensors), sigma2)


def summarize(errors: np.ndarray, n_runs: int, seed: int, label: str = "estimator") -> McResult:
    """Reduce raw errors to an ``McResult``; NaN entries are failed runs."""
    failed = ~np.isfinite(errors)
    n_failed = int(np.count_nonzero(failed))
    if n_failed > MAX_FAILURE_FRACTION * n_runs:
        first = int(np.flatnonzero(failed)[0])
        raise MonteCarloAbortError(
            f"{label}: {n_failed} of {n_runs} runs failed (first failure at run {first})",
            n_failed=n_failed, n_runs=n_runs, first_failure=first)
    if n_failed:
        logger.warning(f"{label}: discarded {n_failed} failed run(s) of {n_runs}")
    ok = errors[~failed]
    squared = ok ** 2
    stderr = float(np.std(squared, ddof=1) / np.sqrt(ok.size)) if ok.size > 1 else 0.0
    return McResult(mse=float(np.mean(squared)), stderr=stderr, n_runs=n_runs, seed=seed,
                    bias=float(np.mean(ok)), n_failed=n_failed)


def _check_runs(n_runs: int, sigma2: float) -> None:
    if n_runs < 2:
        raise DomainError(f"Monte Carlo needs at least 2 runs, got {n_runs}")
    if not (sigma2 > 0 and np.isfinite(sigma2)):
        raise DomainError(f"noise variance must be positive, got {sigma2}")


def run_monte_carlo(model: ManifoldModel, theta_true, sigma2: float,
                    estimator: BatchEstimator, n_runs: int, seed: int,
                    threads: Optional[int] = 1, component: int = 0,
                    target: Optional[float] = None) -> McResult:
    """
    Empirical MSE of ``estimator`` on ``x = m(theta_true) + noise``.

    Args:
        model: Data model
        theta_true: True parameter vector
        sigma2: Noise variance
        estimator: Maps a ``(B, N)`` snapshot array to ``(B,)`` or ``(B, J)`` estimates
        n_runs: Number of runs
        seed: Base seed
        threads: Worker threads; the result does not depend on it
        component: Column of the estimate that is scored
        target: True value of the scored component; defaults to ``theta_true[component]``

    Raises:
        MonteCarloAbortError: more than 1% of runs produced no estimate
    """
    _check_runs(n_runs, sigma2)
    theta = model.check(theta_true, what="true value")
    truth = float(theta[component]) if target is None else float(target)
    mean = model.mean(theta)
    base = RngState(seed)

    def work(block: int, start: int, stop: int) -> np.ndarray:
        snapshots = mean[None, :] + draw_noise(model, base.spawn(block), stop - start, sigma2)
        return select_component(estimator(snapshots), component) - truth

    plan = ShardPlan(n_runs, BLOCK_SIZE)
    errors = np.concatenate(ParallelShardExecutor(threads).map_blocks(plan, work, "montecarlo"))
    result = summarize(errors, n_runs, seed)
    logger.debug(f"Monte Carlo {model.name}: mse={result.mse:.6e} +/- {result.stderr:.2e}")
    return result


def run_bayesian_monte_carlo(model: ManifoldModel, prior: BetaPrior, sigma2: float,
                             estimators: Dict[str, BatchEstimator], n_runs: int, seed: int,
                             threads: Optional[int] = 1) -> Dict[str, McResult]:
    """
    Prior-averaged empirical MSE of several estimators on shared draws.

    Each run draws ``phi`` from the prior and one noise vector; every
    estimator sees the same snapshot, which pairs their errors.
    """
    _check_runs(n_runs, sigma2)
    if not estimators:
        raise DomainError("no estimators given")
    names = list(estimators)
    base = RngState(seed)

    def work(block: int, start: int, stop: int) -> np.ndarray:
        generator = base.spawn(block).generator()
        rows = stop - start
        angles = prior.sample(generator, rows)
        snapshots = model.mean_batch(angles[:, None]) + draw_noise(model, generator, rows, sigma2)
        return np.stack([select_component(estimators[name](snapshots), 0) - angles
                         for name in names], axis=1)

    plan = ShardPlan(n_runs, BLOCK_SIZE)
    errors = np.concatenate(ParallelShardExecutor(threads).map_blocks(plan, work, "bayesian-mc"))
    return {name: summarize(errors[:, i], n_runs, seed, name) for i, name in enumerate(names)}
