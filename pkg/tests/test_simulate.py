import dataclasses
import math

import numpy as np
import pytest

from idepredict.models import NoiseKind
from idepredict.numeric import RngState, sample_complex_gaussian
from idepredict.predictor import BetaPrior, mse_hat_ml_scalar
from idepredict.simulate import (
    GridTag, MAPGridEstimator, MLGridEstimator, McResult, SearchGrid, draw_noise,
    map_grid_estimate, ml_grid_estimate, omega_grid, run_bayesian_monte_carlo, run_monte_carlo,
    sphere_grid, summarize, uniform_grid
)
from idepredict.utilities import DomainError, MonteCarloAbortError


def _noisy(model, theta, sigma2, rows, seed):
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal((rows, model.n_sensors)) + 1j * rng.standard_normal(
        (rows, model.n_sensors))
    return model.mean(theta)[None, :] + noise * math.sqrt(sigma2 / 2.0)


class TestGrids:

    def test_uniform_includes_ends(self):
        grid = uniform_grid(0.0, 2.0, 3)
        np.testing.assert_array_equal(grid.points[:, 0], [0.0, 1.0, 2.0])
        assert grid.tag is GridTag.UNIFORM
        assert grid.dim == 1

    def test_uniform_spacing(self):
        grid = uniform_grid(-math.pi, math.pi)
        assert grid.count == 3600
        np.testing.assert_allclose(np.diff(grid.points[:, 0]), 2 * math.pi / 3599)

    @pytest.mark.parametrize("args", [(0.0, 1.0, 1), (1.0, 1.0, 10), (2.0, 1.0, 10)])
    def test_uniform_rejects(self, args):
        with pytest.raises(DomainError):
            uniform_grid(*args)

    def test_sphere_ring_counts(self):
        grid = sphere_grid(5, 10.0)
        counts = grid.metadata["ring_counts"]
        np.testing.assert_array_equal(counts, [1, 8, 10, 8, 1])
        assert grid.count == counts.sum()
        assert grid.axes == ("azimuth", "elevation")

    def test_sphere_points_in_range(self):
        grid = sphere_grid()
        azimuth, elevation = grid.points[:, 0], grid.points[:, 1]
        assert np.all((azimuth >= -math.pi) & (azimuth < math.pi))
        assert np.all((elevation >= 0.0) & (elevation <= math.pi))
        assert grid.count == int(grid.metadata["ring_counts"].sum())

    def test_omega_grid(self):
        np.testing.assert_allclose(omega_grid(3).points[:, 0], [0.0, math.pi / 2, math.pi])
        grid = omega_grid()
        angles = grid.points[:, 0]
        assert grid.count == 8192
        assert np.all(np.diff(angles) > 0)
        spacing = np.diff(angles)
        assert spacing[0] > spacing[len(spacing) // 2]

    def test_empty_grid(self):
        with pytest.raises(DomainError):
            SearchGrid(np.empty((0, 1)), GridTag.UNIFORM)


class TestEstimators:

    def test_ml_noiseless_hits_grid_point(self, tone):
        grid = uniform_grid(-math.pi, math.pi)
        truth = grid.points[1234, 0]
        assert ml_grid_estimate(tone, tone.mean(truth), grid)[0] == truth

    def test_objectives_agree_on_constant_norm(self, ula15):
        grid = uniform_grid(0.0, math.pi, 900)
        snapshots = _noisy(ula15, 1.0, 0.5, 100, seed=3)
        correlation = MLGridEstimator(ula15, grid, "correlation")
        residual = MLGridEstimator(ula15, grid, "residual")
        assert MLGridEstimator(ula15, grid).objective == "correlation"
        np.testing.assert_array_equal(correlation(snapshots), residual(snapshots))

    def test_chunking_does_not_change_estimates(self, tone):
        grid = uniform_grid(-math.pi, math.pi, 500)
        snapshots = _noisy(tone, 0.7, 2.0, 64, seed=5)
        whole = MLGridEstimator(tone, grid)(snapshots)
        chunked = MLGridEstimator(tone, grid, chunk_elements=1000)(snapshots)
        np.testing.assert_array_equal(whole, chunked)

    def test_flat_map_is_ml(self, ula15):
        grid = uniform_grid(0.0, math.pi, 900)
        snapshots = _noisy(ula15, 1.2, 2.0, 100, seed=9)
        ml = MLGridEstimator(ula15, grid)(snapshots)
        map_ = MAPGridEstimator(ula15, BetaPrior.flat(), grid, 2.0)(snapshots)
        np.testing.assert_array_equal(ml, map_)

    def test_map_drops_zero_density_points(self, ula15, prior10):
        estimator = MAPGridEstimator(ula15, prior10, uniform_grid(0.0, math.pi, 101), 1.0)
        assert estimator.grid.count == 99
        value = map_grid_estimate(ula15, prior10, ula15.mean(1.0),
                                  uniform_grid(0.0, math.pi, 101), 1.0)
        assert 0.0 < value < math.pi

    def test_map_fit_weight_follows_noise_kind(self, ula15, prior10):
        grid = uniform_grid(0.0, math.pi, 181)
        real = dataclasses.replace(ula15, noise_kind=NoiseKind.REAL)
        snapshots = _noisy(ula15, 1.0, 1.0, 8, seed=4)
        complex_map = MAPGridEstimator(ula15, prior10, grid, 1.0)
        real_map = MAPGridEstimator(real, prior10, grid, 1.0)
        np.testing.assert_allclose(real_map.scores(snapshots) - real_map.log_prior,
                                   (complex_map.scores(snapshots) - complex_map.log_prior) / 2.0)

    def test_dimension_mismatch(self, tone):
        with pytest.raises(DomainError):
            MLGridEstimator(tone, sphere_grid(3, 2.0))
        with pytest.raises(DomainError):
            MLGridEstimator(tone, uniform_grid(0.0, 1.0), objective="likelihood")


class TestMonteCarlo:

    def test_noise_follows_noise_kind(self, tone):
        noise = draw_noise(tone, RngState(3), 5, 0.5)
        np.testing.assert_array_equal(noise, sample_complex_gaussian(RngState(3), (5, 16), 0.5))
        real = draw_noise(dataclasses.replace(tone, noise_kind=NoiseKind.REAL), RngState(3), 5, 0.5)
        assert real.shape == (5, 16)
        assert not np.iscomplexobj(real)

    def test_oracle_estimator(self, tone):
        result = run_monte_carlo(tone, 0.4, 1.0, lambda s: np.full(s.shape[0], 0.4), 1000, seed=1)
        assert result.mse == 0.0
        assert result.stderr == 0.0
        assert result.n_runs == 1000

    def test_constant_estimator(self, tone):
        result = run_monte_carlo(tone, 0.4, 1.0, lambda s: np.full(s.shape[0], 0.9), 600, seed=1)
        assert result.mse == pytest.approx(0.25)
        assert result.bias == pytest.approx(0.5)
        assert result.stderr == pytest.approx(0.0, abs=1e-15)

    def test_thread_count_does_not_change_result(self, tone):
        estimator = MLGridEstimator(tone, uniform_grid(-math.pi, math.pi, 720))
        single = run_monte_carlo(tone, 0.3, 2.0, estimator, 2000, seed=42, threads=1)
        pooled = run_monte_carlo(tone, 0.3, 2.0, estimator, 2000, seed=42, threads=6)
        assert single == pooled

    def test_seed_changes_result(self, tone):
        estimator = MLGridEstimator(tone, uniform_grid(-math.pi, math.pi, 720))
        first = run_monte_carlo(tone, 0.3, 2.0, estimator, 500, seed=1)
        second = run_monte_carlo(tone, 0.3, 2.0, estimator, 500, seed=2)
        assert first.mse != second.mse

    def test_ml_matches_prediction_at_high_snr(self, tone):
        estimator = MLGridEstimator(tone, uniform_grid(-math.pi, math.pi, 18000))
        result = run_monte_carlo(tone, 0.5, 0.1, estimator, 2000, seed=7, threads=2)
        predicted = mse_hat_ml_scalar(tone, 0.5, 0.1).mse
        assert result.mse == pytest.approx(predicted, rel=0.15)

    def test_aborts_when_estimator_fails(self, tone):
        with pytest.raises(MonteCarloAbortError) as info:
            run_monte_carlo(tone, 0.0, 1.0, lambda s: np.full(s.shape[0], np.nan), 300, seed=1)
        assert info.value.n_failed == 300

    def test_tolerates_rare_failures(self, tone):
        mean0 = tone.mean(0.0)[0]

        def flaky(snapshots):
            out = np.zeros(snapshots.shape[0])
            out[np.real(snapshots[:, 0] - mean0) > 1.82] = np.nan
            return out

        result = run_monte_carlo(tone, 0.0, 1.0, flaky, 10_000, seed=3)
        assert 0 < result.n_failed <= 100
        assert result.mse == 0.0

    def test_rejects_single_run(self, tone):
        with pytest.raises(DomainError):
            run_monte_carlo(tone, 0.0, 1.0, lambda s: np.zeros(s.shape[0]), 1, seed=1)

    def test_summarize(self):
        result = summarize(np.array([1.0, -1.0, 1.0, -1.0]), 4, seed=0)
        assert result == McResult(mse=1.0, stderr=0.0, n_runs=4, seed=0, bias=0.0)

    def test_bayesian_runs_share_draws(self, ula15, prior10):
        grid = uniform_grid(0.0, math.pi, 360)
        estimators = {
            "ml": MLGridEstimator(ula15, grid),
            "map": MAPGridEstimator(ula15, prior10, grid, 1.0),
            "twin": MLGridEstimator(ula15, grid),
        }
        results = run_bayesian_monte_carlo(ula15, prior10, 1.0, estimators, 512, seed=11, threads=2)
        assert set(results) == {"ml", "map", "twin"}
        assert results["ml"] == results["twin"]
        again = run_bayesian_monte_carlo(ula15, prior10, 1.0, estimators, 512, seed=11, threads=1)
        assert again == results
