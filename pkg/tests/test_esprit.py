import math

import numpy as np
import pytest

from idepredict.esprit import (
    EspritScenario, build_q_matrix, delta_j_moments, esprit_cost, esprit_crlb,
    esprit_estimate, esprit_estimate_batch, mse_hat_esprit
)
from idepredict.simulate import EspritBatchEstimator, run_monte_carlo
from idepredict.utilities import DomainError, UndefinedEstimateError

PHI = math.radians(35.0)


@pytest.fixture
def scenario():
    return EspritScenario(15, 1.0, PHI, 1.0)


def _noisy(scenario, rng, rows):
    mean = scenario.model.mean(scenario.phi_bar)
    noise = (rng.standard_normal((rows, mean.size)) + 1j * rng.standard_normal((rows, mean.size)))
    return mean[None, :] + noise * math.sqrt(scenario.sigma_w2 / 2.0)


class TestEstimator:

    def test_noiseless_is_exact(self, scenario):
        estimate = esprit_estimate(scenario.model.mean(PHI))
        assert estimate.omega_hat == pytest.approx(scenario.omega_bar, abs=1e-12)
        assert estimate.phi_hat == pytest.approx(PHI, abs=1e-10)

    def test_minimizes_cost(self, scenario):
        rng = np.random.default_rng(4)
        omegas = np.linspace(-math.pi, math.pi, 10_000)
        for x in _noisy(scenario, rng, 100):
            estimate = esprit_estimate(x)
            assert esprit_cost(x, estimate.omega_hat)[0] <= np.min(esprit_cost(x, omegas)) + 1e-9

    def test_batch_matches_single(self, scenario):
        snapshots = _noisy(scenario, np.random.default_rng(8), 20)
        omega, phi = esprit_estimate_batch(snapshots)
        for row, w, p in zip(snapshots, omega, phi):
            single = esprit_estimate(row)
            assert w == pytest.approx(single.omega_hat, abs=1e-12)
            assert p == pytest.approx(single.phi_hat, abs=1e-12)

    def test_undefined_estimate(self):
        with pytest.raises(UndefinedEstimateError):
            esprit_estimate([1.0, 0.0, 0.0])
        omega, phi = esprit_estimate_batch(np.array([[1.0, 0.0, 0.0], [1.0, 1.0, 1.0]]))
        assert math.isnan(omega[0]) and math.isnan(phi[0])
        assert phi[1] == pytest.approx(math.pi / 2)

    def test_too_short(self):
        with pytest.raises(DomainError):
            esprit_estimate([1.0])


class TestScenario:

    @pytest.mark.parametrize("n, phi, sigma2", [(2, PHI, 1.0), (15, 0.0, 1.0),
                                                (15, math.pi, 1.0), (15, PHI, 0.0)])
    def test_rejects_bad_values(self, n, phi, sigma2):
        with pytest.raises(DomainError):
            EspritScenario(n, 1.0, phi, sigma2)

    def test_from_snr_db(self):
        scenario = EspritScenario.from_snr_db(15, 2.0, PHI, 10.0)
        assert scenario.sigma_w2 == pytest.approx(0.4)
        assert scenario.snr == pytest.approx(10.0)


class TestMoments:

    def test_q_is_hermitian_tridiagonal(self):
        q = build_q_matrix(PHI, 0.1, 6)
        np.testing.assert_allclose(q, np.conj(q.T))
        assert np.trace(q) == 0
        assert np.count_nonzero(np.triu(q, 2)) == 0

    def test_quadratic_form_is_cost_difference(self, scenario):
        q = build_q_matrix(PHI, 0.1, 15)
        omega_shifted = math.pi * math.cos(PHI + 0.2)
        for x in _noisy(scenario, np.random.default_rng(1), 10):
            difference = esprit_cost(x, omega_shifted)[0] - esprit_cost(x, scenario.omega_bar)[0]
            assert np.real(np.vdot(x, q @ x)) == pytest.approx(difference, abs=1e-9)

    def test_moments_vanish_at_truth(self, scenario):
        moments = delta_j_moments(scenario, 0.0)
        assert moments.mu_delta == pytest.approx(0.0, abs=1e-12)
        assert moments.sigma2_delta == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("eps", [-0.2, -0.01, 1e-3, 0.05, 0.3])
    def test_cost_grows_away_from_truth(self, scenario, eps):
        assert delta_j_moments(scenario, eps).mu_delta > 0

    def test_shift_outside_support(self, scenario):
        with pytest.raises(DomainError):
            delta_j_moments(scenario, -PHI)

    @pytest.mark.parametrize("eps", [-0.15, 0.02, 0.1, 0.4])
    def test_moments_match_sampling(self, scenario, eps):
        draws = 200_000
        x = _noisy(scenario, np.random.default_rng(17), draws)
        c = np.exp(1j * scenario.omega_bar) - np.exp(1j * math.pi * math.cos(PHI + 2 * eps))
        samples = 2.0 * np.real(c * np.sum(np.conj(x[:, 1:]) * x[:, :-1], axis=1))
        moments = delta_j_moments(scenario, eps)
        assert abs(samples.mean() - moments.mu_delta) <= 4 * math.sqrt(moments.sigma2_delta / draws)
        assert samples.var() == pytest.approx(moments.sigma2_delta, rel=0.03)


class TestPrediction:

    def test_above_crlb_at_high_snr(self):
        scenario = EspritScenario.from_snr_db(15, 1.0, PHI, 20.0)
        assert mse_hat_esprit(scenario).mse > esprit_crlb(scenario).value

    def test_decreases_with_snr(self):
        values = [mse_hat_esprit(EspritScenario.from_snr_db(15, 1.0, PHI, snr)).mse
                  for snr in (-10.0, 0.0, 10.0, 20.0)]
        assert values == sorted(values, reverse=True)

    @pytest.mark.slow
    @pytest.mark.parametrize("snr_db", [10.0, 20.0])
    def test_tracks_monte_carlo(self, snr_db):
        scenario = EspritScenario.from_snr_db(15, 1.0, PHI, snr_db)
        empirical = run_monte_carlo(scenario.model, PHI, scenario.sigma_w2,
                                    EspritBatchEstimator(), 10_000, seed=20240105, threads=2)
        predicted = mse_hat_esprit(scenario).mse
        assert 0.5 < predicted / empirical.mse < 2.0
