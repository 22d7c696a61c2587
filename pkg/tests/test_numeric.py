import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from idepredict.numeric import (
    QuadResult, QuadTolerances, RngState, adaptive_quad, covariance_factor, integrate_with,
    mvn_lower_orthant_mc, normal_ccdf, normal_cdf, sample_complex_gaussian,
    sample_real_gaussian
)
from idepredict.utilities import ConvergenceError, DomainError, NotPSDError

finite = st.floats(min_value=-50, max_value=50, allow_nan=False)
variances = st.floats(min_value=1e-3, max_value=1e3)


class TestGaussian:

    def test_ccdf_at_mean_is_half(self):
        assert normal_ccdf(0.0) == pytest.approx(0.5, abs=1e-15)
        assert normal_cdf(3.0, 3.0, 7.0) == pytest.approx(0.5, abs=1e-15)

    def test_infinite_arguments(self):
        assert normal_ccdf(math.inf) == 0.0
        assert normal_ccdf(-math.inf) == 1.0

    def test_far_tail_keeps_relative_precision(self):
        # Mills ratio asymptote for z = 30
        z = 30.0
        expected = math.exp(-z * z / 2) / (z * math.sqrt(2 * math.pi)) * (1 - 1 / z ** 2)
        assert normal_ccdf(z) == pytest.approx(expected, rel=1e-3)
        assert normal_ccdf(z) > 0

    def test_array_broadcast(self):
        values = normal_ccdf(np.array([-1.0, 0.0, 1.0]), 0.0, np.array([1.0, 2.0, 4.0]))
        assert values.shape == (3,)
        assert values[1] == pytest.approx(0.5)

    @pytest.mark.parametrize("variance", [0.0, -1.0, math.inf, math.nan])
    def test_rejects_bad_variance(self, variance):
        with pytest.raises(DomainError):
            normal_ccdf(0.0, 0.0, variance)

    @given(x=finite, m=finite, v=variances)
    def test_reflection_identity(self, x, m, v):
        assert normal_ccdf(x, m, v) + normal_ccdf(2 * m - x, m, v) == pytest.approx(1.0, abs=1e-12)

    @given(x=finite, m=finite, v=variances)
    def test_cdf_complements_ccdf(self, x, m, v):
        assert normal_cdf(x, m, v) + normal_ccdf(x, m, v) == pytest.approx(1.0, abs=1e-12)


class TestQuadrature:

    def test_polynomial_exact(self):
        result = adaptive_quad(lambda x: x ** 2, 0.0, 3.0)
        assert result.value == pytest.approx(9.0, rel=1e-12)
        assert result.n_evals >= 1

    def test_kink_with_breakpoint(self):
        result = adaptive_quad(abs, -1.0, 2.0, abs_tol=1e-12, rel_tol=1e-12, breakpoints=[0.0])
        assert result.value == pytest.approx(2.5, rel=1e-10)

    def test_half_normal_tail_weight(self):
        # integral of |x| ccdf(|2x|; 0, 2) over [-50, 50] equals sigma^2 / 4 with sigma^2 = 1
        def f(x):
            return abs(x) * normal_ccdf(abs(2 * x), 0.0, 2.0)
        result = adaptive_quad(f, -50.0, 50.0, abs_tol=1e-12, rel_tol=1e-10, breakpoints=[0.0])
        assert result.value == pytest.approx(0.25, abs=1e-6)

    @pytest.mark.parametrize("a, b", [(1.0, 1.0), (2.0, 1.0), (0.0, math.inf)])
    def test_rejects_bad_limits(self, a, b):
        with pytest.raises(DomainError):
            adaptive_quad(lambda x: x, a, b)

    def test_budget_exhaustion_raises(self):
        def wild(x):
            return math.sin(1.0 / x) / x if x != 0 else 0.0
        with pytest.raises(ConvergenceError) as info:
            adaptive_quad(wild, 1e-6, 1.0, abs_tol=1e-14, rel_tol=1e-14, max_subintervals=3)
        assert info.value.n_evals >= 1
        assert math.isfinite(info.value.best_estimate)

    def test_budget_exhaustion_can_be_tolerated(self):
        def wild(x):
            return math.sin(1.0 / x) / x
        result = adaptive_quad(wild, 1e-6, 1.0, abs_tol=1e-14, rel_tol=1e-14,
                               max_subintervals=3, raise_on_budget=False)
        assert math.isfinite(result.value)

    @settings(max_examples=25, deadline=None)
    @given(alpha=st.floats(-5, 5), beta=st.floats(-5, 5))
    def test_linearity(self, alpha, beta):
        def f(x):
            return math.exp(-x * x)

        def g(x):
            return math.cos(x)
        tols = QuadTolerances(abs_tol=1e-12, rel_tol=1e-12)
        combined = integrate_with(lambda x: alpha * f(x) + beta * g(x), -2.0, 2.0, tols).value
        separate = (alpha * integrate_with(f, -2.0, 2.0, tols).value
                    + beta * integrate_with(g, -2.0, 2.0, tols).value)
        assert combined == pytest.approx(separate, abs=1e-9)

    def test_results_add(self):
        total = QuadResult(1.0, 1e-9, 21) + QuadResult(2.0, 2e-9, 42)
        assert total.value == 3.0
        assert total.abs_error_estimate == pytest.approx(3e-9)
        assert total.n_evals == 63

    def test_tolerances_validate(self):
        with pytest.raises(DomainError):
            QuadTolerances(abs_tol=0.0)
        assert QuadTolerances().with_overrides(rel_tol=1e-8).rel_tol == 1e-8


class TestSampling:

    def test_equal_states_equal_samples(self):
        a = sample_complex_gaussian(RngState(7), 64, 2.0)
        b = sample_complex_gaussian(RngState(7), 64, 2.0)
        np.testing.assert_array_equal(a, b)

    def test_spawned_streams_differ(self):
        base = RngState(7)
        a = sample_real_gaussian(base.spawn(0), 16, 1.0)
        b = sample_real_gaussian(base.spawn(1), 16, 1.0)
        assert not np.array_equal(a, b)
        np.testing.assert_array_equal(a, sample_real_gaussian(RngState(7).spawn(0), 16, 1.0))

    def test_complex_power(self):
        v = sample_complex_gaussian(RngState(3), 200_000, 4.0)
        assert np.mean(np.abs(v) ** 2) == pytest.approx(4.0, rel=0.02)
        assert np.var(v.real) == pytest.approx(2.0, rel=0.02)

    def test_batch_shape(self):
        v = sample_complex_gaussian(RngState(5), (4, 16), 1.0)
        assert v.shape == (4, 16)
        np.testing.assert_array_equal(v.ravel(), sample_complex_gaussian(RngState(5), 64, 1.0))

    def test_live_generator_continues(self):
        generator = RngState(5).generator()
        first = sample_real_gaussian(generator, 8, 1.0)
        second = sample_real_gaussian(generator, 8, 1.0)
        np.testing.assert_array_equal(np.concatenate([first, second]),
                                      sample_real_gaussian(RngState(5), 16, 1.0))

    def test_rejects_bad_state(self):
        with pytest.raises(DomainError):
            RngState(-1)
        with pytest.raises(DomainError):
            RngState(1, algorithm="Mersenne")
        with pytest.raises(DomainError):
            sample_real_gaussian(RngState(1), 0, 1.0)
        with pytest.raises(DomainError):
            sample_complex_gaussian(RngState(1), (3, 0), 1.0)


class TestOrthant:

    def test_independent_halves(self):
        estimate = mvn_lower_orthant_mc([0.0, 0.0], np.eye(2), 100_000, RngState(11))
        assert abs(estimate.probability - 0.25) <= 3 * estimate.stderr + 1e-3

    def test_single_dimension_matches_cdf(self):
        estimate = mvn_lower_orthant_mc([1.0], [[2.0]], 100_000, RngState(5))
        assert abs(estimate.probability - normal_cdf(1.0, 0.0, 2.0)) <= 4 * estimate.stderr

    def test_reproducible(self):
        first = mvn_lower_orthant_mc([0.3, -0.2], [[1.0, 0.5], [0.5, 1.0]], 1000, RngState(2))
        second = mvn_lower_orthant_mc([0.3, -0.2], [[1.0, 0.5], [0.5, 1.0]], 1000, RngState(2))
        assert first == second

    def test_rank_deficient_covariance(self):
        factor = covariance_factor([[1.0, 1.0], [1.0, 1.0]])
        np.testing.assert_allclose(factor @ factor.T, np.ones((2, 2)), atol=1e-12)

    def test_not_psd(self):
        with pytest.raises(NotPSDError):
            covariance_factor([[1.0, 2.0], [2.0, 1.0]])

    def test_asymmetric(self):
        with pytest.raises(DomainError):
            covariance_factor([[1.0, 0.5], [0.0, 1.0]])
