import math

import numpy as np
import pytest

from idepredict.bounds import (
    BoundKind, bcrlb, crlb_joint, crlb_scalar, hcrb_single_test_point, mcrlb_parametric_mean,
    p_min_e, zzb
)
from idepredict.models import (
    ManifoldModel, MismatchPair, far_field_manifold, fix_parameters, frequency_manifold
)
from idepredict.predictor import BetaPrior, mse_hat_map_bayes
from idepredict.utilities import DegenerateCurvatureError, DomainError, SingularInformationError


def _constant_model():
    return ManifoldModel("constant", 3, ((-1.0, 1.0),),
                         lambda thetas: np.ones((thetas.shape[0], 3), dtype=complex))


class TestCrlb:

    def test_frequency_value(self, tone):
        assert crlb_scalar(tone, math.pi / 2, 1.0, method="analytic").value == pytest.approx(
            1.0 / 2480.0, rel=1e-12)
        assert crlb_scalar(tone, math.pi / 2, 1.0).value == pytest.approx(4.032e-4, rel=1e-3)

    def test_scales_with_noise(self, tone):
        base = crlb_scalar(tone, 0.3, 1.0).value
        assert crlb_scalar(tone, 0.3, 7.5).value == pytest.approx(7.5 * base, rel=1e-12)

    def test_identity_complex_noise(self, identity):
        assert crlb_scalar(identity, 0.0, 2.0).value == pytest.approx(1.0, rel=1e-8)

    def test_ula_grows_towards_endfire(self, ula15):
        values = [crlb_scalar(ula15, phi, 1.0, method="analytic").value
                  for phi in (math.pi / 2, 1.0, 0.3, 0.05)]
        assert values == sorted(values)

    def test_vanishing_information(self):
        with pytest.raises(SingularInformationError):
            crlb_scalar(_constant_model(), 0.0, 1.0)

    def test_joint_exceeds_known_nuisance(self, reference_array, doa_truth):
        full = far_field_manifold(reference_array)
        joint = crlb_joint(full, doa_truth, 0.1)
        assert [b.diagnostics["parameter"] for b in joint] == list(full.param_names)
        for index in (0, 1):
            known = fix_parameters(full, index, {1 - index: doa_truth[1 - index]})
            single = crlb_scalar(known, doa_truth[index], 0.1).value
            assert joint[index].value >= single * (1 - 1e-9)

    def test_rejects_bad_noise(self, tone):
        with pytest.raises(DomainError):
            crlb_scalar(tone, 0.0, 0.0)


class TestMcrlb:

    def test_matched_pair_is_crlb(self, tone):
        pair = MismatchPair(tone, tone, 1.0, 1.0)
        assert mcrlb_parametric_mean(pair, 0.4).value == pytest.approx(
            crlb_scalar(tone, 0.4, 1.0).value, rel=1e-9)

    def test_true_noise_scales_linearly(self, tone):
        pair = MismatchPair(tone, tone, 2.0, 1.0)
        assert mcrlb_parametric_mean(pair, 0.4).value == pytest.approx(
            2.0 * crlb_scalar(tone, 0.4, 1.0).value, rel=1e-9)

    def test_amplitude_mismatch_changes_curvature(self, tone):
        pair = MismatchPair(frequency_manifold(16, 1.2), tone, 1.0, 1.0)
        result = mcrlb_parametric_mean(pair, 0.4)
        assert result.kind is BoundKind.MCRLB
        assert result.diagnostics["offset_norm"] > 0

    def test_degenerate_curvature(self):
        constant = _constant_model()
        with pytest.raises(DegenerateCurvatureError):
            mcrlb_parametric_mean(MismatchPair(constant, constant, 1.0, 1.0), 0.0)


class TestHcrb:

    def test_single_point_formula(self, identity):
        value = hcrb_single_test_point(identity, 0.0, 1.0, test_points=[0.5]).value
        assert value == pytest.approx(0.25 / math.expm1(0.5), rel=1e-12)

    def test_is_largest_term(self, identity):
        points = np.array([-2.0, -0.3, 0.1, 1.0, 4.0])
        best = hcrb_single_test_point(identity, 0.0, 1.0, test_points=points)
        terms = points ** 2 / np.expm1(2 * points ** 2)
        assert best.value == pytest.approx(terms.max(), rel=1e-12)
        assert best.diagnostics["test_point"] == pytest.approx(points[np.argmax(terms)])

    def test_increases_with_noise(self, tone):
        values = [hcrb_single_test_point(tone, 0.5, s2).value for s2 in (0.1, 1.0, 10.0)]
        assert values == sorted(values)

    def test_approaches_crlb_from_below(self, tone):
        hcrb = hcrb_single_test_point(tone, 0.5, 1.0).value
        crlb = crlb_scalar(tone, 0.5, 1.0).value
        assert hcrb <= crlb * (1 + 1e-6)
        assert hcrb > 0.5 * crlb

    def test_rejects_true_value_as_test_point(self, identity):
        with pytest.raises(DomainError):
            hcrb_single_test_point(identity, 0.0, 1.0, test_points=[0.0, 1.0])

    def test_skips_unidentifiable_points(self):
        with pytest.raises(DomainError):
            hcrb_single_test_point(_constant_model(), 0.0, 1.0)


class TestBinaryError:

    def test_symmetric_in_hypotheses(self, ula15):
        forward = p_min_e(ula15, 1.0, 1.2, 0.3, 0.7, 0.5)
        backward = p_min_e(ula15, 1.2, 1.0, 0.7, 0.3, 0.5)
        assert forward == pytest.approx(backward, rel=1e-12)

    @pytest.mark.parametrize("prior1", [0.5, 0.2, 0.9])
    def test_below_guessing(self, ula15, prior1):
        value = p_min_e(ula15, 1.0, 1.05, prior1, 1 - prior1, 2.0)
        assert 0.0 <= value <= min(prior1, 1 - prior1) + 1e-12

    def test_equal_priors_at_most_half(self, ula15):
        assert p_min_e(ula15, 1.0, 1.001, 0.5, 0.5, 100.0) <= 0.5

    def test_degenerate_prior(self, ula15):
        assert p_min_e(ula15, 1.0, 2.0, 0.0, 1.0, 1.0) == 0.0

    def test_bad_priors(self, ula15):
        with pytest.raises(DomainError):
            p_min_e(ula15, 1.0, 2.0, 0.6, 0.6, 1.0)


class TestBcrlb:

    def test_zero_snr_is_prior_term(self, prior10):
        assert bcrlb(prior10, 0.0, 15).value == pytest.approx(8 * math.pi ** 2 / 684, rel=1e-12)
        assert bcrlb(prior10, 0.0, 15).value == pytest.approx(0.11543, abs=1e-5)

    def test_decreases_with_snr(self, prior10):
        values = [bcrlb(prior10, snr, 15).value for snr in (0.0, 0.1, 1.0, 10.0)]
        assert values == sorted(values, reverse=True)

    def test_needs_informative_prior(self):
        with pytest.raises(DomainError):
            bcrlb(BetaPrior.flat(), 1.0, 15)

    def test_rejects_negative_snr(self, prior10):
        with pytest.raises(DomainError):
            bcrlb(prior10, -1.0, 15)


class TestZzb:

    def test_needs_angle_support(self, tone, prior10):
        with pytest.raises(DomainError):
            zzb(tone, prior10, 1.0)

    @pytest.mark.slow
    def test_no_data_limit(self, ula15, prior10):
        value = zzb(ula15, prior10, 1e5).value
        assert value <= prior10.variance * 1.05

    @pytest.mark.slow
    @pytest.mark.parametrize("snr_db", range(-10, 31, 5))
    def test_never_below_bcrlb(self, ula15, prior10, snr_db):
        snr = 10.0 ** (snr_db / 10.0)
        assert bcrlb(prior10, snr, 15).value <= zzb(ula15, prior10, 1.0 / snr).value

    @pytest.mark.slow
    @pytest.mark.parametrize("snr_db", [-15.0, -5.0, 5.0])
    def test_equals_averaged_map_prediction(self, ula15, prior10, snr_db):
        sigma2 = 10.0 ** (-snr_db / 10.0)
        bound = zzb(ula15, prior10, sigma2).value
        averaged = mse_hat_map_bayes(ula15, prior10, sigma2)
        assert averaged == pytest.approx(bound, rel=1e-3)
