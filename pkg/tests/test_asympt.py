import math

import numpy as np
import pytest

from rbm_halfplane import (
    AlphaOutOfRange,
    ModelParams,
    RegimeTag,
    angle_thresholds,
    classify,
    geometry,
    kernel_q,
    law,
    saddle,
    validate_and_normalize,
)
from rbm_halfplane.model import saddle_theta1, theta2_branches

from conftest import SQRT2, random_transient_params


def _phase(nm, alpha, t1):
    th2p, _ = theta2_branches(nm, t1)
    return t1 * math.cos(alpha) + th2p.real * math.sin(alpha)


class TestSaddle:
    def test_p0_values(self, p0):
        sd = saddle(p0, math.pi / 2.0)
        assert sd.theta_alpha == pytest.approx((1.0, 1.0 + SQRT2), abs=1e-13)
        assert sd.theta_alpha_tilde == pytest.approx((1.0, 1.0 - SQRT2), abs=1e-13)
        assert sd.s_second == pytest.approx(-1.0 / SQRT2, abs=1e-13)
        assert sd.exponent == pytest.approx(1.0 + SQRT2, abs=1e-13)

    def test_saddle_on_kernel_circle(self, p0):
        for alpha in np.linspace(0.1, math.pi - 0.1, 17):
            sd = saddle(p0, float(alpha))
            assert abs(kernel_q(p0, sd.theta_alpha)) < 1e-12
            assert abs(kernel_q(p0, sd.theta_alpha_tilde)) < 1e-12

    def test_stationarity_and_second_derivative(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            nm = validate_and_normalize(random_transient_params(rng))
            alpha = rng.uniform(0.2, math.pi - 0.2)
            sd = saddle(nm, alpha)
            t1 = sd.theta_alpha[0]
            h = 1e-5
            d1 = (_phase(nm, alpha, t1 + h) - _phase(nm, alpha, t1 - h)) / (2 * h)
            d2 = (
                _phase(nm, alpha, t1 + h)
                - 2 * _phase(nm, alpha, t1)
                + _phase(nm, alpha, t1 - h)
            ) / (h * h)
            assert abs(d1) < 1e-8
            assert d2 == pytest.approx(sd.s_second, rel=1e-4, abs=1e-6)

    def test_alpha_out_of_range(self, p0):
        with pytest.raises(AlphaOutOfRange):
            saddle(p0, 0.0)
        with pytest.raises(AlphaOutOfRange):
            saddle(p0, math.pi)

    def test_limit_toward_zero_angle(self, p0):
        geo = geometry(p0)
        sd = saddle(p0, 1e-4)
        assert sd.theta_alpha[0] == pytest.approx(geo.theta1_plus, abs=1e-6)
        assert sd.s_second < -1e6


class TestClassify:
    @pytest.mark.parametrize(
        "alpha,tag",
        [
            (math.pi / 2.0, RegimeTag.SADDLE),
            (math.pi / 6.0, RegimeTag.POLE_P),
            (5.0 * math.pi / 6.0, RegimeTag.POLE_ZERO),
            (math.pi / 4.0, RegimeTag.COINCIDENCE_P),
        ],
    )
    def test_p0_cases(self, p0, alpha, tag):
        assert classify(p0, alpha).tag is tag

    def test_coincidence_zero_at_alpha0(self, p0):
        geo = geometry(p0)
        assert classify(p0, geo.alpha0).tag is RegimeTag.COINCIDENCE_ZERO

    def test_thresholds(self, p0):
        a1, a0 = angle_thresholds(p0)
        assert a1 == pytest.approx(math.pi / 4.0, abs=1e-13)
        assert a0 == pytest.approx(3.0 * math.pi / 4.0, abs=1e-13)

    def test_threshold_flips(self):
        rng = np.random.default_rng(29)
        for _ in range(100):
            nm = validate_and_normalize(random_transient_params(rng))
            a1, a0 = angle_thresholds(nm)
            d = 1e-6
            if a1 > 10 * d:
                assert classify(nm, a1 + d).tag is RegimeTag.SADDLE
                assert classify(nm, a1 - d).tag is RegimeTag.POLE_P
            if 10 * d < a0 < math.pi - 10 * d:
                assert classify(nm, a0 - d).tag is RegimeTag.SADDLE
                assert classify(nm, a0 + d).tag is RegimeTag.POLE_ZERO

    def test_negative_alpha1_two_regimes(self):
        nm = validate_and_normalize(ModelParams(mu=(-1.0, -1.0), r=-1.0))
        a1, a0 = angle_thresholds(nm)
        assert a1 == pytest.approx(-math.pi / 4.0, abs=1e-12)
        for alpha in np.linspace(0.05, math.pi - 0.05, 40):
            tag = classify(nm, float(alpha)).tag
            assert tag in (
                RegimeTag.SADDLE,
                RegimeTag.POLE_ZERO,
                RegimeTag.COINCIDENCE_ZERO,
            )

    def test_mu2_positive_tags(self):
        nm = validate_and_normalize(ModelParams(mu=(-1.0, 0.5), r=0.0))
        for alpha in np.linspace(0.05, math.pi - 0.05, 30):
            tag = classify(nm, float(alpha)).tag
            assert tag in (
                RegimeTag.A3_SADDLE,
                RegimeTag.A3_POLE,
                RegimeTag.COINCIDENCE_P,
            )


class TestLaw:
    def test_p0_saddle(self, p0):
        L = law(p0, math.pi / 2.0)
        c1 = math.sqrt(2.0 * SQRT2 / math.pi) * (1.0 + SQRT2)
        assert L.prefactor == pytest.approx(c1, abs=1e-12)
        assert L.power == -0.5
        assert L.rate == pytest.approx(1.0 + SQRT2, abs=1e-13)

    def test_p0_pole(self, p0):
        L = law(p0, math.pi / 6.0)
        assert L.prefactor == pytest.approx(2.0, abs=1e-13)
        assert L.power == 0.0
        assert L.rate == pytest.approx(math.sqrt(3.0) + 1.0, abs=1e-13)

    def test_p0_pole_zero(self, p0):
        L = law(p0, 5.0 * math.pi / 6.0)
        assert L.prefactor == pytest.approx(2.0, abs=1e-13)
        assert L.rate == pytest.approx(1.0, abs=1e-13)

    def test_p0_coincidence_halving(self, p0):
        L = law(p0, math.pi / 4.0)
        assert L.regime.tag is RegimeTag.COINCIDENCE_P
        assert L.prefactor == pytest.approx(1.0, abs=1e-13)
        assert L.rate == pytest.approx(2.0 * SQRT2, abs=1e-13)

    def test_rate_dominance_in_pole_regimes(self):
        rng = np.random.default_rng(31)
        count = 0
        while count < 100:
            nm = validate_and_normalize(random_transient_params(rng))
            geo = geometry(nm)
            alpha = rng.uniform(0.05, math.pi - 0.05)
            tag = classify(nm, alpha).tag
            sd = saddle(nm, alpha)
            L = law(nm, alpha)
            if tag in (RegimeTag.POLE_P, RegimeTag.POLE_ZERO):
                assert L.rate < sd.exponent + 1e-12
                count += 1

    def test_rate_continuity_at_thresholds(self, p0):
        a1, a0 = angle_thresholds(p0)
        for a in (a1, a0):
            below = law(p0, a - 1e-8).rate
            above = law(p0, a + 1e-8).rate
            assert below == pytest.approx(above, abs=1e-6)

    def test_free_brownian_rate_in_saddle_regime(self):
        rng = np.random.default_rng(37)
        for _ in range(100):
            nm = validate_and_normalize(random_transient_params(rng))
            alpha = rng.uniform(0.05, math.pi - 0.05)
            if classify(nm, alpha).tag is not RegimeTag.SADDLE:
                continue
            L = law(nm, alpha)
            free = nm.m - (
                nm.mu1 * math.cos(alpha) + nm.mu2 * math.sin(alpha)
            )
            assert L.rate == pytest.approx(free, rel=1e-12)

    def test_positive_prefactors(self, p0):
        for alpha in np.linspace(0.05, math.pi - 0.05, 50):
            assert law(p0, float(alpha)).prefactor > 0.0

    def test_shifted_start_reduces_at_origin(self, p0):
        # x = 0 must reproduce the closed-form constants exactly
        nm0 = validate_and_normalize(ModelParams(mu=(-1.0, -1.0), r=0.0, x=(0.0, 0.0)))
        for alpha in (math.pi / 6.0, math.pi / 2.0, 5.0 * math.pi / 6.0):
            assert law(nm0, alpha).prefactor == pytest.approx(
                law(p0, alpha).prefactor, abs=1e-12
            )

    def test_shifted_start_pole_constant(self, p0_shifted):
        # C2(x) = C2 * exp(thetaTilde^p . x); for P0 thetaTilde^p = (2, 0)
        L = law(p0_shifted, math.pi / 6.0)
        x1, _ = p0_shifted.x
        assert L.prefactor == pytest.approx(2.0 * math.exp(2.0 * x1), rel=1e-12)

    def test_shifted_start_zero_constant(self, p0_shifted):
        # C3(x) = C3 since theta^0-tilde = (0, 0)
        L = law(p0_shifted, 5.0 * math.pi / 6.0)
        assert L.prefactor == pytest.approx(2.0, rel=1e-12)

    def test_classification_angle_equivalence(self):
        # Condition-based tags match the angle thresholds (smaller-scale
        # version of the acceptance property)
        rng = np.random.default_rng(41)
        for _ in range(200):
            nm = validate_and_normalize(random_transient_params(rng))
            geo = geometry(nm)
            for _ in range(10):
                alpha = rng.uniform(1e-3, math.pi - 1e-3)
                if min(abs(alpha - geo.alpha0), abs(alpha - geo.alpha1)) < 1e-6:
                    continue
                tag = classify(nm, alpha).tag
                if alpha > geo.alpha0:
                    assert tag is RegimeTag.POLE_ZERO
                elif geo.alpha1 > 0.0 and alpha < geo.alpha1:
                    assert tag is RegimeTag.POLE_P
                else:
                    assert tag is RegimeTag.SADDLE
