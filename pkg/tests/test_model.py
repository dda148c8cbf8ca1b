import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rbm_halfplane import (
    BadCovariance,
    BadStart,
    DriftSign,
    ModelParams,
    NotTransient,
    OnBranchCut,
    geometry,
    kernel_q,
    theta2_branches,
    validate_and_normalize,
)
from rbm_halfplane.model import normalizing_map, saddle_theta1, theta1_pole_candidate

from conftest import SQRT2, random_transient_params


class TestValidateAndNormalize:
    def test_identity_covariance_fixed_point(self, p0):
        assert p0.mu == (-1.0, -1.0)
        assert p0.r == 0.0
        assert p0.drift_sign is DriftSign.MU2_NEGATIVE
        assert np.allclose(p0.T, np.eye(2))
        assert p0.detT == 1.0

    def test_not_transient(self):
        with pytest.raises(NotTransient):
            validate_and_normalize(ModelParams(mu=(1.0, -1.0), r=0.0))

    def test_transience_is_strict(self):
        # mu1 + r*mu2^- = -1 + 1*1 = 0: equality rejected
        with pytest.raises(NotTransient):
            validate_and_normalize(ModelParams(mu=(-1.0, -1.0), r=1.0))

    def test_anisotropic_normalization(self):
        sigma = ((4.0, 1.0), (1.0, 2.0))
        nm = validate_and_normalize(ModelParams(mu=(-1.0, -1.0), r=0.0, sigma=sigma))
        T = np.asarray(nm.T)
        assert np.allclose(T @ np.asarray(sigma) @ T.T, np.eye(2), atol=1e-12)
        assert abs(abs(nm.detT) - 1.0 / math.sqrt(7.0)) < 1e-12

    def test_normalized_reflection_second_component(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            a, c = rng.uniform(0.5, 3.0, size=2)
            b = rng.uniform(-0.5, 0.5) * math.sqrt(a * c)
            sigma = ((a, b), (b, c))
            T = normalizing_map(np.asarray(sigma))
            refl = math.sqrt(c) * (T @ np.array([0.3, 1.0]))
            assert abs(refl[1] - 1.0) < 1e-12

    def test_bad_covariance(self):
        with pytest.raises(BadCovariance):
            validate_and_normalize(
                ModelParams(mu=(-1.0, -1.0), r=0.0, sigma=((1.0, 2.0), (2.0, 1.0)))
            )
        with pytest.raises(BadCovariance):
            validate_and_normalize(
                ModelParams(mu=(-1.0, -1.0), r=0.0, sigma=((1.0, 0.5), (0.4, 1.0)))
            )

    def test_bad_start(self):
        with pytest.raises(BadStart):
            validate_and_normalize(ModelParams(mu=(-1.0, -1.0), r=0.0, x=(0.0, -1.0)))

    def test_start_point_mapped_through_t(self):
        sigma = ((4.0, 1.0), (1.0, 2.0))
        nm = validate_and_normalize(
            ModelParams(mu=(-1.0, -1.0), r=0.0, sigma=sigma, x=(1.0, 2.0))
        )
        assert nm.x_raw == (1.0, 2.0)
        assert np.allclose(nm.x, np.asarray(nm.T) @ np.array([1.0, 2.0]))
        assert nm.x[1] >= 0.0  # boundary-preserving map


class TestKernel:
    def test_origin_on_circle(self, p0):
        assert kernel_q(p0, (0.0, 0.0)) == 0.0

    def test_theta_plus_on_circle(self, p0):
        geo = geometry(p0)
        assert abs(kernel_q(p0, geo.theta_plus)) < 1e-12

    def test_q_interior_value(self, p0):
        assert kernel_q(p0, (1.0, 0.0)) == pytest.approx(-0.5, abs=1e-15)

    def test_branches_at_one(self, p0):
        th2p, th2m = theta2_branches(p0, 1.0)
        assert th2p == pytest.approx(1.0 + SQRT2, abs=1e-14)
        assert th2m == pytest.approx(1.0 - SQRT2, abs=1e-14)

    def test_branch_point_coalescence(self, p0):
        geo = geometry(p0)
        # the discriminant vanishes only to rounding, so sqrt amplifies the
        # last-bit error to ~1e-8
        th2p, th2m = theta2_branches(p0, geo.theta1_plus)
        assert th2p == pytest.approx(1.0, abs=1e-7)
        assert th2m == pytest.approx(1.0, abs=1e-7)

    def test_on_branch_cut(self, p0):
        geo = geometry(p0)
        with pytest.raises(OnBranchCut):
            theta2_branches(p0, geo.theta1_plus + 0.5)
        with pytest.raises(OnBranchCut):
            theta2_branches(p0, geo.theta1_minus - 0.5)

    @given(
        re=st.floats(-3.0, 5.0),
        im=st.floats(-4.0, 4.0),
    )
    @settings(max_examples=200)
    def test_vieta_and_kernel_zero(self, p0, re, im):
        t1 = complex(re, im)
        # keep real samples strictly inside (theta1^-, theta1^+)
        if im == 0.0 and (re <= 1.0 - SQRT2 + 1e-9 or re >= 1.0 + SQRT2 - 1e-9):
            return
        th2p, th2m = theta2_branches(p0, t1)
        assert abs(th2p + th2m - 2.0) < 1e-12  # -2*mu2
        assert abs(th2p * th2m - (t1 * t1 - 2.0 * t1)) < 1e-10
        assert abs(kernel_q(p0, (t1, th2p))) < 1e-10
        assert abs(kernel_q(p0, (t1, th2m))) < 1e-10

    def test_conjugate_symmetry(self, p0):
        rng = np.random.default_rng(3)
        for _ in range(100):
            t1 = complex(rng.uniform(-2, 4), rng.uniform(0.1, 3))
            a = theta2_branches(p0, t1)
            b = theta2_branches(p0, t1.conjugate())
            assert cmath.isclose(b[0], a[0].conjugate(), rel_tol=0, abs_tol=1e-12)
            assert cmath.isclose(b[1], a[1].conjugate(), rel_tol=0, abs_tol=1e-12)


class TestGeometry:
    def test_p0_geometry(self, p0):
        geo = geometry(p0)
        assert geo.theta1_minus == pytest.approx(1.0 - SQRT2, abs=1e-14)
        assert geo.theta1_plus == pytest.approx(1.0 + SQRT2, abs=1e-14)
        assert geo.theta_plus[1] == 1.0
        assert geo.r_dot_theta_plus == pytest.approx(1.0, abs=1e-14)
        assert geo.pole_p == pytest.approx(2.0, abs=1e-14)
        assert geo.pole_zero == 0.0
        assert geo.alpha_mu == pytest.approx(math.pi / 4.0, abs=1e-14)
        assert geo.alpha_r == pytest.approx(math.pi / 2.0, abs=1e-14)
        assert geo.alpha0 == pytest.approx(3.0 * math.pi / 4.0, abs=1e-14)
        assert geo.alpha1 == pytest.approx(math.pi / 4.0, abs=1e-14)

    def test_pole_candidate_solves_both_equations(self, p0):
        geo = geometry(p0)
        tp = geo.pole_p
        th2p, th2m = theta2_branches(p0, tp)
        assert abs(kernel_q(p0, (tp, th2p))) < 1e-12
        assert abs(p0.r * tp + th2m) < 1e-12

    def test_degenerate_reflection_no_pole(self):
        nm = validate_and_normalize(ModelParams(mu=(-1.0, -1.0), r=-(SQRT2 - 1.0)))
        geo = geometry(nm)
        assert geo.r_dot_theta_plus == pytest.approx(0.0, abs=1e-12)
        assert geo.pole_p is None
        assert geo.alpha1 == pytest.approx(0.0, abs=1e-12)

    def test_negative_r_dot_no_pole(self):
        nm = validate_and_normalize(ModelParams(mu=(-1.0, -1.0), r=-1.0))
        geo = geometry(nm)
        assert geo.r_dot_theta_plus < 0.0
        assert geo.pole_p is None
        assert geo.alpha1 == pytest.approx(-math.pi / 4.0, abs=1e-12)

    def test_branch_point_signs_mu2_negative(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            nm = validate_and_normalize(random_transient_params(rng))
            geo = geometry(nm)
            assert geo.theta1_minus < 0.0 < geo.theta1_plus
            if geo.pole_p is not None:
                assert 0.0 < geo.pole_p < geo.theta1_plus

    def test_alpha1_positive_iff_pole(self):
        rng = np.random.default_rng(13)
        for _ in range(1000):
            nm = validate_and_normalize(random_transient_params(rng))
            geo = geometry(nm)
            assert (geo.alpha1 > 0.0) == (geo.r_dot_theta_plus > 0.0)

    def test_renormalization_invariant(self, p0):
        again = validate_and_normalize(
            ModelParams(mu=p0.mu, r=p0.r, x=p0.x)
        )
        assert geometry(again) == geometry(p0)

    def test_saddle_theta1(self, p0):
        assert saddle_theta1(p0, math.pi / 2.0) == pytest.approx(1.0, abs=1e-14)
        assert saddle_theta1(p0, math.pi / 6.0) == pytest.approx(
            1.0 + SQRT2 * math.cos(math.pi / 6.0), abs=1e-14
        )

    def test_pole_candidate_formula(self, p0):
        assert theta1_pole_candidate(p0) == 2.0
