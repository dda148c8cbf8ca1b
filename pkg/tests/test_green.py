import math

import numpy as np
import pytest

from rbm_halfplane import (
    AtPole,
    BoundaryTooClose,
    ModelParams,
    contour_abscissa,
    density,
    f_transform,
    geometry,
    theta2_branches,
    validate_and_normalize,
)
from rbm_halfplane.green import _integrand_origin, _integrand_shifted

from conftest import SQRT2


class TestFTransform:
    def test_closed_form_value(self, p0):
        assert f_transform(p0, (1.0, 0.0)).real == pytest.approx(2.0, abs=1e-12)

    def test_product_form_random(self, p0):
        rng = np.random.default_rng(2)
        for _ in range(100):
            t1 = rng.uniform(0.05, 1.9)
            t2 = rng.uniform(-3.0, -0.05)
            th2p, th2m = theta2_branches(p0, t1)
            expected = 2.0 / ((t2 - th2p) * (p0.r * t1 + th2m))
            assert f_transform(p0, (t1, t2)).real == pytest.approx(
                expected.real, rel=1e-12
            )

    def test_pole_on_killed_line(self, p0):
        with pytest.raises(AtPole):
            f_transform(p0, (2.0, -1.0))

    def test_pole_on_kernel_circle(self, p0):
        th2p, _ = theta2_branches(p0, 1.0)
        with pytest.raises(AtPole):
            f_transform(p0, (1.0, th2p))


class TestContourAbscissa:
    def test_no_hint_midpoint(self, p0):
        assert contour_abscissa(p0) == pytest.approx(1.0, abs=1e-14)

    def test_hint_interior_saddle(self, p0):
        assert contour_abscissa(p0, math.pi / 2.0) == pytest.approx(1.0, abs=1e-14)

    def test_hint_clamped(self, p0):
        # saddle abscissa 1 + sqrt(6)/2 > theta1p = 2 clamps to 2 - margin
        assert contour_abscissa(p0, math.pi / 6.0) == pytest.approx(1.998, abs=1e-12)

    def test_inside_pole_free_band(self, p0):
        geo = geometry(p0)
        for alpha in np.linspace(0.05, math.pi - 0.05, 25):
            eps = contour_abscissa(p0, float(alpha))
            assert 0.0 < eps < geo.pole_p


class TestDensity:
    def test_boundary_too_close(self, p0):
        with pytest.raises(BoundaryTooClose):
            density(p0, (0.0, 0.0))
        with pytest.raises(BoundaryTooClose):
            density(p0, (1.0, 1e-4))

    def test_positivity(self, p0):
        for z1 in (-3.0, -1.0, 0.0, 1.0, 3.0):
            for z2 in (0.25, 1.0, 3.0):
                res = density(p0, (z1, z2), tol=1e-10)
                assert res.value > -1e-10
                assert res.abs_error_estimate >= 0.0

    def test_contour_independence(self, p0):
        z = (0.5, 1.5)
        base = density(p0, z, tol=1e-12)
        for eps in (0.2, 0.7, 1.3, 1.8):
            other = density(p0, z, tol=1e-12, eps=eps)
            assert abs(other.value - base.value) <= (
                10.0 * (base.abs_error_estimate + other.abs_error_estimate) + 1e-13
            )

    def test_error_estimate_honest(self, p0):
        # high-precision value as ground truth for a looser-tolerance call
        truth = density(p0, (0.0, 1.0), tol=1e-13).value
        res = density(p0, (0.0, 1.0), tol=1e-6)
        assert abs(res.value - truth) <= max(res.abs_error_estimate, 1e-12)

    def test_shifted_integrand_reduces_at_origin(self, p0):
        f0 = _integrand_origin(p0, 0.9)
        f1 = _integrand_shifted(p0, 0.9)
        t = np.linspace(0.0, 12.0, 111)
        rng = np.random.default_rng(4)
        for _ in range(20):
            z1, z2 = rng.uniform(-2, 2), rng.uniform(0.2, 3)
            a, b = f0(t, z1, z2), f1(t, z1, z2)
            assert np.max(np.abs(a - b)) < 1e-10

    def test_shifted_start_density_positive(self, p0_shifted):
        res = density(p0_shifted, (0.0, 1.5), tol=1e-9)
        assert res.value > 0.0

    def test_transport_identity(self):
        # anisotropic evaluation equals |detT| * normalized density at Tz
        sigma = ((4.0, 1.0), (1.0, 2.0))
        raw = validate_and_normalize(ModelParams(mu=(-1.0, -1.0), r=0.0, sigma=sigma))
        iso = validate_and_normalize(ModelParams(mu=raw.mu, r=raw.r))
        z = (0.4, 1.2)
        zn = raw.to_normalized_coords(z)
        lhs = density(raw, z, tol=1e-11).value
        rhs = abs(raw.detT) * density(iso, (float(zn[0]), float(zn[1])), tol=1e-11).value
        assert lhs == pytest.approx(rhs, rel=1e-8)

    def test_symmetry_of_reported_metadata(self, p0):
        res = density(p0, (0.0, 1.0), tol=1e-10)
        assert res.nodes_used > 0
        assert res.truncation_height > 0.0
        assert 0.0 < res.contour_abscissa < geometry(p0).pole_p
