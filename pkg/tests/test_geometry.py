from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import stats

from triform.geometry import (
    Orbit,
    at_action,
    distance,
    kappa_at,
    orbit_of,
    random_rotation,
    rotate,
    sample_sphere,
)


def e1(n, sign=1.0):
    x = np.zeros(n)
    x[0] = sign
    return x


class TestExamples:
    def test_identity_and_fixed_points(self):
        rng = np.random.default_rng(0)
        x = sample_sphere(5, rng)
        assert np.array_equal(at_action(0.0, x), x)
        for t in (-1.3, 0.4, 2.0):
            assert np.allclose(at_action(t, e1(5)), e1(5), atol=1e-15)
            assert np.allclose(at_action(t, e1(5, -1)), e1(5, -1), atol=1e-15)

    def test_conformal_factor(self):
        rng = np.random.default_rng(1)
        assert np.all(kappa_at(0.0, sample_sphere(4, rng, 10)) == 1.0)
        for t in (-1.0, 0.3, 1.7):
            assert kappa_at(t, e1(4)) == pytest.approx(math.exp(-t), rel=1e-14)
            assert kappa_at(t, e1(4, -1)) == pytest.approx(math.exp(t), rel=1e-14)

    def test_orbits(self):
        rng = np.random.default_rng(2)
        x, y, z = sample_sphere(4, rng, 3)
        assert orbit_of(x, y, z) is Orbit.O0
        assert orbit_of(x, x, z) is Orbit.O3
        assert orbit_of(x, y, y) is Orbit.O1
        assert orbit_of(x, y, x) is Orbit.O2
        assert orbit_of(x, x, x) is Orbit.O4
        assert orbit_of(x, x + 1e-12, z) is Orbit.O3
        with pytest.raises(ValueError):
            orbit_of(x, y, z, tol=0)


class TestInvariants:
    @pytest.mark.parametrize("n", [4, 5, 7])
    def test_covariance(self, n):
        rng = np.random.default_rng(10 + n)
        x = sample_sphere(n, rng, 20000)
        y = sample_sphere(n, rng, 20000)
        t = rng.uniform(-2, 2, 20000)
        lhs = distance(at_action(t, x), at_action(t, y))
        rhs = np.sqrt(kappa_at(t, x) * kappa_at(t, y)) * distance(x, y)
        assert np.max(np.abs(lhs - rhs)) < 1e-10

    def test_action_matches_unnormalized_formula(self):
        # the image lies on the sphere before renormalization
        rng = np.random.default_rng(3)
        x = sample_sphere(6, rng, 1000)
        t = 0.9
        ch, sh = math.cosh(t), math.sinh(t)
        den = ch + x[:, 0] * sh
        raw = x / den[:, None]
        raw[:, 0] = (sh + x[:, 0] * ch) / den
        assert np.allclose(np.linalg.norm(raw, axis=1), 1, atol=1e-13)
        assert np.allclose(at_action(t, x), raw, atol=1e-13)

    def test_group_law_and_cocycle(self):
        rng = np.random.default_rng(4)
        x = sample_sphere(5, rng, 5000)
        s, t = rng.uniform(-2, 2, 5000), rng.uniform(-2, 2, 5000)
        assert np.max(np.abs(at_action(s, at_action(t, x)) - at_action(s + t, x))) < 1e-10
        assert np.max(np.abs(kappa_at(s + t, x) - kappa_at(s, at_action(t, x)) * kappa_at(t, x))) < 1e-10

    def test_derivative_of_conformal_factor(self):
        rng = np.random.default_rng(5)
        x = sample_sphere(4, rng, 10000)
        h = 1e-5
        fd = (kappa_at(h, x) - kappa_at(-h, x)) / (2 * h)
        assert np.max(np.abs(fd + x[:, 0])) < 1e-6

    def test_rotations(self):
        rng = np.random.default_rng(6)
        for n in (4, 5, 8):
            r = random_rotation(n, rng)
            assert np.allclose(r @ r.T, np.eye(n), atol=1e-12)
            assert np.linalg.det(r) == pytest.approx(1.0)
            x, y = sample_sphere(n, rng, 2)
            assert distance(rotate(r, x), rotate(r, y)) == pytest.approx(distance(x, y), rel=1e-12)


class TestSampler:
    @pytest.mark.parametrize("n", [4, 5, 7])
    def test_first_coordinate_distribution(self, n):
        # (x_1 + 1)/2 is Beta((n-1)/2, (n-1)/2) under the uniform measure
        x = sample_sphere(n, np.random.default_rng(100 + n), 50000)
        res = stats.kstest((x[:, 0] + 1) / 2, stats.beta((n - 1) / 2, (n - 1) / 2).cdf)
        assert res.pvalue > 1e-3
        assert np.allclose(np.linalg.norm(x, axis=1), 1, atol=1e-14)

    def test_mean_and_second_moment(self):
        n = 5
        x = sample_sphere(n, np.random.default_rng(7), 200000)
        assert np.max(np.abs(x.mean(axis=0))) < 5 * math.sqrt(1 / n / 200000) * 2
        assert np.allclose(x.T @ x / 200000, np.eye(n) / n, atol=5e-3)

    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            sample_sphere(1, np.random.default_rng(0))
