"""
Tests for Klain weights and the light-cone angle.
"""

import math
from unittest import TestCase

import numpy as np

from core.choices import SubspaceOrbit
from core.exceptions import ValidationError
from grassmann.services import (
    degeneration_ratio,
    elevation,
    hyperplane_weight,
    klain_weight,
    light_cone_angle,
    section_covariance_check,
)
from minkowski.services import boost


def random_unit(n, rng):
    v = rng.normal(size=n)
    return v / np.linalg.norm(v)


def hyperplane_basis(omega):
    """Rows spanning omega-perp."""
    _, _, vt = np.linalg.svd(np.atleast_2d(omega))
    return vt[1:]


class LightConeAngleTests(TestCase):
    """Angle to the light cone"""

    def test_space_axis(self):
        """e_1 sits at pi/4 from the cone"""
        self.assertAlmostEqual(light_cone_angle([1, 0, 0]), math.pi / 4, places=15)

    def test_time_axis(self):
        """e_n sits at pi/4 from the cone"""
        self.assertAlmostEqual(light_cone_angle([0, 0, 1]), math.pi / 4, places=15)

    def test_light_direction(self):
        """A direction at elevation pi/4 lies on the cone"""
        s = math.sqrt(0.5)
        eps = light_cone_angle([s, 0, s])
        self.assertAlmostEqual(eps, 0.0, places=12)
        self.assertAlmostEqual(abs(math.sin(2 * eps)), abs(math.cos(2 * elevation([s, 0, s]))), places=12)

    def test_non_unit(self):
        """Non-unit input is rejected"""
        with self.assertRaises(ValidationError):
            light_cone_angle([1, 1, 0])


class KlainWeightTests(TestCase):
    """Invariant section weights"""

    def test_coordinate_plane(self):
        """span(e_1, ..., e_k) has weight 1"""
        kw = klain_weight([[1, 0, 0, 0], [0, 1, 0, 0]])
        self.assertEqual(kw.orbit, SubspaceOrbit.SPACE_LIKE)
        self.assertAlmostEqual(kw.weight, 1.0, places=14)

    def test_light_ray(self):
        """span(e_1 + e_n) has weight 0"""
        kw = klain_weight([[1, 0, 1]])
        self.assertTrue(kw.is_degenerate)
        self.assertEqual(kw.weight, 0.0)

    def test_light_ray_four_dimensions(self):
        """span(e_1 + e_4) and span(e_3 - e_4) in n = 4 have weight 0"""
        for ray in ([1, 0, 0, 1], [0, 0, 1, -1]):
            kw = klain_weight([ray])
            self.assertEqual(kw.orbit, SubspaceOrbit.DEGENERATE)
            self.assertEqual(kw.weight, 0.0)

    def test_full_rank_rejected(self):
        """k = n is outside Gr(n, k) for sections"""
        with self.assertRaises(ValidationError):
            klain_weight(np.eye(3))

    def test_weight_in_unit_interval(self):
        """Weights of random subspaces lie in (0, 1]"""
        rng = np.random.default_rng(2)
        for _ in range(100):
            n = int(rng.integers(3, 7))
            k = int(rng.integers(1, n))
            kw = klain_weight(rng.normal(size=(k, n)))
            self.assertGreater(kw.weight, 0.0)
            self.assertLessEqual(kw.weight, 1.0 + 1e-12)

    def test_hyperplane_identity(self):
        """weight(omega-perp) = sqrt|cos 2 alpha| for 500 random omega"""
        rng = np.random.default_rng(4)
        for _ in range(500):
            n = int(rng.integers(3, 7))
            omega = random_unit(n, rng)
            expected = math.sqrt(abs(math.cos(2 * elevation(omega))))
            kw = klain_weight(hyperplane_basis(omega))
            self.assertAlmostEqual(kw.weight, expected, delta=1e-8)
            self.assertAlmostEqual(hyperplane_weight(omega), expected, delta=1e-12)

    def test_basis_independence(self):
        """Changing the basis of the subspace keeps the weight"""
        rng = np.random.default_rng(9)
        basis = rng.normal(size=(2, 4))
        mix = np.array([[2.0, 1.0], [0.5, -1.0]])
        self.assertAlmostEqual(klain_weight(basis).weight, klain_weight(mix @ basis).weight, places=12)


class DegenerationTests(TestCase):
    """Weight against the closed-form area near the light cone"""

    def test_paths_to_light_cone(self):
        """weight * A^{1/2} -> 1 along 50 random paths, at distance 1e-4"""
        rng = np.random.default_rng(21)
        for _ in range(50):
            n = int(rng.integers(3, 7))
            k = int(rng.integers(1, n))
            t = 1e-4 * (1 if rng.random() < 0.5 else -1)
            rows = [np.eye(n)[j] for j in range(k - 1)]
            tilt = np.zeros(n)
            tilt[k - 1] = math.cos(math.pi / 4 + t)
            tilt[-1] = math.sin(math.pi / 4 + t)
            rows.append(tilt)
            g = boost(rng.uniform(-1, 1), 1, n) @ boost(rng.uniform(-1, 1), n - 1, n)
            basis = np.array(rows) @ g.T
            self.assertAlmostEqual(degeneration_ratio(basis), 1.0, delta=1e-6)

    def test_hyperplane_area_law(self):
        """A = 1/|sin 2 eps| on hyperplanes"""
        for eps in (0.3, 0.01, 1e-4):
            alpha = math.pi / 4 + eps
            omega = np.array([math.cos(alpha), 0.0, math.sin(alpha)])
            kw = klain_weight(hyperplane_basis(omega))
            self.assertAlmostEqual(kw.weight ** -2 * abs(math.sin(2 * eps)), 1.0, delta=1e-8)


class CovarianceTests(TestCase):
    """Boost covariance of the invariant sections"""

    def test_zero_boost(self):
        """theta = 0 gives residual 0"""
        self.assertEqual(section_covariance_check([[1, 0, 0], [0, 0, 1]], 0.0, 1), 0.0)

    def test_space_plane(self):
        """Coordinate space planes stay covariant under any boost"""
        for theta in (-2.0, -0.5, 0.7, 1.9):
            self.assertLessEqual(section_covariance_check([[1, 0, 0, 0], [0, 1, 0, 0]], theta, 3), 1e-8)

    def test_random_samples(self):
        """200 random (L, theta) samples, n <= 6"""
        rng = np.random.default_rng(13)
        worst = 0.0
        for _ in range(200):
            n = int(rng.integers(3, 7))
            k = int(rng.integers(1, n))
            basis = rng.normal(size=(k, n))
            theta = rng.uniform(-2, 2)
            axis = int(rng.integers(1, n))
            worst = max(worst, section_covariance_check(basis, theta, axis))
        self.assertLessEqual(worst, 1e-7)

    def test_pure_orbit_sections(self):
        """Sections supported on one orbit stay covariant"""
        rng = np.random.default_rng(17)
        for orbit in (SubspaceOrbit.SPACE_LIKE, SubspaceOrbit.MIXED_SIGNATURE):
            for _ in range(50):
                basis = rng.normal(size=(2, 4))
                residual = section_covariance_check(basis, rng.uniform(-1.5, 1.5), 2, orbit=orbit)
                self.assertLessEqual(residual, 1e-7)
