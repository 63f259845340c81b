"""
Tests for the cone-area identity on the unit pseudospheres.
"""

import math
from unittest import TestCase

import numpy as np

from core.choices import Sheet
from core.exceptions import PreconditionError, ValidationError
from valuations.cone_area import arc_length, circle_patch, cone_area_identity, random_patch, sector_area
from valuations.models import HyperboloidPatch


class GeodesicTests(TestCase):
    """Arc length and sector area"""

    def test_waist_quarter(self):
        """A quarter of the waist circle has length pi/2 and sector area pi/4"""
        p, q = np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])
        self.assertAlmostEqual(arc_length(Sheet.H_PLUS, p, q), math.pi / 2, places=12)
        self.assertAlmostEqual(sector_area(Sheet.H_PLUS, p, q), math.pi / 4, places=10)

    def test_hyperbolic_distance(self):
        """Distance from the apex is the rapidity"""
        apex = np.array([0.0, 0.0, 1.0])
        r = 0.8
        q = np.array([math.sinh(r), 0.0, math.cosh(r)])
        self.assertAlmostEqual(arc_length(Sheet.H_MINUS, apex, q), r, places=12)

    def test_coincident(self):
        """Coincident endpoints give zero"""
        p = np.array([1.0, 0.0, 0.0])
        self.assertEqual(arc_length(Sheet.H_PLUS, p, p.copy()), 0.0)
        self.assertEqual(sector_area(Sheet.H_PLUS, p, p.copy()), 0.0)


class ConeAreaIdentityTests(TestCase):
    """Boundary length equals the valuation of the cone"""

    def test_tilted_circle(self):
        """Closed geodesics on H+ give 2 pi on both sides"""
        for psi in (0.0, 0.2, -0.5):
            lhs, rhs = cone_area_identity(Sheet.H_PLUS, circle_patch(psi))
            self.assertAlmostEqual(lhs, 2 * math.pi, places=9)
            self.assertAlmostEqual(rhs, 2 * math.pi, delta=1e-6)

    def test_random_de_sitter(self):
        """Random patches on H+"""
        rng = np.random.default_rng(11)
        for _ in range(10):
            lhs, rhs = cone_area_identity(Sheet.H_PLUS, random_patch(Sheet.H_PLUS, rng))
            self.assertAlmostEqual(lhs, rhs, delta=1e-6 * max(1.0, lhs))

    def test_random_hyperbolic(self):
        """Random patches on H-"""
        rng = np.random.default_rng(12)
        for _ in range(10):
            lhs, rhs = cone_area_identity(Sheet.H_MINUS, random_patch(Sheet.H_MINUS, rng, vertices=4))
            self.assertGreater(lhs, 0.0)
            self.assertAlmostEqual(lhs, rhs, delta=1e-6 * max(1.0, lhs))

    def test_degenerate_patch(self):
        """All vertices coincident gives (0, 0)"""
        patch = HyperboloidPatch(Sheet.H_MINUS, np.array([[0.0, 0.0, 1.0]] * 3))
        self.assertEqual(cone_area_identity(Sheet.H_MINUS, patch), (0.0, 0.0))

    def test_time_like_boundary(self):
        """H+ arcs in mixed planes are rejected"""
        t = 1.0
        patch = HyperboloidPatch(Sheet.H_PLUS, np.array([
            [1.0, 0.0, 0.0],
            [math.cosh(t), 0.0, math.sinh(t)],
            [0.0, 1.0, 0.0],
        ]))
        with self.assertRaises(PreconditionError):
            cone_area_identity(Sheet.H_PLUS, patch)

    def test_sheet_mismatch(self):
        """The patch must live on the requested sheet"""
        with self.assertRaises(ValidationError):
            cone_area_identity(Sheet.H_MINUS, circle_patch(0.1))


class PatchTests(TestCase):
    """Patch construction"""

    def test_off_sheet(self):
        """Vertices off the pseudosphere are rejected"""
        with self.assertRaises(ValidationError):
            HyperboloidPatch(Sheet.H_PLUS, np.array([[2.0, 0.0, 0.0]]))

    def test_lower_sheet(self):
        """Hyperbolic patches live on the upper sheet"""
        with self.assertRaises(ValidationError):
            HyperboloidPatch(Sheet.H_MINUS, np.array([[0.0, 0.0, -1.0]]))

    def test_few_de_sitter_vertices(self):
        """Random de Sitter patches need five vertices"""
        with self.assertRaises(ValidationError):
            random_patch(Sheet.H_PLUS, np.random.default_rng(0), vertices=4)

    def test_bad_tilt(self):
        """Closed geodesics need |psi| < pi/4"""
        with self.assertRaises(ValidationError):
            circle_patch(math.pi / 4)
