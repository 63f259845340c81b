"""
Tests for body documents.
"""

from unittest import TestCase

import numpy as np

from core.exceptions import ValidationError
from bodies.models import Polytope, RotationBody, StretchedCone
from bodies.schemas import dump_body, parse_body
from bodies.services import support_function


class ParseBodyTests(TestCase):
    """Reading body documents"""

    def test_polytope(self):
        """Vertices become a Polytope"""
        body = parse_body({"type": "polytope", "vertices": [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]})
        self.assertIsInstance(body, Polytope)
        self.assertEqual(body.n, 3)

    def test_rotation(self):
        """Profile documents become rotation bodies"""
        body = parse_body({"type": "rotation", "n": 4, "profile": [[1, 0.5], [0.5, 1]]})
        self.assertIsInstance(body, RotationBody)
        self.assertEqual(body.n, 4)

    def test_double_cone(self):
        """Cone documents carry eps and default k = n - 1"""
        body = parse_body({"type": "double_cone", "n": 5, "eps": 0.02})
        self.assertIsInstance(body, StretchedCone)
        self.assertEqual(body.k, 4)
        self.assertEqual(body.eps, 0.02)

    def test_unknown_type(self):
        """Unknown body types are input errors"""
        with self.assertRaises(ValidationError):
            parse_body({"type": "ellipsoid", "n": 3})

    def test_ragged_vertices(self):
        """Rows of different length are rejected"""
        with self.assertRaises(ValidationError):
            parse_body({"type": "polytope", "vertices": [[0, 0], [1, 0, 0]]})

    def test_bad_profile(self):
        """Profile rows must be pairs"""
        with self.assertRaises(ValidationError):
            parse_body({"type": "rotation", "n": 3, "profile": [[1, 0, 0]]})


class DumpBodyTests(TestCase):
    """Round trip through body documents"""

    def test_round_trip_support(self):
        """Re-ingested bodies have the same support function on 100 directions"""
        rng = np.random.default_rng(6)
        bodies = [
            Polytope(rng.normal(size=(12, 3))),
            RotationBody(parse_body({"type": "rotation", "n": 3, "profile": [[1.2, 0.1], [0.3, 0.9]]}).profile, 3),
            StretchedCone(3, -0.04),
        ]
        for body in bodies:
            again = parse_body(dump_body(body))
            for _ in range(100):
                u = rng.normal(size=3)
                self.assertAlmostEqual(support_function(again, u), support_function(body, u), delta=1e-12)
