"""
Tests for f_T and f_S.
"""

import itertools
import math
from unittest import TestCase

import numpy as np
from scipy.integrate import quad

from core.choices import Sheet, ValuationKind
from core.exceptions import ValidationError
from bodies.models import Polytope, Profile2D, RotationBody, StretchedCone
from bodies.services import surface_area_measure
from minkowski.services import boost
from valuations.models import InvariantValuation
from valuations.services import evaluate, mixed_volume_form, support_of_hyperboloid

F_T = InvariantValuation(ValuationKind.TIME_LIKE, 3)
F_S = InvariantValuation(ValuationKind.SPACE_LIKE, 3)


def cube():
    return Polytope(np.array(list(itertools.product([-1.0, 1.0], repeat=3))))


def icosphere(subdivisions=3):
    """Vertices of a subdivided icosahedron on the unit sphere (1280 facets at 3)."""
    phi = (1 + math.sqrt(5)) / 2
    verts = [(-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
             (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
             (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1)]
    verts = [np.array(v, dtype=float) / np.linalg.norm(v) for v in verts]
    faces = [(0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
             (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
             (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
             (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1)]
    for _ in range(subdivisions):
        cache = {}

        def midpoint(i, j):
            key = (min(i, j), max(i, j))
            if key not in cache:
                m = verts[i] + verts[j]
                verts.append(m / np.linalg.norm(m))
                cache[key] = len(verts) - 1
            return cache[key]

        new_faces = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new_faces.extend([(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)])
        faces = new_faces
    return Polytope(np.array(verts)), len(faces)


def random_polytope(rng, points=15):
    return Polytope(rng.normal(size=(points, 3)))


def cut(polytope, normal, offset):
    """Split a polytope by <x, normal> = offset into two pieces and their intersection."""
    v = polytope.vertices
    side = v @ normal - offset
    crossings = []
    for i, j in itertools.combinations(range(len(v)), 2):
        if side[i] * side[j] < 0:
            t = side[i] / (side[i] - side[j])
            crossings.append(v[i] + t * (v[j] - v[i]))
    crossings = np.array(crossings)
    upper = Polytope(np.vstack([v[side >= 0], crossings]))
    lower = Polytope(np.vstack([v[side <= 0], crossings]))
    return upper, lower, Polytope(crossings)


class EvaluateTests(TestCase):
    """Facet-sum evaluation"""

    def test_cube_time_like(self):
        """f_T(cube) = 16"""
        self.assertAlmostEqual(evaluate(F_T, cube()), 16.0, places=12)

    def test_cube_space_like(self):
        """f_S(cube) = 8"""
        self.assertAlmostEqual(evaluate(F_S, cube()), 8.0, places=12)

    def test_double_cone_vanishes(self):
        """All normals of C^3 are light-like"""
        for valuation in (F_T, F_S):
            self.assertAlmostEqual(evaluate(valuation, StretchedCone(3)), 0.0, places=12)

    def test_nonnegative(self):
        """Values are nonnegative"""
        rng = np.random.default_rng(0)
        for _ in range(10):
            body = random_polytope(rng)
            self.assertGreaterEqual(evaluate(F_T, body), 0.0)
            self.assertGreaterEqual(evaluate(F_S, body), 0.0)

    def test_dimension_mismatch(self):
        """Body and valuation must share n"""
        with self.assertRaises(ValidationError):
            evaluate(InvariantValuation(ValuationKind.TIME_LIKE, 4), cube())

    def test_high_dimensional_polytope(self):
        """Polytopes beyond n = 3 are unsupported"""
        with self.assertRaises(ValidationError):
            evaluate(InvariantValuation(ValuationKind.TIME_LIKE, 4), Polytope(np.eye(4)))

    def test_cylinder(self):
        """Rotation body with square profile in n = 4"""
        body = RotationBody(Profile2D([[1.0, 1.0]]), 4)
        # lateral area |S^2| * 2 has normals at elevation 0; the two caps of volume |B^3| are time-like
        self.assertAlmostEqual(evaluate(InvariantValuation(ValuationKind.TIME_LIKE, 4), body), 8 * math.pi, places=10)
        self.assertAlmostEqual(evaluate(InvariantValuation(ValuationKind.SPACE_LIKE, 4), body),
                               2 * 4 * math.pi / 3, places=10)


class InvarianceTests(TestCase):
    """Homogeneity, evenness, Lorentz invariance and additivity"""

    def test_homogeneity(self):
        """f(t K) = t^{n-1} f(K)"""
        rng = np.random.default_rng(1)
        body = random_polytope(rng)
        for valuation in (F_T, F_S):
            base = evaluate(valuation, body)
            for t in (0.5, 2.0, 3.0):
                self.assertAlmostEqual(evaluate(valuation, body.scaled(t)) / (t ** 2 * base), 1.0, delta=1e-10)

    def test_even(self):
        """f(-K) = f(K)"""
        rng = np.random.default_rng(2)
        body = random_polytope(rng)
        for valuation in (F_T, F_S):
            self.assertAlmostEqual(evaluate(valuation, body.scaled(-1.0)), evaluate(valuation, body), places=12)

    def test_lorentz_invariance(self):
        """f(g K) = f(K) over 50 boosts and 20 polytopes"""
        rng = np.random.default_rng(3)
        for _ in range(20):
            body = random_polytope(rng, points=10)
            values = {v.kind: evaluate(v, body) for v in (F_T, F_S)}
            for _ in range(50):
                g = boost(rng.uniform(-1.0, 1.0), int(rng.integers(1, 3)), 3)
                moved = body.transformed(g)
                for valuation in (F_T, F_S):
                    base = values[valuation.kind]
                    self.assertLessEqual(abs(evaluate(valuation, moved) - base), 1e-8 * max(base, 1.0))

    def test_additivity(self):
        """f(K1) + f(K2) - f(K1 n K2) = f(K) for hyperplane cuts"""
        rng = np.random.default_rng(4)
        for _ in range(10):
            body = random_polytope(rng, points=12)
            normal = rng.normal(size=3)
            normal /= np.linalg.norm(normal)
            offset = float(body.vertices.mean(axis=0) @ normal)
            upper, lower, middle = cut(body, normal, offset)
            for valuation in (F_T, F_S):
                total = evaluate(valuation, upper) + evaluate(valuation, lower) - evaluate(valuation, middle)
                self.assertAlmostEqual(total, evaluate(valuation, body), delta=1e-9 * max(1.0, total))


class MixedVolumeTests(TestCase):
    """V(K[n-1], H[1]) form"""

    def test_support_values(self):
        """h_{H+}(e_1) = 1, h_{H+} vanishes at pi/3, h_{H-}(e_n) = 1"""
        self.assertAlmostEqual(support_of_hyperboloid(Sheet.H_PLUS, [1, 0, 0]), 1.0, places=15)
        alpha = math.pi / 3
        self.assertEqual(support_of_hyperboloid(Sheet.H_PLUS, [math.cos(alpha), 0, math.sin(alpha)]), 0.0)
        self.assertAlmostEqual(support_of_hyperboloid(Sheet.H_MINUS, [0, 0, 1]), 1.0, places=15)

    def test_support_non_unit(self):
        """Non-unit directions are rejected"""
        with self.assertRaises(ValidationError):
            support_of_hyperboloid(Sheet.H_PLUS, [2, 0, 0])

    def test_cube(self):
        """Cube gives 16 for f_T"""
        self.assertAlmostEqual(mixed_volume_form(F_T, cube()), 16.0, places=12)

    def test_agrees_with_evaluate(self):
        """Both forms agree on random polytopes and rotation bodies"""
        rng = np.random.default_rng(5)
        bodies = [random_polytope(rng) for _ in range(10)]
        for body in bodies:
            for valuation in (F_T, F_S):
                self.assertLessEqual(abs(mixed_volume_form(valuation, body) - evaluate(valuation, body)), 1e-10)
        rotation = RotationBody(Profile2D([[1.0, 0.3], [0.6, 0.9], [0.2, 1.2]]), 5)
        for kind in ValuationKind:
            valuation = InvariantValuation(kind, 5)
            self.assertAlmostEqual(mixed_volume_form(valuation, rotation), evaluate(valuation, rotation), places=10)

    def test_icosphere(self):
        """Fine polytopal ball against the smooth elevation integral, per unit area"""
        ball, facets = icosphere(3)
        self.assertEqual(facets, 1280)
        smooth = 2 * math.pi * quad(lambda a: math.sqrt(math.cos(2 * a)) * math.cos(a), -math.pi / 4, math.pi / 4)[0]
        area = surface_area_measure(ball).total
        ratio = (mixed_volume_form(F_T, ball) / area) / (smooth / (4 * math.pi))
        self.assertAlmostEqual(ratio, 1.0, delta=2e-2)
