"""
Tests for Taylor jet arithmetic.
"""

import math
from unittest import TestCase

import numpy as np
from scipy.special import binom

from core.exceptions import ValidationError
from mero import jets
from mero.jets import TaylorJet


class JetBasicsTests(TestCase):
    """Construction and evaluation"""

    def test_polynomial_exact(self):
        """J_m reproduces its polynomial"""
        jet = TaylorJet(2.0, [1.0, 2.0, 3.0])
        self.assertEqual(jet(2.5), 2.75)
        self.assertEqual(jet.order, 2)
        np.testing.assert_allclose(jet.derivatives(), [1.0, 2.0, 6.0])

    def test_from_derivatives(self):
        """Derivatives are divided by factorials"""
        jet = TaylorJet.from_derivatives(0.0, [1.0, 1.0, 1.0, 1.0])
        np.testing.assert_allclose(jet.coefficients, [1.0, 1.0, 0.5, 1 / 6])

    def test_tail(self):
        """tail(x, start) sums the terms from ``start`` on"""
        jet = TaylorJet(0.0, [1.0, 1.0, 1.0, 1.0])
        self.assertAlmostEqual(jet.tail(0.5, 2), 0.25 + 0.125, places=15)
        self.assertEqual(jet.tail(0.5, 9), 0.0)

    def test_reflected_and_local(self):
        """Reflection flips odd terms; local rescales"""
        jet = TaylorJet(1.0, [1.0, 1.0, 1.0])
        np.testing.assert_allclose(jet.reflected().coefficients, [1.0, -1.0, 1.0])
        local = jet.local(0.5)
        self.assertEqual(local.center, 0.0)
        np.testing.assert_allclose(local.coefficients, [1.0, 0.5, 0.25])

    def test_integrate_and_derivative(self):
        """Integration raises the order by one"""
        jet = TaylorJet(0.0, [1.0, 2.0])
        integral = jet.integrate(3.0)
        np.testing.assert_allclose(integral.coefficients, [3.0, 1.0, 1.0])
        np.testing.assert_allclose(integral.derivative().coefficients, jet.coefficients)


class JetArithmeticTests(TestCase):
    """Products, quotients, powers and elementary functions"""

    def test_sin_cos(self):
        """Derivatives of sin cycle"""
        s = jets.sin(TaylorJet.variable(0.3, 10))
        expected = [math.sin(0.3), math.cos(0.3), -math.sin(0.3), -math.cos(0.3)] * 3
        np.testing.assert_allclose(s.derivatives(), expected[:11], atol=1e-10)

    def test_pythagoras(self):
        """sin^2 + cos^2 = 1 as a jet"""
        x = TaylorJet.variable(1.1, 20)
        one = jets.sin(x) * jets.sin(x) + jets.cos(x) * jets.cos(x)
        np.testing.assert_allclose(one.coefficients, [1.0] + [0.0] * 20, atol=1e-13)

    def test_geometric_series(self):
        """1/(1 - x) has all coefficients 1"""
        x = TaylorJet.variable(0.0, 12)
        np.testing.assert_allclose((1.0 - x).reciprocal().coefficients, np.ones(13), atol=1e-14)
        np.testing.assert_allclose((1.0 / (1.0 - x)).coefficients, np.ones(13), atol=1e-14)

    def test_binomial(self):
        """(1 + x)^p has binomial coefficients"""
        x = TaylorJet.variable(0.0, 8)
        for p in (0.5, -1.5, 3.0):
            np.testing.assert_allclose(((1.0 + x) ** p).coefficients, binom(p, np.arange(9)), atol=1e-13)

    def test_complex_power(self):
        """Complex exponents give complex jets"""
        x = TaylorJet.variable(0.0, 4)
        jet = (1.0 + x) ** (0.5 + 1j)
        self.assertTrue(np.iscomplexobj(jet.coefficients))
        self.assertAlmostEqual(jet.coefficients[1], 0.5 + 1j, places=14)

    def test_integer_power_at_zero(self):
        """x^3 of a vanishing jet"""
        x = TaylorJet.variable(0.0, 5)
        np.testing.assert_allclose((x ** 3).coefficients, [0, 0, 0, 1, 0, 0])

    def test_log_exp(self):
        """log(exp(f)) = f"""
        f = jets.sin(TaylorJet.variable(0.4, 15)) + 2.0
        np.testing.assert_allclose(jets.log(jets.exp(f)).coefficients, f.coefficients, atol=1e-12)

    def test_sqrt_tan(self):
        """sqrt(f)^2 = f and tan = sin/cos"""
        x = TaylorJet.variable(0.2, 10)
        f = 2.0 + x * x
        np.testing.assert_allclose((jets.sqrt(f) * jets.sqrt(f)).coefficients, f.coefficients, atol=1e-13)
        t = jets.tan(x)
        self.assertAlmostEqual(t.coefficients[1], 1 / math.cos(0.2) ** 2, places=13)

    def test_arctan2(self):
        """Angle of (cos a, sin a) is a"""
        a = TaylorJet.variable(0.7, 12)
        angle = jets.arctan2(jets.sin(a), jets.cos(a))
        np.testing.assert_allclose(angle.coefficients, a.coefficients, atol=1e-13)

    def test_compose(self):
        """exp composed with sin equals exp(sin x)"""
        x = TaylorJet.variable(0.0, 10)
        direct = jets.exp(jets.sin(x))
        composed = jets.exp(x).compose(jets.sin(x))
        np.testing.assert_allclose(composed.coefficients, direct.coefficients, atol=1e-13)

    def test_same_expression_on_arrays(self):
        """Module functions dispatch to numpy for arrays"""
        def expr(a):
            return jets.cos(a) ** 2 * jets.sin(a) + jets.exp(a)

        grid = np.linspace(0.1, 1.0, 5)
        values = expr(grid)
        np.testing.assert_allclose(values, np.cos(grid) ** 2 * np.sin(grid) + np.exp(grid))
        self.assertAlmostEqual(expr(TaylorJet.variable(0.5, 3)).value, expr(0.5), places=14)


class JetErrorTests(TestCase):
    """Invalid operations"""

    def test_center_mismatch(self):
        """Jets at different centers do not combine"""
        with self.assertRaises(ValidationError):
            TaylorJet.variable(0.0, 3) + TaylorJet.variable(1.0, 3)

    def test_not_invertible(self):
        """A jet vanishing at its center has no reciprocal"""
        with self.assertRaises(ValidationError):
            TaylorJet.variable(0.0, 3).reciprocal()

    def test_fractional_power_at_zero(self):
        """Fractional powers need a nonzero value"""
        with self.assertRaises(ValidationError):
            TaylorJet.variable(0.0, 3) ** 0.5

    def test_compose_mismatch(self):
        """Inner value must hit the outer center"""
        with self.assertRaises(ValidationError):
            jets.exp(TaylorJet.variable(0.0, 3)).compose(TaylorJet.variable(1.0, 3))

    def test_empty(self):
        """Empty coefficient vectors are rejected"""
        with self.assertRaises(ValidationError):
            TaylorJet(0.0, [])
