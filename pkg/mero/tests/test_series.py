"""
Tests for the (sin x / x)^lambda coefficients and the moments I_k, M_j.
"""

from fractions import Fraction
import math
from unittest import TestCase

import numpy as np
from scipy.integrate import quad

from core.exceptions import ValidationError
from mero.series import (
    c_coeffs,
    c_coeffs_derivative,
    c_polynomial,
    log_sinc_coefficients,
    moment_I,
    moment_M,
    pole_index,
)


class CoefficientTests(TestCase):
    """c_j(lambda)"""

    def test_log_sinc(self):
        """log(sin x / x) = -x^2/6 - x^4/180 - x^6/2835 - ..."""
        l = log_sinc_coefficients()
        self.assertEqual(l[0], 0)
        self.assertEqual(l[1], Fraction(-1, 6))
        self.assertEqual(l[2], Fraction(-1, 180))
        self.assertEqual(l[3], Fraction(-1, 2835))

    def test_first_coefficient(self):
        """c_1(lambda) = -lambda/6"""
        for lam in (1.0, -2.0, 3.5):
            c = c_coeffs(lam, 2)
            self.assertEqual(c[0], 1.0)
            self.assertAlmostEqual(c[1], -lam / 6, places=15)

    def test_cube(self):
        """c_2(3) = 13/120"""
        self.assertAlmostEqual(c_coeffs(3, 4)[2], 13 / 120, places=15)

    def test_zero_exponent(self):
        """c_j(0) = 0 for j >= 1"""
        c = c_coeffs(0.0)
        self.assertEqual(len(c), 65)
        self.assertTrue(all(v == 0 for v in c[1:]))

    def test_polynomial_degree(self):
        """c_j is a degree-j polynomial agreeing with the numeric recurrence"""
        for j in range(6):
            p = c_polynomial(j)
            self.assertEqual(p.degree(), j)
            for lam in (-2.5, 0.7, 4.0):
                self.assertAlmostEqual(p(lam), c_coeffs(lam, j)[j], delta=1e-14 * max(1.0, abs(p(lam))))

    def test_derivative(self):
        """dc_j/dlambda against the polynomial derivative"""
        for lam in (-3.0, 1.25):
            dc = c_coeffs_derivative(lam, 5)
            for j in range(6):
                self.assertAlmostEqual(dc[j], c_polynomial(j).deriv()(lam), places=13)

    def test_complex(self):
        """Complex lambda gives complex coefficients"""
        c = c_coeffs(1 + 2j, 3)
        self.assertAlmostEqual(c[1], -(1 + 2j) / 6, places=15)

    def test_too_many_terms(self):
        """J is capped at 64"""
        with self.assertRaises(ValidationError):
            c_coeffs(1.0, 65)


class MomentTests(TestCase):
    """I_k(lambda) = int_0^1 x^k sin^lambda x dx"""

    def test_zero_exponent(self):
        """I_k(0) = 1/(k+1)"""
        for k in range(6):
            value = moment_I(k, 0.0)
            self.assertFalse(value.is_pole)
            self.assertAlmostEqual(value.finite_part.real, 1 / (k + 1), delta=1e-14)

    def test_closed_form(self):
        """I_0(2) = 1/2 - sin(2)/4"""
        self.assertAlmostEqual(moment_I(0, 2.0).value.real, 0.5 - math.sin(2.0) / 4, places=13)

    def test_against_quadrature(self):
        """Random Re(lambda) > 0 and k <= 6"""
        rng = np.random.default_rng(7)
        for _ in range(20):
            lam = float(rng.uniform(0.1, 5.0))
            k = int(rng.integers(0, 7))
            expected = quad(lambda x: x ** k * math.sin(x) ** lam, 0.0, 1.0, epsabs=1e-14, epsrel=1e-13)[0]
            self.assertAlmostEqual(moment_I(k, lam).value.real, expected, delta=1e-10 * max(1.0, expected))

    def test_negative_regular(self):
        """Continuation below -1 matches the subtracted integral"""
        lam = -1.5
        # I_0(lam) = int_0^1 x^lam ((sin x / x)^lam - 1) dx + 1/(lam + 1)
        expected = quad(lambda x: x ** lam * np.expm1(lam * math.log(math.sin(x) / x)), 0.0, 1.0,
                        epsabs=1e-13)[0] + 1 / (lam + 1)
        self.assertAlmostEqual(moment_I(0, lam).value.real, expected, places=9)

    def test_pole(self):
        """Simple pole at -1 with the series residue c_0 = 1"""
        value = moment_I(0, -1.0)
        self.assertTrue(value.is_pole)
        self.assertEqual(value.pole_order, 1)
        self.assertAlmostEqual(value.residue.real, 1.0, places=15)

    def test_numeric_residue(self):
        """(lambda + 1) I_0(lambda) -> 1 as lambda -> -1"""
        for theta in np.linspace(0, 2 * math.pi, 5, endpoint=False):
            delta = 1e-6 * np.exp(1j * theta)
            value = moment_I(0, -1.0 + delta)
            self.assertFalse(value.is_pole)
            self.assertAlmostEqual(abs(delta * value.value - 1.0), 0.0, delta=1e-6)

    def test_finite_part(self):
        """Finite part is the symmetric limit around the pole"""
        lam0, delta = -3.0, 1e-4
        average = (moment_I(0, lam0 + delta).value + moment_I(0, lam0 - delta).value) / 2
        self.assertAlmostEqual(moment_I(0, lam0).finite_part.real, average.real, delta=1e-6)

    def test_pole_locations(self):
        """Poles of I_k sit at -(k + 2j + 1)"""
        self.assertEqual(pole_index(1, -2.0), 0)
        self.assertEqual(pole_index(1, -4.0), 1)
        self.assertEqual(pole_index(1, -3.0), -1)
        self.assertEqual(pole_index(0, -1.0 + 1e-6), -1)
        self.assertTrue(moment_I(1, -4.0).is_pole)
        self.assertFalse(moment_I(1, -3.0).is_pole)

    def test_residue_growth(self):
        """|(lambda - lambda_0) I_k(lambda)| tends to the residue"""
        lam0 = -5.0
        residue = moment_I(2, lam0).residue
        for delta in (1e-3, 1e-5):
            self.assertAlmostEqual(abs(delta * moment_I(2, lam0 + delta).value), abs(residue), delta=10 * delta)

    def test_cauchy_mean(self):
        """Center value is the average over a circle of 16 samples"""
        center, radius = 0.7, 0.1
        samples = [moment_I(3, center + radius * np.exp(2j * math.pi * i / 16)).value for i in range(16)]
        self.assertAlmostEqual(abs(np.mean(samples) - moment_I(3, center).value), 0.0, delta=1e-8)

    def test_bad_order(self):
        """Negative k is rejected"""
        with self.assertRaises(ValidationError):
            moment_I(-1, 1.0)

    def test_quarter_moment(self):
        """M_j over [0, pi/2]"""
        lam = 0.5
        expected = quad(lambda x: x ** 2 * math.sin(x) ** lam, 0.0, math.pi / 2, epsabs=1e-14)[0]
        self.assertAlmostEqual(moment_M(2, lam).value.real, expected, places=10)
