"""
Tests for exceptions, logging and quadrature helpers.
"""

import logging
import math
from unittest import TestCase

import numpy as np

from core.choices import EXIT_INPUT_ERROR, EXIT_NUMERICAL_FAILURE
from core.exceptions import LorvalBaseException, NumericalError, ValidationError
from core.utils.logger import ContextFormatter, StructuredLogger, default_logging_config, setup_logging
from core.utils.quadrature import QuadratureConfig, adaptive_quad, composite_gauss_legendre, gauss_legendre
from lorval import settings


class ExceptionTests(TestCase):
    """LorvalBaseException payload"""

    def test_fields(self):
        """message, code and details are kept"""
        exc = ValidationError("bad input", code='bad_k', details={'k': 0})
        self.assertIsInstance(exc, LorvalBaseException)
        self.assertEqual(str(exc), "bad input")
        self.assertEqual(exc.code, 'bad_k')
        self.assertEqual(exc.details, {'k': 0})

    def test_default_details(self):
        """details default to an empty dict"""
        self.assertEqual(NumericalError("x").details, {})

    def test_report_and_exit_code(self):
        """to_dict falls back to the class name; numerical errors exit with 3"""
        self.assertEqual(NumericalError("x").to_dict(), {'error': "x", 'error_code': 'NumericalError', 'details': {}})
        self.assertEqual(NumericalError("x").exit_code, EXIT_NUMERICAL_FAILURE)
        self.assertEqual(ValidationError("x", code='bad_k').exit_code, EXIT_INPUT_ERROR)


class _Capture(logging.Handler):
    def __init__(self):
        super().__init__()
        self.records = []

    def emit(self, record):
        self.records.append(record)


class LoggingTests(TestCase):
    """setup_logging and StructuredLogger"""

    def test_default_config(self):
        """App loggers get the requested level"""
        config = default_logging_config('WARNING')
        self.assertEqual(config['loggers']['mero']['level'], 'WARNING')
        setup_logging(config)
        self.assertEqual(logging.getLogger('mero').level, logging.WARNING)
        setup_logging(settings.LOGGING)

    def test_structured_extra(self):
        """Keyword context is attached to the record; None values are dropped"""
        logger = StructuredLogger('core.tests.structured')
        capture = _Capture()
        logger.logger.addHandler(capture)
        logger.logger.setLevel(logging.DEBUG)
        try:
            logger.info("Evaluated", n=3, value=1.5, skipped=None)
        finally:
            logger.logger.removeHandler(capture)
        record = capture.records[-1]
        self.assertEqual(record.getMessage(), "Evaluated")
        self.assertEqual(record.n, 3)
        self.assertFalse(hasattr(record, 'skipped'))

    def test_bind_and_format(self):
        """Bound context reaches the record and the formatter prints it sorted"""
        logger = StructuredLogger('core.tests.bound').bind(subcommand='sweep')
        capture = _Capture()
        logger.logger.addHandler(capture)
        logger.logger.setLevel(logging.DEBUG)
        try:
            logger.warning("Run failed", exit_code=2)
        finally:
            logger.logger.removeHandler(capture)
        text = ContextFormatter('{message}', style='{').format(capture.records[-1])
        self.assertEqual(text, "Run failed [exit_code=2 subcommand='sweep']")


class QuadratureTests(TestCase):
    """adaptive_quad and Gauss-Legendre rules"""

    def test_smooth(self):
        """int_0^pi sin = 2"""
        self.assertAlmostEqual(adaptive_quad(math.sin, 0.0, math.pi), 2.0, places=12)

    def test_complex(self):
        """Real and imaginary parts are integrated separately"""
        value = adaptive_quad(lambda x: complex(x, x * x), 0.0, 1.0, complex_valued=True)
        self.assertAlmostEqual(value.real, 0.5, places=12)
        self.assertAlmostEqual(value.imag, 1.0 / 3.0, places=12)

    def test_break_points(self):
        """Kinks passed as break points"""
        value = adaptive_quad(lambda x: abs(x - 0.3), 0.0, 1.0, points=[0.3])
        self.assertAlmostEqual(value, 0.045 + 0.245, places=12)

    def test_divergent(self):
        """A non-integrable singularity is a numerical failure"""
        with self.assertRaises(NumericalError):
            adaptive_quad(lambda x: 1.0 / x ** 2 if x > 0 else 0.0, 0.0, 1.0)

    def test_divergent_upper_end(self):
        """Non-integrable powers are caught at either end point"""
        with self.assertRaises(NumericalError):
            adaptive_quad(lambda x: (1.0 - x) ** -1.5 if x < 1 else 0.0, 0.0, 1.0)
        with self.assertRaises(NumericalError):
            adaptive_quad(lambda x: x ** -1.5 if x > 0 else 0.0, 0.0, 2.0, points=[1.0])

    def test_integrable_singularity(self):
        """x^{-1/2} keeps its value 2"""
        value = adaptive_quad(lambda x: x ** -0.5 if x > 0 else 0.0, 0.0, 1.0)
        self.assertAlmostEqual(value, 2.0, delta=1e-9)

    def test_gauss_legendre(self):
        """64 nodes integrate polynomials of degree 127 exactly"""
        nodes, weights = gauss_legendre(-1.0, 2.0)
        self.assertAlmostEqual(float(np.dot(weights, nodes ** 6)), (2.0 ** 7 + 1.0) / 7.0, places=10)
        total = composite_gauss_legendre(np.abs, [-1.0, 0.0, 1.0])
        self.assertAlmostEqual(total, 1.0, places=14)

    def test_config(self):
        """Settings provide valid tolerances"""
        self.assertEqual(QuadratureConfig.from_env().validate(), (True, None))
        self.assertFalse(QuadratureConfig(epsabs=0.0).validate()[0])
        self.assertFalse(QuadratureConfig(limit=10).validate()[0])


class SettingsTests(TestCase):
    """Environment-selected settings"""

    def test_defaults(self):
        """Numerical defaults are present"""
        self.assertGreaterEqual(settings.THREADS, 1)
        self.assertEqual(settings.JET_ORDER, 40)
        self.assertLess(settings.SWEEP_EPS_MIN, settings.SWEEP_EPS_MAX)
        self.assertIn('experiments', settings.LOGGING['loggers'])
