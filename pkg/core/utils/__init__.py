"""
Core utilities for lorval.

Logging helpers live in ``core.utils.logger`` and the shared quadrature
routines in ``core.utils.quadrature``.
"""

from core.utils.logger import StructuredLogger, get_logger, setup_logging

__all__ = ['StructuredLogger', 'get_logger', 'setup_logging']
