"""
Error hierarchy shared by every lorval app.

Each error carries a human message, a short machine ``code`` such as
``'bad_body'`` and a ``details`` mapping. The class decides the process
exit status the command line reports for it.
"""

from typing import Any, Dict, Optional

from core.choices import EXIT_INPUT_ERROR, EXIT_NUMERICAL_FAILURE


class LorvalBaseException(Exception):
    exit_code = EXIT_INPUT_ERROR

    def __init__(self, message: str, code: Optional[str] = None, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.code = code
        self.details = dict(details) if details else {}

    @property
    def error_code(self) -> str:
        return self.code or type(self).__name__

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready error report."""
        return {'error': self.message, 'error_code': self.error_code, 'details': self.details}


class ValidationError(LorvalBaseException):
    """Wrong dimension, non-unit vector, short jet or an unsupported body."""


class PreconditionError(LorvalBaseException):
    """Data handed to an operation violates what the operation assumes."""


class DegenerateSubspaceError(LorvalBaseException):
    """Q restricted to the subspace is degenerate."""


class NumericalError(LorvalBaseException):
    """Quadrature, extrapolation or a closed form broke down."""

    exit_code = EXIT_NUMERICAL_FAILURE


class ConfigurationError(LorvalBaseException):
    pass
