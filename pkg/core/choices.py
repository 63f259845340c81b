"""
Constants and choices for the lorval project.

This module contains the enumerations, choice lists and numerical constants
shared by the geometry, regularization and experiment apps.
"""

from enum import Enum
import math

# ============================================================================
# MINKOWSKI / GRASSMANNIAN CHOICES
# ============================================================================


class SubspaceOrbit(str, Enum):
    """Lorentz orbit of a linear subspace, read from the restricted form."""
    SPACE_LIKE = 'M_plus'
    MIXED_SIGNATURE = 'M_minus'
    DEGENERATE = 'M_zero'


class Sheet(str, Enum):
    """Unit pseudosphere of the Minkowski form."""
    H_PLUS = 'plus'     # de Sitter, Q = +1
    H_MINUS = 'minus'   # hyperbolic, Q = -1


# ============================================================================
# VALUATION CHOICES
# ============================================================================


class ValuationKind(str, Enum):
    """The two continuous invariant (n-1)-homogeneous valuations."""
    TIME_LIKE = 'T'
    SPACE_LIKE = 'S'


VALUATION_KIND_CHOICES = [
    (ValuationKind.TIME_LIKE.value, 'f_T (space-like normals, Q >= 0)'),
    (ValuationKind.SPACE_LIKE.value, 'f_S (time-like normals, Q <= 0)'),
]

# ============================================================================
# REGULARIZATION CHOICES
# ============================================================================


class Parity(str, Enum):
    """Support/parity selector of the regularized family |cos 2a|^lambda."""
    CONE_SYM = 'sym'
    CONE_ANTISYM = 'antisym'
    SPACE = 'S'
    TIME = 'T'


PARITY_CHOICES = [
    (Parity.CONE_SYM.value, 'Cone-symmetric (S + T)'),
    (Parity.CONE_ANTISYM.value, 'Cone-antisymmetric (S - T)'),
    (Parity.SPACE.value, 'Space-like support'),
    (Parity.TIME.value, 'Time-like support'),
]


class Side(str, Enum):
    """Half-line of a local coordinate, or sign of a stretch parameter."""
    PLUS = 'plus'
    MINUS = 'minus'


class NVariant(str, Enum):
    """Jet-subtracted quadrant integrands."""
    PLUS = 'plus'       # H(a) + H(pi/2 - a), even jets removed
    MINUS = 'minus'     # H(a) - H(pi/2 - a), odd jets removed
    SPACE = 'space'     # one-sided on [0, pi/4]
    TIME = 'time'       # one-sided on [pi/4, pi/2]


class VerdictMode(str, Enum):
    """Failure mode classification of a divergence sweep."""
    LOG_DIVERGENT = 'LogDivergent'
    ONE_SIDED_MISMATCH = 'OneSidedMismatch'
    BOUNDED_NONZERO_OBSTRUCTION = 'BoundedNonzeroObstruction'
    CONVERGENT = 'Convergent'


# ============================================================================
# NUMERICAL CONSTANTS
# ============================================================================

LIGHT_CONE_POINTS = (math.pi / 4, 3 * math.pi / 4, 5 * math.pi / 4, 7 * math.pi / 4)

FRAME_TOLERANCE = 1e-9
UNIT_TOLERANCE = 1e-10
DEPENDENCE_TOLERANCE = 1e-10
DEGENERACY_TOLERANCE = 1e-8
LIGHT_LIKE_TOLERANCE = 1e-10
POLE_WINDOW = 1e-9
MAX_SERIES_TERMS = 64
DEFAULT_JET_ORDER = 40
GAUSS_LEGENDRE_NODES = 64

# ============================================================================
# CLI EXIT CODES
# ============================================================================

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_NUMERICAL_FAILURE = 3
EXIT_USAGE = 64
