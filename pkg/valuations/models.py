"""
Value types for the invariant valuations f_T, f_S and hyperboloid patches.
"""

from dataclasses import dataclass, field
import math
from typing import Iterator, Tuple

import numpy as np

from core.choices import Sheet, ValuationKind
from core.exceptions import ValidationError

SHEET_TOLERANCE = 1e-9


@dataclass(frozen=True)
class InvariantValuation:
    """
    One of the two continuous Lorentz-invariant, even, (n-1)-homogeneous
    valuations on convex bodies in R^n.

    f_T integrates over normals with Q >= 0 (|alpha| <= pi/4), f_S over
    normals with Q <= 0 (|alpha| >= pi/4).
    """
    kind: ValuationKind
    n: int

    def __post_init__(self):
        object.__setattr__(self, 'kind', ValuationKind(self.kind))
        if self.n < 2:
            raise ValidationError("Valuations need n >= 2", code='bad_dimension', details={'n': self.n})

    def in_region(self, alpha) -> np.ndarray:
        """Mask of elevations in this valuation's normal region."""
        a = np.abs(np.asarray(alpha, dtype=float))
        if self.kind == ValuationKind.TIME_LIKE:
            return a <= math.pi / 4
        return a >= math.pi / 4

    @property
    def degree(self) -> int:
        return self.n - 1


@dataclass(frozen=True)
class HyperboloidPatch:
    """
    Geodesic polygon on a unit pseudosphere of R^3.

    ``vertices`` is a cyclic (m, 3) array of points with Q(x, x) = +1 (de
    Sitter) or -1 (hyperbolic, upper sheet). Consecutive vertices are joined
    by the geodesic cut out by the plane through them and the origin.
    """
    sheet: Sheet
    vertices: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, 'sheet', Sheet(self.sheet))
        arr = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        if arr.shape[1] != 3:
            raise ValidationError("Hyperboloid patches are supported in R^3 only", code='bad_dimension',
                                  details={'shape': arr.shape})
        if arr.shape[0] < 1:
            raise ValidationError("A patch needs at least one vertex", code='empty_patch')
        q = arr[:, 0] ** 2 + arr[:, 1] ** 2 - arr[:, 2] ** 2
        target = 1.0 if self.sheet == Sheet.H_PLUS else -1.0
        if np.max(np.abs(q - target)) > SHEET_TOLERANCE * max(1.0, float(np.max(np.abs(arr))) ** 2):
            raise ValidationError("Patch vertices are not on the sheet", code='off_sheet',
                                  details={'sheet': self.sheet.value, 'max_deviation': float(np.max(np.abs(q - target)))})
        if self.sheet == Sheet.H_MINUS and np.any(arr[:, 2] <= 0):
            raise ValidationError("Hyperbolic patches must lie on the upper sheet", code='off_sheet')
        object.__setattr__(self, 'vertices', arr)

    @property
    def q_value(self) -> float:
        return 1.0 if self.sheet == Sheet.H_PLUS else -1.0

    def edges(self) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
        """Consecutive vertex pairs, closing the polygon."""
        m = len(self.vertices)
        for i in range(m):
            yield self.vertices[i], self.vertices[(i + 1) % m]
