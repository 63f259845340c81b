"""
Boundary length of geodesic polygons on the unit pseudospheres of R^3,
compared with the valuation of the cone over the polygon.

Each boundary arc from p to q spans a flat sector {t x : 0 <= t <= 1} in the
plane through p, q and the origin. That sector is a face of the cone with
both of its normals, so it contributes 2 * area * weight(plane). Arcs on the
de Sitter sheet H+ lie in space-like planes, whose normals are time-like and
are seen by f_S; arcs on the hyperbolic sheet H- lie in mixed planes, seen
by f_T.
"""

import math
from typing import List, Tuple

import numpy as np

from core.choices import Sheet, SubspaceOrbit, ValuationKind
from core.exceptions import PreconditionError, ValidationError
from core.utils.logger import StructuredLogger
from core.utils.quadrature import adaptive_quad
from bodies.models import SurfaceMeasure
from minkowski.services import boost, classify_subspace, q_form
from valuations.models import HyperboloidPatch, InvariantValuation
from valuations.services import evaluate_measure

logger = StructuredLogger(__name__)

COINCIDENT_TOLERANCE = 1e-12


def _geodesic(sheet: Sheet, p: np.ndarray, q: np.ndarray):
    """Arc parameter length and unit-speed parametrization x(s), s in [0, length]."""
    if sheet == Sheet.H_PLUS:
        c = q_form(p, q)
        if c > 1.0 + 1e-12:
            raise PreconditionError("Arc is not space-like", code='timelike_boundary',
                                    details={'Q(p, q)': c})
        length = math.acos(min(1.0, max(-1.0, c)))
        w = (q - c * p) / math.sin(length)
        return length, lambda s: math.cos(s) * p + math.sin(s) * w, lambda s: -math.sin(s) * p + math.cos(s) * w
    c = -q_form(p, q)
    if c < 1.0 - 1e-12:
        raise ValidationError("Points are not on one hyperbolic sheet", code='off_sheet',
                              details={'-Q(p, q)': c})
    length = math.acosh(max(1.0, c))
    w = (q - c * p) / math.sinh(length)
    return length, lambda s: math.cosh(s) * p + math.sinh(s) * w, lambda s: math.sinh(s) * p + math.cosh(s) * w


def arc_length(sheet: Sheet, p: np.ndarray, q: np.ndarray) -> float:
    """Induced length of the geodesic arc: arccos Q(p, q) on H+, arccosh(-Q(p, q)) on H-."""
    if np.linalg.norm(p - q) <= COINCIDENT_TOLERANCE:
        return 0.0
    return _geodesic(sheet, p, q)[0]


def sector_area(sheet: Sheet, p: np.ndarray, q: np.ndarray) -> float:
    """Euclidean area of the flat sector over the arc, (1/2) int |x x x'| ds."""
    if np.linalg.norm(p - q) <= COINCIDENT_TOLERANCE:
        return 0.0
    length, x, dx = _geodesic(sheet, p, q)
    return 0.5 * adaptive_quad(lambda s: float(np.linalg.norm(np.cross(x(s), dx(s)))), 0.0, length)


def cone_measure(patch: HyperboloidPatch) -> SurfaceMeasure:
    """Flat faces of the cone over the patch, each sector with both normals."""
    normals: List[np.ndarray] = []
    masses: List[float] = []
    for p, q in patch.edges():
        if np.linalg.norm(p - q) <= COINCIDENT_TOLERANCE:
            continue
        orbit = classify_subspace(np.array([p, q]))
        if patch.sheet == Sheet.H_PLUS and orbit != SubspaceOrbit.SPACE_LIKE:
            raise PreconditionError("de Sitter patches need space-like boundary", code='timelike_boundary',
                                    details={'orbit': orbit.value})
        normal = np.cross(p, q)
        normal /= np.linalg.norm(normal)
        area = sector_area(patch.sheet, p, q)
        normals.extend([normal, -normal])
        masses.extend([area, area])
    if not normals:
        return SurfaceMeasure(np.zeros((0, 3)), np.zeros(0))
    return SurfaceMeasure(np.array(normals), np.array(masses))


def cone_area_identity(sheet: Sheet, patch: HyperboloidPatch) -> Tuple[float, float]:
    """
    (boundary length of the patch, valuation of the cone over it).

    The valuation is f_S on H+ and f_T on H-, evaluated by the facet formula.
    """
    sheet = Sheet(sheet)
    if patch.sheet != sheet:
        raise ValidationError("Patch lives on the other sheet", code='sheet_mismatch',
                              details={'sheet': sheet.value, 'patch_sheet': patch.sheet.value})
    measure = cone_measure(patch)
    lhs = float(sum(arc_length(sheet, p, q) for p, q in patch.edges()))
    kind = ValuationKind.SPACE_LIKE if sheet == Sheet.H_PLUS else ValuationKind.TIME_LIKE
    rhs = evaluate_measure(InvariantValuation(kind, 3), measure) if len(measure) else 0.0
    logger.debug("Cone area identity", sheet=sheet.value, lhs=lhs, rhs=rhs)
    return lhs, rhs


def random_patch(sheet: Sheet, rng: np.random.Generator, vertices: int = 5,
                 boost_range: float = 1.0, tilt: float = 0.1) -> HyperboloidPatch:
    """
    Random geodesic polygon, moved by a random boost.

    On H+ the vertices stay near the waist circle (|u| <= tilt) with at least five
    vertices, which keeps every boundary plane space-like.
    """
    sheet = Sheet(sheet)
    gaps = rng.uniform(0.5, 1.0, size=vertices)
    theta = np.cumsum(gaps / gaps.sum() * 2 * math.pi)
    if sheet == Sheet.H_PLUS:
        if vertices < 5:
            raise ValidationError("de Sitter patches need at least 5 vertices", code='bad_patch')
        u = rng.uniform(-tilt, tilt, size=vertices)
        points = np.column_stack([np.cos(theta) * np.cosh(u), np.sin(theta) * np.cosh(u), np.sinh(u)])
    else:
        r = rng.uniform(0.2, 1.5, size=vertices)
        points = np.column_stack([np.sinh(r) * np.cos(theta), np.sinh(r) * np.sin(theta), np.cosh(r)])
    g = boost(rng.uniform(-boost_range, boost_range), int(rng.integers(1, 3)), 3)
    return HyperboloidPatch(sheet, points @ g.T)


def circle_patch(psi: float, pieces: int = 4) -> HyperboloidPatch:
    """
    The closed geodesic cut from H+ by the space-like plane tilted by psi
    (|psi| < pi/4), split into ``pieces`` arcs.
    """
    if not abs(psi) < math.pi / 4:
        raise ValidationError("Tilt must satisfy |psi| < pi/4", code='bad_tilt', details={'psi': psi})
    theta = math.atanh(math.tan(psi))
    t = 2 * math.pi * np.arange(pieces) / pieces
    flat = np.column_stack([np.cos(t), np.sin(t), np.zeros(pieces)])
    return HyperboloidPatch(Sheet.H_PLUS, flat @ boost(theta, 1, 3).T)
