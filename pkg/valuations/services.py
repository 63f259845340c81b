"""
Evaluation of the invariant valuations f_T and f_S.

f(K) = sum over facet normals in the valuation's region of
facet area * sqrt|sin 2 eps(normal)|, and on rotation bodies the same sum
over the zonal surface measure. ``mixed_volume_form`` computes the same value
as V(K[n-1], H[1]) with the support function of the unit pseudosphere.
"""

import math
from typing import Sequence, Union

import numpy as np

from core.choices import LIGHT_LIKE_TOLERANCE, Sheet, ValuationKind
from core.exceptions import ValidationError
from core.utils.logger import StructuredLogger
from core.utils.quadrature import adaptive_quad
from bodies.models import ConvexBody, Polytope, RotationBody, StretchedCone, SurfaceMeasure, ZonalMeasure
from bodies.services import surface_area_measure, zonal_surface_measure
from grassmann.services import elevation, light_cone_angle
from minkowski.services import q_norm_sq
from valuations.models import InvariantValuation

logger = StructuredLogger(__name__)

MAX_ZONAL_DIMENSION = 8


def light_weight(alpha) -> np.ndarray:
    """sqrt|cos 2 alpha|, snapped to zero on normals within tolerance of the light cone."""
    c = np.abs(np.cos(2.0 * np.asarray(alpha, dtype=float)))
    return np.where(c < LIGHT_LIKE_TOLERANCE, 0.0, np.sqrt(c))


def _check_body(valuation: InvariantValuation, body: ConvexBody) -> None:
    if body.n != valuation.n:
        raise ValidationError("Body and valuation dimensions differ", code='dimension_mismatch',
                              details={'body_n': body.n, 'valuation_n': valuation.n})
    if isinstance(body, Polytope):
        if body.n > 3:
            raise ValidationError("Polytopes are supported for n <= 3", code='unsupported_dimension',
                                  details={'n': body.n})
    elif isinstance(body, (RotationBody, StretchedCone)):
        if body.n > MAX_ZONAL_DIMENSION:
            raise ValidationError("Rotation bodies are supported for n <= 8", code='unsupported_dimension',
                                  details={'n': body.n})
    else:
        raise ValidationError("Unsupported body type", code='unsupported_body',
                              details={'type': type(body).__name__})


def _zonal_measure(body: Union[RotationBody, StretchedCone]) -> ZonalMeasure:
    return zonal_surface_measure(body, body.n - 1)


def evaluate_measure(valuation: InvariantValuation, measure: SurfaceMeasure) -> float:
    """Facet sum of area * sqrt|sin 2 eps| over normals in the region."""
    total = 0.0
    for normal, mass in zip(measure.normals, measure.masses):
        if not valuation.in_region(elevation(normal)):
            continue
        light_cone_angle(normal)  # rejects non-unit normals
        total += float(mass) * float(light_weight(elevation(normal)))
    return total


def evaluate_zonal(valuation: InvariantValuation, measure: ZonalMeasure) -> float:
    """Same sum against a zonal surface measure in elevation coordinates."""
    betas, masses = measure.elevations, measure.masses
    total = 0.0
    if measure.atoms:
        keep = valuation.in_region(betas)
        total += float(np.dot(masses[keep], light_weight(betas[keep])))
    if measure.density is not None:
        lo, hi = (-math.pi / 4, math.pi / 4) if valuation.kind == ValuationKind.TIME_LIKE else (math.pi / 4, math.pi / 2)

        def integrand(b):
            return float(measure.density(np.array([b]))[0]) * math.sqrt(abs(math.cos(2.0 * b)))

        total += adaptive_quad(integrand, lo, hi)
        if valuation.kind == ValuationKind.SPACE_LIKE:
            total += adaptive_quad(integrand, -math.pi / 2, -math.pi / 4)
    return total


def evaluate(valuation: InvariantValuation, body: ConvexBody) -> float:
    """f_T(K) or f_S(K); nonnegative."""
    _check_body(valuation, body)
    if isinstance(body, Polytope):
        value = evaluate_measure(valuation, surface_area_measure(body))
    else:
        value = evaluate_zonal(valuation, _zonal_measure(body))
    logger.debug("Valuation evaluated", kind=valuation.kind.value, n=valuation.n, value=value)
    return value


def support_of_hyperboloid(sheet: Sheet, omega: Sequence[float]) -> float:
    """
    h_{H+}(omega) = sqrt|cos 2 alpha| for |alpha| <= pi/4 and 0 otherwise;
    h_{H-} is supported on |alpha| >= pi/4.
    """
    omega = np.asarray(omega, dtype=float)
    light_cone_angle(omega)  # rejects non-unit input
    alpha = abs(elevation(omega))
    inside = alpha <= math.pi / 4 if Sheet(sheet) == Sheet.H_PLUS else alpha >= math.pi / 4
    return math.sqrt(abs(math.cos(2.0 * alpha))) if inside else 0.0


def _pseudosphere_support(sheet: Sheet, omega: np.ndarray) -> float:
    """Same support through the form: sqrt(max(+-Q(omega, omega), 0))."""
    q = q_norm_sq(omega)
    return math.sqrt(max(q if sheet == Sheet.H_PLUS else -q, 0.0))


def mixed_volume_form(valuation: InvariantValuation, body: ConvexBody) -> float:
    """V(K[n-1], H[1]) = int h_H d sigma_K, with H = H+ for f_T and H- for f_S."""
    _check_body(valuation, body)
    sheet = Sheet.H_PLUS if valuation.kind == ValuationKind.TIME_LIKE else Sheet.H_MINUS
    if isinstance(body, Polytope):
        measure = surface_area_measure(body)
        return float(sum(m * _pseudosphere_support(sheet, v) for v, m in zip(measure.normals, measure.masses)))
    zonal = _zonal_measure(body)
    total = 0.0
    for beta, mass in zonal.atoms:
        omega = np.zeros(body.n)
        omega[0], omega[-1] = math.cos(beta), math.sin(beta)
        total += mass * _pseudosphere_support(sheet, omega)
    return total
