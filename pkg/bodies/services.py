"""
Support functions, surface area measures and k-support functions.

Facet enumeration is done for polytopes in R^2 and R^3 only. Bodies in higher
dimension must be rotation bodies, whose measures and k-support functions
reduce to the 2D profile.
"""

import math
from typing import Dict, List, Sequence, Union

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from core.exceptions import ValidationError
from core.utils.logger import StructuredLogger
from bodies.models import (
    ConvexBody,
    Polytope,
    Profile2D,
    RotationBody,
    StretchedCone,
    SurfaceMeasure,
    ZonalMeasure,
)
from zonal.kernels import a_k, kernel, sphere_area, w_tail, w_tail_complement

logger = StructuredLogger(__name__)

NORMAL_MERGE_TOLERANCE = 1e-12
ELEVATION_DECIMALS = 12


# ============================================================================
# SUPPORT FUNCTIONS
# ============================================================================

def support_function(body: ConvexBody, u: Sequence[float]) -> float:
    """h_K(u) = max over the body of <u, x>."""
    u = np.asarray(u, dtype=float)
    if isinstance(body, StretchedCone):
        body = body.as_rotation_body()
    if isinstance(body, Polytope):
        if u.shape != (body.n,):
            raise ValidationError("Direction has the wrong dimension", code='dimension_mismatch',
                                  details={'n': body.n, 'u': u.shape})
        return float(np.max(body.vertices @ u))
    if isinstance(body, RotationBody):
        if u.shape != (body.n,):
            raise ValidationError("Direction has the wrong dimension", code='dimension_mismatch',
                                  details={'n': body.n, 'u': u.shape})
        return float(body.profile.support(np.linalg.norm(u[:-1]), u[-1]))
    raise ValidationError("Unsupported body type", code='unsupported_body',
                          details={'type': type(body).__name__})


# ============================================================================
# SURFACE AREA MEASURES
# ============================================================================

def _merge_normals(normals: np.ndarray, areas: np.ndarray) -> SurfaceMeasure:
    """
    Merge simplices sharing a facet plane into one atom.

    Each group keeps the vector sum of area * normal, so the merged measure
    closes exactly when the simplices do.
    """
    sums: List[np.ndarray] = []
    directions: List[np.ndarray] = []
    for normal, area in zip(normals, areas):
        unit = normal / np.linalg.norm(normal)
        if directions:
            dots = np.array(directions) @ unit
            hit = int(np.argmax(dots))
            if dots[hit] > 1.0 - NORMAL_MERGE_TOLERANCE:
                sums[hit] = sums[hit] + float(area) * unit
                directions[hit] = sums[hit] / np.linalg.norm(sums[hit])
                continue
        sums.append(float(area) * unit)
        directions.append(unit)
    masses = np.array([np.linalg.norm(s) for s in sums])
    return SurfaceMeasure(np.array(directions), masses)


def _flat_measure(vertices: np.ndarray, vt: np.ndarray) -> SurfaceMeasure:
    """Two opposite atoms carrying the area of a flat (n-1)-dimensional polytope."""
    n = vertices.shape[1]
    normal = vt[-1]
    coords = (vertices - vertices.mean(axis=0)) @ vt[:-1].T
    if n == 2:
        area = float(np.ptp(coords[:, 0]))
    else:
        try:
            area = float(ConvexHull(coords).volume)
        except QhullError as exc:
            raise ValidationError("Degenerate flat polytope", code='degenerate_hull',
                                  details={'reason': str(exc).splitlines()[0]}) from exc
    return SurfaceMeasure(np.array([normal, -normal]), np.array([area, area]))


def surface_area_measure(polytope: Polytope) -> SurfaceMeasure:
    """
    Facet normals and (n-1)-areas of a polytope in R^2 or R^3.

    Full-dimensional polytopes are hulled with Qhull and coplanar simplices
    are merged. A polytope of dimension n - 1 contributes its area twice,
    once for each side.
    """
    vertices = polytope.vertices
    n = polytope.n
    if n not in (2, 3):
        raise ValidationError("Facet enumeration is supported for n = 2 and n = 3 only",
                              code='unsupported_dimension', details={'n': n})

    centered = vertices - vertices.mean(axis=0)
    _, svals, vt = np.linalg.svd(centered, full_matrices=True)
    scale = max(float(svals[0]) if svals.size else 0.0, 1.0)
    rank = int(np.sum(svals > 1e-12 * scale))
    if rank == n - 1:
        return _flat_measure(vertices, vt)
    if rank < n - 1:
        raise ValidationError("Polytope is degenerate", code='degenerate_hull', details={'rank': rank, 'n': n})

    try:
        hull = ConvexHull(vertices)
    except QhullError as exc:
        raise ValidationError("Convex hull computation failed", code='degenerate_hull',
                              details={'reason': str(exc).splitlines()[0]}) from exc

    pts = hull.points[hull.simplices]
    if n == 2:
        areas = np.linalg.norm(pts[:, 1] - pts[:, 0], axis=1)
    else:
        areas = 0.5 * np.linalg.norm(np.cross(pts[:, 1] - pts[:, 0], pts[:, 2] - pts[:, 0]), axis=1)
    measure = _merge_normals(hull.equations[:, :n], areas)
    logger.debug("Surface area measure", facets=len(measure), total=measure.total)
    return measure


# ============================================================================
# ZONAL MEASURES OF ROTATION BODIES
# ============================================================================

def _as_rotation_body(body) -> RotationBody:
    if isinstance(body, StretchedCone):
        return body.as_rotation_body()
    if isinstance(body, RotationBody):
        return body
    raise ValidationError("Body is not rotation invariant", code='unsupported_body',
                          details={'type': type(body).__name__})


def _edge_mass(k: int, length: float, x1: float, x2: float) -> float:
    """Area swept by an edge at radii x1..x2 rotated in R^{k+1}."""
    ring = sphere_area(k - 1)
    if abs(x1 - x2) <= 1e-14 * max(x1, x2, 1.0):
        return ring * length * x1 ** (k - 1)
    return ring * length * (x1 ** k - x2 ** k) / (k * (x1 - x2))


def profile_zonal_measure(profile: Profile2D, k: int) -> ZonalMeasure:
    """Surface measure of L^{k+1} pushed to elevations, one atom per profile edge."""
    hull = ConvexHull(profile.points)
    # Edges with the same normal elevation share one atom; the key is rounded,
    # the stored elevation is not.
    atoms: Dict[float, List[float]] = {}
    for simplex, equation in zip(hull.simplices, hull.equations):
        nx, ny = equation[0], equation[1]
        if nx < -1e-12:
            continue
        p, q = hull.points[simplex[0]].copy(), hull.points[simplex[1]].copy()
        if p[0] < 0.0 and q[0] < 0.0:
            continue
        if p[0] < 0.0 or q[0] < 0.0:
            # Clip the edge to the right half plane.
            t = p[0] / (p[0] - q[0])
            cut = p + t * (q - p)
            cut[0] = 0.0
            if p[0] < 0.0:
                p = cut
            else:
                q = cut
        length = float(np.linalg.norm(p - q))
        if length == 0.0:
            continue
        mass = _edge_mass(k, length, float(p[0]), float(q[0]))
        if mass <= 0.0:
            continue
        beta = math.atan2(ny, nx)
        atom = atoms.setdefault(round(beta, ELEVATION_DECIMALS), [beta, 0.0])
        atom[1] += mass
    return ZonalMeasure(k, tuple(sorted((b, m) for b, m in atoms.values())))


def zonal_surface_measure(body: Union[RotationBody, StretchedCone], k: int) -> ZonalMeasure:
    """
    Surface area measure of the (k+1)-dimensional body L^{k+1} on S^k.

    Each atom is (edge-normal elevation, swept edge area); the measure is even
    in the elevation.
    """
    rotation = _as_rotation_body(body)
    if not 1 <= k <= max(1, rotation.n - 1):
        raise ValidationError("k must satisfy 1 <= k <= n - 1", code='bad_k', details={'k': k, 'n': rotation.n})
    measure = profile_zonal_measure(rotation.profile, k)
    logger.debug("Zonal surface measure", k=k, atoms=len(measure.atoms), total=measure.atomic_mass())
    return measure


def _support_from_measure(measure: ZonalMeasure, alpha) -> np.ndarray:
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
    betas, masses = measure.elevations, measure.masses
    return np.array([0.5 * float(np.dot(masses, kernel(measure.k, a, betas))) for a in alpha])


def k_support(body: Union[RotationBody, StretchedCone], k: int, alpha):
    """
    h_k(alpha; B): k-volume of the projection of B^{k+1} along the direction
    of elevation alpha.

    Computed from the zonal surface measure by the Cauchy projection formula,
    h_k = (1/2) T_k(sigma_k).
    """
    rotation = _as_rotation_body(body)
    if not 1 <= k <= max(1, rotation.n - 1):
        raise ValidationError("k must satisfy 1 <= k <= n - 1", code='bad_k', details={'k': k, 'n': rotation.n})
    values = _support_from_measure(profile_zonal_measure(rotation.profile, k), alpha)
    return float(values[0]) if np.ndim(alpha) == 0 else values


# ============================================================================
# DOUBLE CONE CLOSED FORMS
# ============================================================================

def cone_constant(k: int) -> float:
    """Scale between the true k-support of C and its normalized closed form."""
    if k < 1:
        raise ValidationError("k must be positive", code='bad_k', details={'k': k})
    if k == 1:
        return 2.0
    return sphere_area(k - 1) / (k * a_k(k))


def hk_plus(k: int, eps: float, alpha):
    """Branch A_k eta sin(alpha), valid above the seam pi/4 - eps."""
    eta = math.tan(math.pi / 4 + eps)
    return a_k(k) * eta * np.sin(alpha)


def hk_minus(k: int, eps: float, alpha):
    """Branch below the seam, valid while eta tan(alpha) <= 1."""
    eta = math.tan(math.pi / 4 + eps)
    alpha = np.asarray(alpha, dtype=float)
    x = np.clip(eta * np.tan(alpha), -1.0, 1.0)
    return eta * np.sin(alpha) * (a_k(k) - 2.0 * w_tail(k, x)) \
        + (2.0 / (k - 1)) * np.cos(alpha) * (1.0 - x * x) ** ((k - 1) / 2.0)


def hk_branch_gap(k: int, eps: float, alpha: float) -> float:
    """
    hk_minus - hk_plus below the seam, 0 above it.

    u = 1 - eta tan(alpha) is taken as sin(seam - alpha) / (cos(pi/4 + eps) cos(alpha))
    and 1 - x^2 as u (2 - u), so neither is formed by cancellation next to the
    seam.
    """
    seam = math.pi / 4 - eps
    if alpha >= seam:
        return 0.0
    eta = math.tan(math.pi / 4 + eps)
    if k == 1:
        return math.sin(seam - alpha) / math.cos(math.pi / 4 + eps)
    u = math.sin(seam - alpha) / (math.cos(math.pi / 4 + eps) * math.cos(alpha))
    if u >= 1.0:
        return float(hk_minus(k, eps, alpha) - hk_plus(k, eps, alpha))
    s = u * (2.0 - u)
    return (2.0 / (k - 1)) * math.cos(alpha) * s ** ((k - 1) / 2.0) \
        - 2.0 * eta * math.sin(alpha) * w_tail_complement(k, s)


def double_cone_hk(k: int, eps: float, alpha):
    """
    Normalized k-support function of the stretched double cone.

    Even in alpha. The branch switch happens at the seam pi/4 - eps, where
    both branches agree.
    """
    if k < 1:
        raise ValidationError("k must be positive", code='bad_k', details={'k': k})
    scalar = np.ndim(alpha) == 0
    a = np.minimum(np.abs(np.asarray(alpha, dtype=float)), math.pi / 2)
    eta = math.tan(math.pi / 4 + eps)
    if k == 1:
        values = np.maximum(eta * np.sin(a), np.cos(a))
    else:
        seam = math.pi / 4 - eps
        values = np.where(a >= seam, hk_plus(k, eps, a), hk_minus(k, eps, np.minimum(a, seam)))
    return float(values) if scalar else values


def stretch_normalization(k: int, eps: float) -> float:
    """
    c_eps with h_k(pi/4; C_eps) = eta h_k(pi/4; C).

    The k-support is exactly k-homogeneous in c, so the scalar equation is
    solved by comparing the c = 1 bodies.
    """
    if eps == 0.0:
        return 1.0
    eta = math.tan(math.pi / 4 + eps)
    stretched = _support_from_measure(
        profile_zonal_measure(Profile2D(np.array([[eta, 0.0], [0.0, 1.0]])), k), math.pi / 4)[0]
    plain = _support_from_measure(
        profile_zonal_measure(Profile2D(np.array([[1.0, 0.0], [0.0, 1.0]])), k), math.pi / 4)[0]
    return float((eta * plain / stretched) ** (1.0 / k))


def stretched_cone_hk(cone: StretchedCone, k: int, alpha):
    """Closed-form k-support of ``cone``, const_k c^k eta^{k-1} h_{k,eps}."""
    return cone_constant(k) * cone.c_eps ** k * cone.eta ** (k - 1) * double_cone_hk(k, cone.eps, alpha)
