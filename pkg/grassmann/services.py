"""
Grassmannian section services: light-cone angle, Klain weights, covariance.
"""

import math
from typing import Optional, Sequence

import numpy as np

from core.choices import UNIT_TOLERANCE, SubspaceOrbit
from core.exceptions import ValidationError
from core.utils.logger import StructuredLogger
from grassmann.models import KlainWeight
from minkowski.services import (
    boost,
    classify_subspace,
    lorentz_area_sq,
    q_orthonormalize,
    restricted_q_determinant,
)

logger = StructuredLogger(__name__)


def elevation(omega: Sequence[float]) -> float:
    """Signed angle of a unit vector above the space hyperplane, in [-pi/2, pi/2]."""
    omega = np.asarray(omega, dtype=float)
    return float(np.arcsin(np.clip(omega[-1], -1.0, 1.0)))


def light_cone_angle(omega: Sequence[float]) -> float:
    """
    Angle between a unit vector and the light cone, eps = | |alpha| - pi/4 |.

    |sin 2 eps| = |cos 2 alpha| holds for the returned value.
    """
    omega = np.asarray(omega, dtype=float)
    norm = float(np.linalg.norm(omega))
    if abs(norm - 1.0) > UNIT_TOLERANCE:
        raise ValidationError("light_cone_angle expects a unit vector", code='not_unit',
                              details={'norm': norm})
    alpha = abs(elevation(omega))
    return abs(alpha - math.pi / 4)


def klain_weight(basis: Sequence[Sequence[float]]) -> KlainWeight:
    """Invariant section value on span(basis); zero on the light cone."""
    b = np.atleast_2d(np.asarray(basis, dtype=float))
    k, n = b.shape
    if not 1 <= k <= n - 1:
        raise ValidationError("Klain weights are defined for 1 <= k <= n - 1", code='bad_rank',
                              details={'k': k, 'n': n})
    orbit = classify_subspace(b)
    if orbit == SubspaceOrbit.DEGENERATE:
        return KlainWeight(orbit=orbit, weight=0.0)
    frame, sign_last = q_orthonormalize(b)
    weight = lorentz_area_sq(frame, sign_last) ** -0.5
    return KlainWeight(orbit=orbit, weight=float(weight))


def hyperplane_weight(omega: Sequence[float]) -> float:
    """Weight of omega-perp through the light-cone angle, sqrt|sin 2 eps|."""
    return math.sqrt(abs(math.sin(2.0 * light_cone_angle(omega))))


def degeneration_ratio(basis: Sequence[Sequence[float]]) -> float:
    """
    weight * A^{1/2}, A being the squared area of a Q-orthonormal frame.

    The weight is taken from the restricted determinant and A from the
    closed-form area, so the ratio tests one against the other.
    """
    frame, sign_last = q_orthonormalize(basis)
    area_sq = lorentz_area_sq(frame, sign_last)
    weight = math.sqrt(restricted_q_determinant(basis))
    return weight * math.sqrt(area_sq)


def _section_value(basis: np.ndarray, orbit: Optional[SubspaceOrbit]) -> float:
    kw = klain_weight(basis)
    if orbit is not None and kw.orbit != orbit:
        return 0.0
    return kw.weight


def section_covariance_check(basis: Sequence[Sequence[float]], theta: float, axis: int,
                             orbit: Optional[SubspaceOrbit] = None) -> float:
    """
    |w(g L) * jac - w(L)| for g = boost(theta, axis).

    ``jac`` is the Euclidean k-Jacobian of g restricted to L. When ``orbit`` is
    given the section is taken to vanish off that orbit.
    """
    b = np.atleast_2d(np.asarray(basis, dtype=float))
    g = boost(theta, axis, b.shape[1])
    moved = b @ g.T
    jac = math.sqrt(np.linalg.det(moved @ moved.T) / np.linalg.det(b @ b.T))
    residual = abs(_section_value(moved, orbit) * jac - _section_value(b, orbit))
    logger.debug("Section covariance residual", theta=theta, axis=axis, residual=residual)
    return residual
