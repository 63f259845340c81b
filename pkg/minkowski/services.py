"""
Minkowski linear algebra services.

All functions are pure; vectors are numpy arrays of length n and a basis is a
(k, n) array-like whose rows span the subspace.
"""

from typing import Sequence, Tuple

import numpy as np

from core.choices import (
    DEGENERACY_TOLERANCE,
    DEPENDENCE_TOLERANCE,
    FRAME_TOLERANCE,
    SubspaceOrbit,
)
from core.exceptions import (
    DegenerateSubspaceError,
    NumericalError,
    PreconditionError,
    ValidationError,
)
from core.utils.logger import StructuredLogger
from minkowski.models import LorentzFrame, LorentzSpace

logger = StructuredLogger(__name__)


def q_form(u: Sequence[float], v: Sequence[float]) -> float:
    """Q(u, v) = sum_{j<n} u_j v_j - u_n v_n."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.ndim != 1 or u.shape != v.shape:
        raise ValidationError("q_form expects two vectors of equal length", code='dimension_mismatch',
                              details={'u': u.shape, 'v': v.shape})
    if u.shape[0] < 2:
        raise ValidationError("Minkowski space needs dimension n >= 2", code='bad_dimension')
    return float(np.dot(u[:-1], v[:-1]) - u[-1] * v[-1])


def q_norm_sq(v: Sequence[float]) -> float:
    return q_form(v, v)


def euclidean_area_sq(frame: LorentzFrame) -> float:
    """Squared Euclidean k-volume of the parallelepiped, det of the Gram matrix."""
    return float(np.linalg.det(frame.euclidean_gram))


def lorentz_area_sq(frame: LorentzFrame, sign_last: int = 1) -> float:
    """
    Squared Euclidean k-volume of a Q-orthonormal frame from its time components.

    With z_j the time coordinates, the Euclidean Gram matrix of the frame is
    diag(1, ..., 1, sign_last) + 2 z z^T, whose determinant is
    1 + 2 sum z_j^2 (sign_last = +1) or 2 (z_k^2 - sum_{j<k} z_j^2) - 1
    (sign_last = -1).
    """
    if sign_last not in (1, -1):
        raise ValidationError("sign_last must be +1 or -1", code='bad_sign', details={'sign_last': sign_last})

    expected = np.eye(frame.k)
    expected[-1, -1] = float(sign_last)
    deviation = float(np.max(np.abs(frame.q_gram - expected)))
    if deviation > FRAME_TOLERANCE:
        raise PreconditionError(
            "Frame is not Q-orthonormal",
            code='frame_not_orthonormal',
            details={'deviation': deviation, 'sign_last': sign_last},
        )

    z = frame.z
    if sign_last == 1:
        value = 1.0 + 2.0 * float(np.dot(z, z))
    else:
        value = 2.0 * (z[-1] ** 2 - float(np.dot(z[:-1], z[:-1]))) - 1.0

    if value <= FRAME_TOLERANCE:
        raise NumericalError("Lorentz area formula returned a non-positive volume", code='nonpositive_area',
                             details={'value': value})
    return value


def boost(theta: float, axis: int, n: int) -> np.ndarray:
    """
    Hyperbolic rotation by ``theta`` in span(e_axis, e_n), identity elsewhere.

    ``axis`` is 1-based and must be a space axis (1 <= axis < n).
    """
    if not 1 <= axis < n:
        raise ValidationError("Boost axis must be a space axis", code='bad_axis',
                              details={'axis': axis, 'n': n})
    g = np.eye(n)
    c, s = np.cosh(theta), np.sinh(theta)
    i, t = axis - 1, n - 1
    g[i, i] = c
    g[t, t] = c
    g[i, t] = s
    g[t, i] = s
    return g


def _orthonormal_span(basis: Sequence[Sequence[float]]) -> np.ndarray:
    """Euclidean-orthonormal rows spanning the same subspace as ``basis``."""
    b = np.atleast_2d(np.asarray(basis, dtype=float))
    if b.shape[0] > b.shape[1]:
        raise ValidationError("More basis vectors than the ambient dimension", code='dependent_basis',
                              details={'shape': b.shape})
    svals = np.linalg.svd(b, compute_uv=False)
    if svals[0] == 0.0 or svals[-1] < DEPENDENCE_TOLERANCE * svals[0]:
        raise ValidationError("Basis vectors are linearly dependent", code='dependent_basis',
                              details={'singular_values': svals.tolist()})
    q, _ = np.linalg.qr(b.T)
    return q.T


def _restricted_spectrum(basis) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    u = _orthonormal_span(basis)
    space = LorentzSpace(u.shape[1])
    g = u @ space.gram @ u.T
    eigvals, eigvecs = np.linalg.eigh(0.5 * (g + g.T))
    return u, eigvals, eigvecs


def _is_degenerate(eigvals: np.ndarray) -> bool:
    # Q on a Euclidean-orthonormal basis has norm <= 1, so the floor of 1 makes
    # this an absolute test; a single eigenvalue is never compared to itself.
    scale = max(float(np.max(np.abs(eigvals))), 1.0)
    return float(np.min(np.abs(eigvals))) < DEGENERACY_TOLERANCE * scale


def classify_subspace(basis: Sequence[Sequence[float]]) -> SubspaceOrbit:
    """Orbit label from the eigen-signature of Q restricted to span(basis)."""
    _, eigvals, _ = _restricted_spectrum(basis)
    if _is_degenerate(eigvals):
        return SubspaceOrbit.DEGENERATE
    negatives = int(np.sum(eigvals < 0))
    return SubspaceOrbit.SPACE_LIKE if negatives == 0 else SubspaceOrbit.MIXED_SIGNATURE


def q_orthonormalize(basis: Sequence[Sequence[float]]) -> Tuple[LorentzFrame, int]:
    """
    Q-orthonormal frame of span(basis).

    The restricted form is diagonalized in a Euclidean-orthonormal basis of the
    span; space-like directions come first (largest Q first) and the time-like
    direction, if any, last.

    Returns:
        The frame and the sign of its last vector (+1 or -1)
    """
    u, eigvals, eigvecs = _restricted_spectrum(basis)
    if _is_degenerate(eigvals):
        raise DegenerateSubspaceError(
            "Cannot Q-orthonormalize a degenerate subspace",
            code='degenerate_subspace',
            details={'eigenvalues': eigvals.tolist()},
        )
    order = np.argsort(-eigvals)
    eigvals = eigvals[order]
    eigvecs = eigvecs[:, order]
    vectors = (eigvecs / np.sqrt(np.abs(eigvals))).T @ u
    sign_last = 1 if eigvals[-1] > 0 else -1
    return LorentzFrame(vectors), sign_last


def restricted_q_determinant(basis: Sequence[Sequence[float]]) -> float:
    """|det| of Q restricted to span(basis), in a Euclidean-orthonormal basis."""
    _, eigvals, _ = _restricted_spectrum(basis)
    return float(np.abs(np.prod(eigvals)))
