"""
Zonal kernels and sphere constants.

For a zonal measure on S^k written in elevation coordinates, the mass sitting
on the ring of elevation beta is spread uniformly over a (k-1)-sphere. The
ring average of |<u, v>| against a direction v of elevation alpha is

    K_k(alpha, beta) = (1/A_k) int_{-pi/2}^{pi/2}
                       |sin a sin b + cos a cos b sin phi| cos^{k-2} phi dphi,

with A_k = int cos^{k-2} phi dphi = B(1/2, (k-1)/2). For k = 1 the ring is two
points and K_1 = (|cos(a - b)| + |cos(a + b)|) / 2.
"""

from functools import lru_cache
import math

import numpy as np
from scipy.special import beta as beta_fn, betainc, gamma

from core.choices import GAUSS_LEGENDRE_NODES
from core.exceptions import ValidationError
from core.utils.quadrature import gauss_legendre


def sphere_area(d: int) -> float:
    """Surface area |S^d| of the unit d-sphere (|S^0| = 2)."""
    return 2.0 * math.pi ** ((d + 1) / 2.0) / gamma((d + 1) / 2.0)


@lru_cache(maxsize=128)
def a_k(k: int) -> float:
    """A_k = int_{-pi/2}^{pi/2} cos^{k-2} phi dphi, for k >= 2."""
    if k < 2:
        raise ValidationError("A_k is defined for k >= 2", code='bad_k', details={'k': k})
    return float(beta_fn(0.5, (k - 1) / 2.0))


def a_k_quadrature(k: int, nodes: int = GAUSS_LEGENDRE_NODES) -> float:
    """A_k by Gauss-Legendre in t = sin phi; exact for odd k."""
    if k < 2:
        raise ValidationError("A_k is defined for k >= 2", code='bad_k', details={'k': k})
    phi, w = gauss_legendre(-math.pi / 2, math.pi / 2, nodes)
    return float(np.dot(w, np.cos(phi) ** (k - 2)))


def w_tail(k: int, x):
    """
    W_k(x) = int_x^1 (1 - t^2)^{(k-3)/2} dt for x in [-1, 1], k >= 2.

    Equals int_{arcsin x}^{pi/2} cos^{k-2} phi dphi.
    """
    x = np.clip(np.asarray(x, dtype=float), -1.0, 1.0)
    p = (k - 3) / 2.0
    half = 0.5 * beta_fn(p + 1.0, 0.5)
    ax = np.abs(x)
    upper = half * betainc(p + 1.0, 0.5, 1.0 - ax * ax)
    return np.where(x >= 0.0, upper, a_k(k) - upper)


def w_tail_complement(k: int, s: float) -> float:
    """W_k(x) for x >= 0 given s = 1 - x^2, which keeps precision as x -> 1."""
    p = (k - 3) / 2.0
    return float(0.5 * beta_fn(p + 1.0, 0.5) * betainc(p + 1.0, 0.5, min(max(s, 0.0), 1.0)))


def _kernel_k1(alpha, beta):
    return 0.5 * (np.abs(np.cos(alpha - beta)) + np.abs(np.cos(alpha + beta)))


def kernel(k: int, alpha: float, beta, nodes: int = GAUSS_LEGENDRE_NODES) -> np.ndarray:
    """
    K_k(alpha, beta) for an array of beta by Gauss-Legendre.

    The azimuth integral is split at the zero of the linear form in sin phi so
    each piece has a smooth integrand.
    """
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    if k == 1:
        return _kernel_k1(alpha, beta)
    if k < 1:
        raise ValidationError("Kernel order must be k >= 1", code='bad_k', details={'k': k})

    a = np.sin(alpha) * np.sin(beta)
    b = np.abs(np.cos(alpha) * np.cos(beta))
    with np.errstate(divide='ignore', invalid='ignore'):
        ratio = np.where(b > 0.0, -a / np.where(b > 0.0, b, 1.0), np.sign(-a) * 2.0)
    kink = np.arcsin(np.clip(ratio, -1.0, 1.0))
    kink = np.where(np.abs(ratio) >= 1.0, -math.pi / 2, kink)

    x, w = gauss_legendre(-1.0, 1.0, nodes)
    total = np.zeros_like(beta)
    for lo, hi in ((np.full_like(beta, -math.pi / 2), kink), (kink, np.full_like(beta, math.pi / 2))):
        half = 0.5 * (hi - lo)
        phi = 0.5 * (hi + lo)[:, None] + half[:, None] * x[None, :]
        values = np.abs(a[:, None] + b[:, None] * np.sin(phi)) * np.cos(phi) ** (k - 2)
        total += half * (values @ w)
    return total / a_k(k)


def kernel_closed_form(k: int, alpha: float, beta) -> np.ndarray:
    """Closed form of K_k used to check the quadrature kernel."""
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    if k == 1:
        return _kernel_k1(alpha, beta)
    a = np.sin(alpha) * np.sin(beta)
    b = np.abs(np.cos(alpha) * np.cos(beta))
    out = np.abs(a).astype(float)
    inside = b > np.abs(a)
    if np.any(inside):
        s0 = -a[inside] / b[inside]
        integral = a[inside] * (2.0 * w_tail(k, s0) - a_k(k)) \
            + 2.0 * b[inside] * (1.0 - s0 * s0) ** ((k - 1) / 2.0) / (k - 1)
        out[inside] = integral / a_k(k)
    return out


def kernel_breakpoints(alpha: float) -> list:
    """Elevations beta where K_k(alpha, .) is not smooth."""
    edge = math.pi / 2 - abs(alpha)
    return sorted({-math.pi / 2, -edge, 0.0, edge, math.pi / 2})
