"""
Spherical cosine and Radon transforms of zonal data on S^k.

Zonal measures carry atoms on elevation rings and an optional density in the
elevation (ring area included). Zonal functions are f(alpha). The identity
(1/(2 |S^{k-1}|)) (Delta + k) T_k = R_k holds with R_k the probability
average over great subspheres and T_k taken on the density
f(beta) |S^{k-1}| cos^{k-1}(beta).
"""

from functools import lru_cache
import math
from typing import Optional, Sequence

import numpy as np
from scipy.special import eval_chebyt, eval_gegenbauer

from core.choices import GAUSS_LEGENDRE_NODES
from core.exceptions import ValidationError
from core.utils.logger import StructuredLogger
from core.utils.quadrature import composite_gauss_legendre, gauss_legendre
from bodies.models import ZonalMeasure
from zonal.kernels import kernel_breakpoints, sphere_area
from zonal.models import ZonalFunction, ZonalKernel

logger = StructuredLogger(__name__)

LAPLACIAN_STEP = 2e-3


def ring_area(k: int) -> float:
    """|S^{k-1}|, with |S^0| = 2 for k = 1."""
    return sphere_area(k - 1)


def density_of(f: ZonalFunction) -> ZonalMeasure:
    """Zonal measure with density f(beta) |S^{k-1}| cos^{k-1}(beta)."""
    k = f.k
    ring = ring_area(k)

    def density(beta):
        beta = np.asarray(beta, dtype=float)
        return f(beta) * ring * np.cos(beta) ** (k - 1)

    return ZonalMeasure(k, (), density)


def cosine_transform(k: int, measure: ZonalMeasure, nodes: int = GAUSS_LEGENDRE_NODES) -> ZonalFunction:
    """
    T_k(sigma)(alpha) = sum_atoms mass K_k(alpha, beta) + int s(beta) K_k(alpha, beta) dbeta.

    The density part is integrated piecewise between the kinks of the kernel.
    """
    if k < 1:
        raise ValidationError("k must be positive", code='bad_k', details={'k': k})
    if measure.k != k:
        raise ValidationError("Measure lives on a different sphere", code='dimension_mismatch',
                              details={'k': k, 'measure_k': measure.k})
    kern = ZonalKernel(k, nodes)
    betas, masses = measure.elevations, measure.masses
    density = measure.density

    def transform(alphas):
        out = np.empty(len(alphas))
        for i, alpha in enumerate(alphas):
            value = float(np.dot(masses, kern(alpha, betas))) if len(masses) else 0.0
            if density is not None:
                value += composite_gauss_legendre(
                    lambda b, a=alpha: density(b) * kern(a, b),
                    kernel_breakpoints(alpha), nodes,
                )
            out[i] = value
        return out

    return ZonalFunction(k, transform, label='T_k')


def pair(f: ZonalFunction, measure: ZonalMeasure, nodes: int = GAUSS_LEGENDRE_NODES) -> float:
    """int f d(measure)."""
    total = float(np.dot(measure.masses, f(measure.elevations))) if measure.atoms else 0.0
    if measure.density is not None:
        total += composite_gauss_legendre(lambda b: measure.density(b) * f(b),
                                          [-math.pi / 2, 0.0, math.pi / 2], nodes)
    return total


def radon_transform(k: int, f: ZonalFunction, nodes: int = GAUSS_LEGENDRE_NODES) -> ZonalFunction:
    """
    Average of f over the great (k-1)-sphere orthogonal to the direction of
    elevation alpha.

    A point of that subsphere at angle psi from the meridian has elevation
    arcsin(cos(alpha) cos(psi)), with weight sin^{k-2}(psi) on [0, pi].
    """
    if k < 1 or f.k != k:
        raise ValidationError("Radon transform needs a zonal function on S^k", code='bad_k',
                              details={'k': k, 'f_k': f.k})

    if k == 1:
        def transform(alphas):
            top = np.arcsin(np.clip(np.cos(alphas), -1.0, 1.0))
            return 0.5 * (f(top) + f(-top))
        return ZonalFunction(k, transform, label='R_k')

    psi, w = gauss_legendre(0.0, math.pi, nodes)
    weights = w * np.sin(psi) ** (k - 2)
    weights = weights / weights.sum()

    def transform(alphas):
        elev = np.arcsin(np.clip(np.outer(np.cos(alphas), np.cos(psi)), -1.0, 1.0))
        return np.array([float(np.dot(weights, f(row))) for row in elev])

    return ZonalFunction(k, transform, label='R_k')


def zonal_laplacian(k: int, g: ZonalFunction, step: float = LAPLACIAN_STEP) -> ZonalFunction:
    """
    Laplace-Beltrami operator of S^k on a zonal function,
    g'' - (k - 1) tan(alpha) g', by 5-point central differences.
    """
    h = step

    def laplacian(alphas):
        alphas = np.asarray(alphas, dtype=float)
        values = {j: g(alphas + j * h) for j in (-2, -1, 0, 1, 2)}
        first = (values[-2] - 8 * values[-1] + 8 * values[1] - values[2]) / (12 * h)
        second = (-values[-2] + 16 * values[-1] - 30 * values[0] + 16 * values[1] - values[2]) / (12 * h * h)
        return second - (k - 1) * np.tan(alphas) * first

    return ZonalFunction(k, laplacian, label='Delta')


def zonal_harmonic(k: int, degree: int) -> ZonalFunction:
    """
    Zonal spherical harmonic of the given degree on S^k.

    Gegenbauer C_l^{(k-1)/2}(sin alpha) for k >= 2; Chebyshev T_l(sin alpha)
    on the circle.
    """
    if degree < 0:
        raise ValidationError("Degree must be nonnegative", code='bad_degree', details={'degree': degree})
    if k == 1:
        return ZonalFunction(k, lambda a: eval_chebyt(degree, np.sin(a)), label=f'Y_{degree}')
    return ZonalFunction(k, lambda a: eval_gegenbauer(degree, (k - 1) / 2.0, np.sin(a)), label=f'Y_{degree}')


def _box_of_transform(k: int, f: ZonalFunction, alphas: np.ndarray, nodes: int) -> np.ndarray:
    transform = cosine_transform(k, density_of(f), nodes)
    lap = zonal_laplacian(k, transform)
    return (lap(alphas) + k * transform(alphas)) / (2.0 * ring_area(k))


@lru_cache(maxsize=16)
def box_calibration(k: int, nodes: int = GAUSS_LEGENDRE_NODES) -> float:
    """
    Ratio R_k(1) / box T_k(1), computed on constants and frozen.

    The conventions above make it 1; the value is used as a multiplier so a
    different normalization of R_k would be absorbed here.
    """
    one = ZonalFunction(k, lambda a: np.ones_like(a), label='1')
    sample = np.array([0.3])
    box = _box_of_transform(k, one, sample, nodes)[0]
    radon = radon_transform(k, one, nodes)(sample)[0]
    scale = radon / box
    logger.debug("Box identity calibration", k=k, scale=scale)
    return float(scale)


def box_identity_residual(k: int, f: ZonalFunction, alphas: Optional[Sequence[float]] = None,
                          nodes: int = GAUSS_LEGENDRE_NODES) -> float:
    """max over alphas of |box T_k f - R_k f|, box calibrated on constants."""
    if f.k != k:
        raise ValidationError("Function lives on a different sphere", code='dimension_mismatch',
                              details={'k': k, 'f_k': f.k})
    if f.smoothness is not None and f.smoothness < 4:
        raise ValidationError("The box identity check needs a C^4 function", code='not_smooth',
                              details={'smoothness': f.smoothness})
    alphas = np.linspace(-1.2, 1.2, 12) if alphas is None else np.asarray(alphas, dtype=float)
    lhs = box_calibration(k, nodes) * _box_of_transform(k, f, alphas, nodes)
    rhs = radon_transform(k, f, nodes)(alphas)
    residual = float(np.max(np.abs(lhs - rhs)))
    logger.debug("Box identity residual", k=k, label=f.label, residual=residual)
    return residual
