"""
Quadrature helpers shared by the geometry and regularization apps.

``adaptive_quad`` wraps :func:`scipy.integrate.quad` with the configured
tolerances and turns non-convergence into :class:`NumericalError`; complex
integrands are split into real and imaginary parts. ``gauss_legendre`` and
``composite_gauss_legendre`` are fixed-order rules for smooth pieces.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Optional, Sequence, Tuple
import warnings

import numpy as np
from scipy import integrate
from scipy.special import roots_legendre

from core.exceptions import NumericalError
from lorval import settings


@dataclass
class QuadratureConfig:
    """Tolerances for adaptive quadrature."""
    epsabs: float = 1e-13
    epsrel: float = 1e-11
    limit: int = 400

    @classmethod
    def from_env(cls) -> 'QuadratureConfig':
        return cls(
            epsabs=settings.QUAD_EPSABS,
            epsrel=settings.QUAD_EPSREL,
            limit=settings.QUAD_LIMIT,
        )

    def validate(self) -> Tuple[bool, Optional[str]]:
        if self.epsabs <= 0 or self.epsrel <= 0:
            return False, "Quadrature tolerances must be positive"
        if self.limit < 50:
            return False, "Quadrature subdivision limit must be at least 50"
        return True, None


_DEFAULT = QuadratureConfig.from_env()


# Endpoint sub-intervals narrower than this share of [a, b] mark a singular end.
ENDPOINT_SCREEN = 1e-3
TRUNCATIONS = (1e-6, 1e-8)


def _quad_options(a: float, b: float, points: Optional[Sequence[float]], config: QuadratureConfig,
                  weight: Optional[str] = None, wvar=None) -> dict:
    options = {'epsabs': config.epsabs, 'epsrel': config.epsrel, 'limit': config.limit}
    if weight is not None:
        options.update(weight=weight, wvar=wvar)
    elif points:
        lo, hi = min(a, b), max(a, b)
        inner = sorted({p for p in points if lo < p < hi})
        if inner:
            options['points'] = inner
    return options


def _quad_once(func: Callable[[float], float], a: float, b: float, options: dict):
    """(value, error, infodict, flagged); flagged when QUADPACK reports ier > 0."""
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', integrate.IntegrationWarning)
        out = integrate.quad(func, a, b, full_output=1, **options)
    return out[0], out[1], out[2], len(out) > 3


def _check_endpoints(func: Callable[[float], float], a: float, b: float, value: float, err: float,
                     info: dict, points: Optional[Sequence[float]], config: QuadratureConfig) -> None:
    """
    Reject non-integrable endpoint singularities.

    QUADPACK extrapolation returns a finite part for them without a warning.
    When the subdivision has crowded an end point, the integral over the
    interval truncated at that end must approach ``value`` as the cut shrinks;
    a gap that grows instead means divergence.
    """
    last = int(info.get('last', 0)) if isinstance(info, dict) else 0
    if last < 2 or 'alist' not in info or 'blist' not in info:
        return
    left = np.asarray(info['alist'][:last], dtype=float)
    right = np.asarray(info['blist'][:last], dtype=float)
    widths = np.abs(right - left)
    span = abs(b - a)
    floor = max(1e3 * err, 1e3 * config.epsabs, 1e-9 * abs(value))
    for end, other in ((a, b), (b, a)):
        touching = (left == end) | (right == end)
        if not np.any(touching) or np.min(widths[touching]) >= ENDPOINT_SCREEN * span:
            continue
        gaps = []
        for share in TRUNCATIONS:
            cut = end + (other - end) * share
            lo, hi = (cut, other) if end == a else (other, cut)
            truncated = _quad_once(func, lo, hi, _quad_options(lo, hi, points, config))[0]
            gaps.append(abs(truncated - value))
        if gaps[-1] > floor and gaps[-1] > gaps[0]:
            raise NumericalError(
                "Integrand is not integrable at an end point",
                code='quad_divergent',
                details={'a': a, 'b': b, 'end': end, 'value': value, 'gaps': gaps},
            )


def _real_quad(func: Callable[[float], float], a: float, b: float,
               points: Optional[Sequence[float]], config: QuadratureConfig,
               weight: Optional[str] = None, wvar=None) -> Tuple[float, float]:
    value, err, info, flagged = _quad_once(func, a, b, _quad_options(a, b, points, config, weight, wvar))
    # Roundoff-limited integrands still return a usable value; only a large
    # error estimate is a failure.
    if not np.isfinite(value) or (flagged and err > 1e-6 * max(1.0, abs(value))):
        raise NumericalError(
            "Adaptive quadrature did not converge",
            code='quad_no_convergence',
            details={'a': a, 'b': b, 'value': value, 'error': err},
        )
    if weight is None:
        _check_endpoints(func, a, b, value, err, info, points, config)
    return value, err


def adaptive_quad(func: Callable[[float], complex], a: float, b: float,
                  points: Optional[Iterable[float]] = None,
                  complex_valued: bool = False,
                  config: Optional[QuadratureConfig] = None,
                  weight: Optional[str] = None, wvar=None) -> complex:
    """
    Integrate ``func`` over [a, b].

    Args:
        func: Scalar integrand
        a, b: Interval end points
        points: Interior break points (kinks, seams)
        complex_valued: Integrate real and imaginary parts separately
        config: Tolerances; defaults to the environment settings
        weight, wvar: Passed to scipy (e.g. ``'alg'`` for endpoint powers);
            break points are ignored when a weight is set

    Returns:
        The integral (complex when ``complex_valued``)
    """
    config = config or _DEFAULT
    if a == b:
        return 0j if complex_valued else 0.0
    pts = list(points) if points is not None else None
    if not complex_valued:
        return _real_quad(lambda x: float(np.real(func(x))), a, b, pts, config, weight, wvar)[0]
    re, _ = _real_quad(lambda x: float(np.real(func(x))), a, b, pts, config, weight, wvar)
    im, _ = _real_quad(lambda x: float(np.imag(func(x))), a, b, pts, config, weight, wvar)
    return complex(re, im)


@lru_cache(maxsize=32)
def _legendre(n: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = roots_legendre(n)
    return x, w


def gauss_legendre(a: float, b: float, n: int = 64) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point Gauss-Legendre rule on [a, b]."""
    x, w = _legendre(n)
    half = 0.5 * (b - a)
    return 0.5 * (b + a) + half * x, half * w


def composite_gauss_legendre(func: Callable[[np.ndarray], np.ndarray],
                             breakpoints: Sequence[float], n: int = 64) -> float:
    """
    Sum fixed-order Gauss-Legendre rules over consecutive break points.

    ``func`` must accept a node array. Pieces of zero length are skipped.
    """
    edges = sorted(set(float(b) for b in breakpoints))
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi - lo <= 0.0:
            continue
        nodes, weights = gauss_legendre(lo, hi, n)
        total += float(np.dot(weights, func(nodes)))
    return total
