"""
Power series behind the moments I_k(lambda) = int_0^1 x^k |sin x|^lambda dx.

(sin x / x)^lambda = sum_j c_j(lambda) x^{2j}. The coefficients l_j of
log(sin x / x) = sum_j l_j x^{2j} are computed exactly with ``Fraction``;
c_j(lambda) follows from the recurrence j c_j = lambda sum_{i<=j} i l_i c_{j-i},
which keeps every c_j a degree-j polynomial in lambda. Term-wise integration
gives I_k(lambda) = sum_j c_j(lambda) / (lambda + k + 2j + 1), with simple
poles at lambda = -(k + 2j + 1).
"""

from fractions import Fraction
from functools import lru_cache
import math
from typing import List, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from core.choices import MAX_SERIES_TERMS
from core.exceptions import ValidationError
from core.utils.logger import StructuredLogger
from core.utils.quadrature import adaptive_quad
from lorval import settings
from mero.models import LaurentValue

logger = StructuredLogger(__name__)

SERIES_RELATIVE_TOLERANCE = 1e-16


@lru_cache(maxsize=1)
def log_sinc_coefficients(terms: int = MAX_SERIES_TERMS) -> Tuple[Fraction, ...]:
    """Exact l_0, ..., l_terms of log(sin x / x) in powers of x^2 (l_0 = 0)."""
    s = [Fraction((-1) ** j, math.factorial(2 * j + 1)) for j in range(terms + 1)]
    l = [Fraction(0)] * (terms + 1)
    for j in range(1, terms + 1):
        acc = j * s[j] - sum(i * l[i] * s[j - i] for i in range(1, j))
        l[j] = acc / j
    return tuple(l)


@lru_cache(maxsize=1)
def _weighted_log_sinc() -> np.ndarray:
    """i * l_i as floats, the kernel of the c_j recurrence."""
    l = log_sinc_coefficients()
    return np.array([float(i * l[i]) for i in range(len(l))])


def _check_terms(J: int) -> None:
    if not 0 <= J <= MAX_SERIES_TERMS:
        raise ValidationError("Series length must satisfy 0 <= J <= 64", code='bad_series_length',
                              details={'J': J})


def c_coeffs(lam: complex, J: int = MAX_SERIES_TERMS) -> List[complex]:
    """c_0(lambda), ..., c_J(lambda); real floats for real lambda."""
    _check_terms(J)
    return list(_c_and_derivative(lam, J)[0])


def c_coeffs_derivative(lam: complex, J: int = MAX_SERIES_TERMS) -> List[complex]:
    """d c_j / d lambda for j = 0..J."""
    _check_terms(J)
    return list(_c_and_derivative(lam, J)[1])


def _c_and_derivative(lam: complex, J: int) -> Tuple[np.ndarray, np.ndarray]:
    lam = _as_number(lam)
    w = _weighted_log_sinc()
    dtype = complex if isinstance(lam, complex) else float
    c = np.zeros(J + 1, dtype=dtype)
    dc = np.zeros(J + 1, dtype=dtype)
    c[0] = 1.0
    for j in range(1, J + 1):
        i = np.arange(1, j + 1)
        conv = np.dot(w[i], c[j - i])
        c[j] = lam * conv / j
        dc[j] = (conv + lam * np.dot(w[i], dc[j - i])) / j
    return c, dc


@lru_cache(maxsize=MAX_SERIES_TERMS + 1)
def c_polynomial(j: int) -> Polynomial:
    """c_j as a polynomial in lambda (exact recurrence, float coefficients)."""
    _check_terms(j)
    l = log_sinc_coefficients()
    polys: List[List[Fraction]] = [[Fraction(1)]]
    for m in range(1, j + 1):
        acc = [Fraction(0)] * (m + 1)
        for i in range(1, m + 1):
            for power, coeff in enumerate(polys[m - i]):
                acc[power + 1] += i * l[i] * coeff / m
        polys.append(acc)
    return Polynomial([float(c) for c in polys[j]])


def _as_number(lam):
    lam = complex(lam)
    return lam.real if lam.imag == 0 else lam


def pole_index(k: int, lam: complex) -> int:
    """j with lambda within the pole window of -(k + 2j + 1), or -1."""
    lam = complex(lam)
    nearest = round(lam.real)
    if abs(lam - nearest) >= settings.POLE_WINDOW:
        return -1
    offset = -nearest - k - 1
    if offset < 0 or offset % 2:
        return -1
    return offset // 2


def moment_I(k: int, lam: complex) -> LaurentValue:
    """
    I_k(lambda) continued meromorphically.

    At lambda = -(k + 2j + 1) (within the pole window) the value carries the
    series residue c_j(lambda_0) and the finite part
    sum_{i != j} c_i / (lambda_0 + k + 2i + 1) + c_j'(lambda_0).
    """
    if k < 0:
        raise ValidationError("Moment order must be nonnegative", code='bad_moment', details={'k': k})
    j0 = pole_index(k, lam)
    at = complex(lam)
    point = _as_number(-(k + 2 * j0 + 1)) if j0 >= 0 else _as_number(lam)
    J = MAX_SERIES_TERMS
    c, dc = _c_and_derivative(point, J)
    total = 0.0
    small = 0
    for j in range(J + 1):
        if j == j0:
            continue
        term = c[j] / (point + k + 2 * j + 1)
        total += term
        if j > j0 and abs(term) < SERIES_RELATIVE_TOLERANCE * max(abs(total), 1e-300):
            small += 1
            if small >= 2:
                break
        else:
            small = 0
    if j0 < 0:
        return LaurentValue.regular(at, total)
    _note_residue_convention()
    logger.debug("Moment at pole", k=k, j=j0, residue=complex(c[j0]))
    return LaurentValue(at=at, finite_part=total + dc[j0], pole_order=1, residue=c[j0])


@lru_cache(maxsize=1)
def _note_residue_convention() -> None:
    logger.warning(
        "Moment residues are reported from the series as c_j(lambda_0); a doubled "
        "value 2 c_j is sometimes quoted for the same poles",
        convention='series',
    )


def moment_M(j: int, lam: complex) -> LaurentValue:
    """M_j(lambda) = int_0^{pi/2} x^j sin^lambda x dx = I_j(lambda) + regular part over [1, pi/2]."""
    at = _as_number(lam)
    is_complex = isinstance(at, complex)

    def integrand(x):
        return x ** j * np.exp(at * np.log(np.sin(x))) if is_complex else x ** j * np.sin(x) ** at

    regular = adaptive_quad(integrand, 1.0, math.pi / 2, complex_valued=is_complex)
    return moment_I(j, lam) + regular
