"""
Truncated Taylor series ("jets") and their arithmetic.

A ``TaylorJet`` of order m at ``center`` a stores the normalized coefficients
t_0, ..., t_m with f(a + x) = sum t_i x^i + O(x^{m+1}), t_i = f^{(i)}(a) / i!.
Jets combine with +, -, *, /, ** and composition, and the module-level
functions (``sin``, ``cos``, ``tan``, ``exp``, ``log``, ``sqrt``, ``arctan2``)
accept jets as well as numpy arrays, so a single expression can be evaluated
both on sample grids and on jets.
"""

import math
from typing import Sequence, Union

import numpy as np

from core.exceptions import ValidationError

CENTER_TOLERANCE = 1e-12

Number = Union[int, float, complex]


class TaylorJet:
    """Truncated Taylor expansion of a function about ``center``."""

    # numpy must hand mixed array/jet arithmetic back to the jet
    __array_ufunc__ = None

    def __init__(self, center: float, coefficients: Sequence[Number]):
        coeffs = np.atleast_1d(np.asarray(coefficients))
        if coeffs.ndim != 1 or len(coeffs) == 0:
            raise ValidationError("A jet needs a non-empty coefficient vector", code='bad_jet',
                                  details={'shape': coeffs.shape})
        coeffs = coeffs.astype(complex) if np.iscomplexobj(coeffs) else coeffs.astype(float)
        self.center = float(center)
        self.coefficients = coeffs

    # ------------------------------------------------------------------
    # construction
    # ------------------------------------------------------------------

    @classmethod
    def variable(cls, center: float, order: int) -> 'TaylorJet':
        """The identity x -> x at ``center``."""
        coeffs = np.zeros(order + 1)
        coeffs[0] = center
        if order >= 1:
            coeffs[1] = 1.0
        return cls(center, coeffs)

    @classmethod
    def constant(cls, value: Number, center: float, order: int) -> 'TaylorJet':
        coeffs = np.zeros(order + 1, dtype=complex if isinstance(value, complex) else float)
        coeffs[0] = value
        return cls(center, coeffs)

    @classmethod
    def from_derivatives(cls, center: float, derivatives: Sequence[Number]) -> 'TaylorJet':
        d = np.asarray(derivatives)
        factorials = np.array([math.factorial(i) for i in range(len(d))], dtype=float)
        return cls(center, d / factorials)

    # ------------------------------------------------------------------
    # inspection
    # ------------------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @property
    def value(self) -> Number:
        return self.coefficients[0]

    def derivatives(self) -> np.ndarray:
        """f(a), f'(a), ..., f^{(m)}(a)."""
        factorials = np.array([math.factorial(i) for i in range(self.order + 1)], dtype=float)
        return self.coefficients * factorials

    def __call__(self, x):
        """The Taylor polynomial J_m evaluated at absolute position x."""
        return np.polynomial.polynomial.polyval(np.asarray(x) - self.center, self.coefficients)

    def tail(self, x, start: int):
        """sum_{i >= start} t_i (x - a)^i."""
        dx = np.asarray(x) - self.center
        if start > self.order:
            return np.zeros_like(dx, dtype=self.coefficients.dtype)
        return np.polynomial.polynomial.polyval(dx, self.coefficients[start:]) * dx ** start

    def __repr__(self) -> str:
        return f"TaylorJet(center={self.center}, order={self.order})"

    # ------------------------------------------------------------------
    # re-expression
    # ------------------------------------------------------------------

    def truncate(self, order: int) -> 'TaylorJet':
        return TaylorJet(self.center, self.coefficients[:order + 1])

    def at(self, center: float) -> 'TaylorJet':
        """Same coefficients, attached to another center."""
        return TaylorJet(center, self.coefficients)

    def reflected(self) -> 'TaylorJet':
        """Jet of x -> f(2a - x) at a."""
        signs = (-1.0) ** np.arange(self.order + 1)
        return TaylorJet(self.center, self.coefficients * signs)

    def local(self, scale: float) -> 'TaylorJet':
        """Jet at 0 of the local function x -> f(a + scale * x)."""
        return TaylorJet(0.0, self.coefficients * scale ** np.arange(self.order + 1))

    def derivative(self) -> 'TaylorJet':
        if self.order == 0:
            return TaylorJet(self.center, np.zeros(1, dtype=self.coefficients.dtype))
        return TaylorJet(self.center, self.coefficients[1:] * np.arange(1, self.order + 1))

    def integrate(self, constant: Number = 0.0) -> 'TaylorJet':
        """Antiderivative taking the value ``constant`` at the center (one order higher)."""
        body = self.coefficients / np.arange(1, self.order + 2)
        coeffs = np.concatenate([np.array([constant], dtype=np.result_type(body, type(constant))), body])
        return TaylorJet(self.center, coeffs)

    def compose(self, inner: 'TaylorJet') -> 'TaylorJet':
        """Jet of f(g(x)) at the center of g, for g(center) equal to this jet's center."""
        if abs(complex(inner.value) - self.center) > CENTER_TOLERANCE * max(1.0, abs(self.center)):
            raise ValidationError("Inner jet does not land on the outer center", code='jet_center_mismatch',
                                  details={'inner_value': complex(inner.value), 'center': self.center})
        order = min(self.order, inner.order)
        shift = inner.truncate(order) - inner.value
        result = TaylorJet.constant(self.coefficients[order], inner.center, order)
        for i in range(order - 1, -1, -1):
            result = result * shift + self.coefficients[i]
        return result

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------

    def _coerce(self, other) -> 'TaylorJet':
        if isinstance(other, TaylorJet):
            if abs(other.center - self.center) > CENTER_TOLERANCE * max(1.0, abs(self.center)):
                raise ValidationError("Jets have different centers", code='jet_center_mismatch',
                                      details={'left': self.center, 'right': other.center})
            return other
        if np.ndim(other) != 0:
            raise ValidationError("Jets combine with scalars and jets only", code='bad_operand',
                                  details={'type': type(other).__name__})
        return TaylorJet.constant(complex(other) if np.iscomplexobj(other) else float(other), self.center, self.order)

    def _pair(self, other):
        other = self._coerce(other)
        order = min(self.order, other.order)
        return self.coefficients[:order + 1], other.coefficients[:order + 1], order

    def __add__(self, other) -> 'TaylorJet':
        a, b, _ = self._pair(other)
        return TaylorJet(self.center, a + b)

    __radd__ = __add__

    def __neg__(self) -> 'TaylorJet':
        return TaylorJet(self.center, -self.coefficients)

    def __sub__(self, other) -> 'TaylorJet':
        a, b, _ = self._pair(other)
        return TaylorJet(self.center, a - b)

    def __rsub__(self, other) -> 'TaylorJet':
        return (-self) + other

    def __mul__(self, other) -> 'TaylorJet':
        if not isinstance(other, TaylorJet) and np.ndim(other) == 0:
            return TaylorJet(self.center, self.coefficients * other)
        a, b, order = self._pair(other)
        return TaylorJet(self.center, np.convolve(a, b)[:order + 1])

    __rmul__ = __mul__

    def reciprocal(self) -> 'TaylorJet':
        a = self.coefficients
        if a[0] == 0:
            raise ValidationError("Cannot invert a jet vanishing at its center", code='jet_not_invertible')
        b = np.zeros_like(a, dtype=np.result_type(a, float))
        b[0] = 1.0 / a[0]
        for n in range(1, len(a)):
            b[n] = -np.dot(a[1:n + 1], b[n - 1::-1][:n]) / a[0]
        return TaylorJet(self.center, b)

    def __truediv__(self, other) -> 'TaylorJet':
        if not isinstance(other, TaylorJet) and np.ndim(other) == 0:
            return TaylorJet(self.center, self.coefficients / other)
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other) -> 'TaylorJet':
        return self.reciprocal() * other

    def __pow__(self, exponent: Number) -> 'TaylorJet':
        if isinstance(exponent, TaylorJet):
            return exp(log(self) * exponent)
        real_exponent = bool(np.isreal(exponent))
        if real_exponent:
            exponent = float(np.real(exponent))
        if real_exponent and exponent.is_integer() and exponent >= 0:
            power = int(exponent)
            if power == 0:
                return TaylorJet.constant(1.0, self.center, self.order)
            if self.coefficients[0] == 0:
                result = self
                for _ in range(power - 1):
                    result = result * self
                return result
        a = self.coefficients
        if a[0] == 0:
            raise ValidationError("Non-integer powers need a nonzero value at the center",
                                  code='jet_not_invertible', details={'exponent': complex(exponent)})
        complex_result = np.iscomplexobj(a) or not real_exponent or (
            a[0] < 0 and not exponent.is_integer())
        dtype = complex if complex_result else float
        g = np.zeros(len(a), dtype=dtype)
        g[0] = np.power(complex(a[0]) if complex_result else a[0], exponent)
        for n in range(1, len(a)):
            i = np.arange(1, n + 1)
            g[n] = np.dot((exponent * i - (n - i)) * a[1:n + 1], g[n - i]) / (n * a[0])
        return TaylorJet(self.center, g)


# ============================================================================
# ELEMENTARY FUNCTIONS (jets and arrays)
# ============================================================================


def _sin_cos(f: TaylorJet):
    a = f.coefficients
    dtype = a.dtype
    s = np.zeros(len(a), dtype=dtype)
    c = np.zeros(len(a), dtype=dtype)
    s[0], c[0] = np.sin(a[0]), np.cos(a[0])
    for n in range(1, len(a)):
        i = np.arange(1, n + 1)
        s[n] = np.dot(i * a[1:n + 1], c[n - i]) / n
        c[n] = -np.dot(i * a[1:n + 1], s[n - i]) / n
    return TaylorJet(f.center, s), TaylorJet(f.center, c)


def sin(x):
    if isinstance(x, TaylorJet):
        return _sin_cos(x)[0]
    return np.sin(x)


def cos(x):
    if isinstance(x, TaylorJet):
        return _sin_cos(x)[1]
    return np.cos(x)


def tan(x):
    if isinstance(x, TaylorJet):
        s, c = _sin_cos(x)
        return s / c
    return np.tan(x)


def exp(x):
    if not isinstance(x, TaylorJet):
        return np.exp(x)
    a = x.coefficients
    e = np.zeros(len(a), dtype=np.result_type(a, float))
    e[0] = np.exp(a[0])
    for n in range(1, len(a)):
        i = np.arange(1, n + 1)
        e[n] = np.dot(i * a[1:n + 1], e[n - i]) / n
    return TaylorJet(x.center, e)


def log(x):
    if not isinstance(x, TaylorJet):
        return np.log(x)
    if x.order == 0:
        return TaylorJet(x.center, [np.log(x.value)])
    return (x.derivative() / x.truncate(x.order - 1)).integrate(np.log(x.value))


def sqrt(x):
    if isinstance(x, TaylorJet):
        return x ** 0.5
    return np.sqrt(x)


def arctan2(y, x):
    """Angle of (x, y); for jets the value is taken from numpy's branch."""
    if not isinstance(y, TaylorJet) and not isinstance(x, TaylorJet):
        return np.arctan2(y, x)
    if not isinstance(y, TaylorJet):
        y = x._coerce(y)
    if not isinstance(x, TaylorJet):
        x = y._coerce(x)
    base = float(np.arctan2(np.real(y.value), np.real(x.value)))
    if y.order == 0 or x.order == 0:
        return TaylorJet.constant(base, x.center, 0)
    order = min(x.order, y.order)
    x, y = x.truncate(order), y.truncate(order)
    dx, dy = x.derivative(), y.derivative()
    xs, ys = x.truncate(order - 1), y.truncate(order - 1)
    return ((xs * dy - ys * dx) / (xs * xs + ys * ys)).integrate(base)
