"""
Value types of the regularization calculus.

``LaurentValue`` is the output of every meromorphic evaluation. The test
functions carry explicit jets at their singular points:

* ``LocalTestFunction`` lives on (-pi, pi) with a jet at 0 and is paired with
  sin_+^lambda / sin_-^lambda;
* ``CircleFunction`` lives on S^1 with jets at the four light-cone points;
* ``QuadrantFunction`` lives on [0, pi/2] with a jet at pi/4 and extends to an
  even, pi-periodic circle function (the zonal case).

Each jet comes with a "tail" interval of offsets on which its Taylor series
represents the function to working precision. Inside it, remainders f - J_K
are summed from the series instead of being formed by cancellation.
"""

from dataclasses import dataclass, field
import math
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from core.choices import DEFAULT_JET_ORDER, LIGHT_CONE_POINTS
from core.exceptions import ValidationError
from core.utils.logger import StructuredLogger
from mero import jets
from mero.jets import TaylorJet

logger = StructuredLogger(__name__)

# Jets shorter than K + TAIL_TERMS are not trusted for tail summation
TAIL_TERMS = 12


def _to_complex(value) -> complex:
    return complex(value)


# ============================================================================
# LAURENT VALUES
# ============================================================================


@dataclass(frozen=True)
class LaurentValue:
    """
    Value of a meromorphic function at ``at``.

    Regular points have ``pole_order`` 0 and the value in ``finite_part``. At a
    simple pole, ``residue`` is the coefficient of 1/(lambda - lambda_0) and
    ``finite_part`` the constant Laurent coefficient. A pole whose residue
    cancels exactly is normalized to a regular value.
    """
    at: complex
    finite_part: complex
    pole_order: int = 0
    residue: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, 'at', _to_complex(self.at))
        object.__setattr__(self, 'finite_part', _to_complex(self.finite_part))
        object.__setattr__(self, 'residue', _to_complex(self.residue))
        if self.pole_order not in (0, 1):
            raise ValidationError("Only simple poles occur", code='bad_pole_order',
                                  details={'pole_order': self.pole_order})
        if self.pole_order == 1 and self.residue == 0:
            object.__setattr__(self, 'pole_order', 0)
        if self.pole_order == 0:
            object.__setattr__(self, 'residue', 0j)

    @classmethod
    def regular(cls, at: complex, value: complex) -> 'LaurentValue':
        return cls(at=at, finite_part=value)

    @property
    def is_pole(self) -> bool:
        return self.pole_order == 1

    @property
    def regular_value(self) -> Optional[complex]:
        return None if self.is_pole else self.finite_part

    @property
    def value(self) -> complex:
        """Residue at a pole, the value otherwise."""
        return self.residue if self.is_pole else self.finite_part

    def _coerce(self, other) -> 'LaurentValue':
        if isinstance(other, LaurentValue):
            return other
        return LaurentValue.regular(self.at, other)

    def __add__(self, other) -> 'LaurentValue':
        other = self._coerce(other)
        pole = max(self.pole_order, other.pole_order)
        return LaurentValue(at=self.at, finite_part=self.finite_part + other.finite_part,
                            pole_order=pole, residue=self.residue + other.residue)

    __radd__ = __add__

    def __neg__(self) -> 'LaurentValue':
        return LaurentValue(at=self.at, finite_part=-self.finite_part,
                            pole_order=self.pole_order, residue=-self.residue)

    def __sub__(self, other) -> 'LaurentValue':
        return self + (-self._coerce(other))

    def __mul__(self, scalar) -> 'LaurentValue':
        return LaurentValue(at=self.at, finite_part=self.finite_part * scalar,
                            pole_order=self.pole_order, residue=self.residue * scalar)

    __rmul__ = __mul__

    def to_dict(self) -> Dict[str, object]:
        def pair(z: Optional[complex]):
            return None if z is None else [z.real, z.imag]
        return {
            'at': pair(self.at),
            'pole_order': self.pole_order,
            'regular_value': pair(self.regular_value),
            'residue': pair(self.residue) if self.is_pole else None,
            'finite_part': pair(self.finite_part),
        }


# ============================================================================
# BRANCH SPLITS
# ============================================================================


@dataclass(frozen=True)
class BranchSplit:
    """
    f = smooth + gap next to a jet center, in offsets from that center.

    ``smooth`` is the jet of an entire branch, so f - J_K(f) is summed from
    its series tail. ``gap`` is the other branch minus the smooth one, in a
    closed form that is zero past the seam; ``gap_jet`` is its jet at the
    center (zero when the center lies past the seam). Remainders taken this
    way avoid the cancellation of f - J_K(f) next to the seam.
    """
    smooth: TaylorJet
    gap: Callable[[float], float]
    gap_jet: TaylorJet
    window: Tuple[float, float]

    def covers(self, offset: float, order: int) -> bool:
        return self.window[0] <= offset <= self.window[1] and self.smooth.order >= order + TAIL_TERMS

    def remainder(self, offset: float, order: int):
        poly = np.polynomial.polynomial
        tail = poly.polyval(offset, self.smooth.coefficients[order:]) * offset ** order
        return tail + self.gap(offset) - poly.polyval(offset, self.gap_jet.coefficients[:order])

    def reflected(self) -> 'BranchSplit':
        gap = self.gap
        return BranchSplit(self.smooth.reflected(), lambda o: gap(-o), self.gap_jet.reflected(),
                           (-self.window[1], -self.window[0]))

    def local(self, scale: float, weight: float, radius: float) -> 'BranchSplit':
        """Split of x -> weight f(center + scale x), used where |x| <= radius."""
        gap = self.gap
        lo, hi = self.window
        return BranchSplit(self.smooth.local(scale) * weight, lambda x: weight * gap(scale * x),
                           self.gap_jet.local(scale) * weight,
                           (max(lo / scale, -radius), min(hi / scale, radius)))

    def times(self, other: TaylorJet, factor: Callable[[float], float]) -> 'BranchSplit':
        """Product with an analytic function; ``factor`` takes offsets."""
        gap = self.gap
        return BranchSplit(self.smooth * other, lambda o: gap(o) * factor(o), self.gap_jet * other, self.window)


# ============================================================================
# TEST FUNCTIONS
# ============================================================================


@dataclass(frozen=True)
class LocalTestFunction:
    """
    Test function on (-pi, pi) with its jet at 0.

    ``func`` accepts scalars. ``support`` bounds where it may be nonzero,
    ``tail`` is the interval around 0 where the jet series is summed and
    ``breakpoints`` lists kinks for the quadrature. A ``split`` takes over the
    remainders of a two-branch function next to its seam.
    """
    func: Callable[[float], complex]
    jet: TaylorJet
    support: Tuple[float, float] = (-math.pi, math.pi)
    tail: Tuple[float, float] = (0.0, 0.0)
    breakpoints: Tuple[float, ...] = ()
    split: Optional[BranchSplit] = None

    def __post_init__(self):
        lo, hi = self.support
        if not -math.pi <= lo < hi <= math.pi:
            raise ValidationError("Support must lie in [-pi, pi]", code='bad_support',
                                  details={'support': self.support})
        if self.jet.center != 0.0:
            raise ValidationError("Local test functions carry their jet at 0", code='bad_jet',
                                  details={'center': self.jet.center})

    def __call__(self, x: float) -> complex:
        lo, hi = self.support
        if x <= lo or x >= hi:
            return 0.0
        return self.func(x)

    def reflected(self) -> 'LocalTestFunction':
        """x -> phi(-x)."""
        func = self.func
        return LocalTestFunction(
            func=lambda x: func(-x),
            jet=self.jet.reflected(),
            support=(-self.support[1], -self.support[0]),
            tail=(-self.tail[1], -self.tail[0]),
            breakpoints=tuple(sorted(-b for b in self.breakpoints)),
            split=self.split.reflected() if self.split is not None else None,
        )

    def uses_tail(self, x: float, order: int) -> bool:
        return self.tail[0] <= x <= self.tail[1] and self.jet.order >= order + TAIL_TERMS

    def tail_quotient(self, x: float, order: int) -> complex:
        """(phi(x) - J_order(x)) / x^order summed from the jet."""
        return np.polynomial.polynomial.polyval(x, self.jet.coefficients[order:])

    def remainder(self, x: float, order: int) -> complex:
        """phi(x) minus its Taylor polynomial with ``order`` terms."""
        if order == 0:
            return self(x)
        if self.uses_tail(x, order):
            return self.tail_quotient(x, order) * x ** order
        if self.split is not None and self.split.covers(x, order):
            return self.split.remainder(x, order)
        return self(x) - np.polynomial.polynomial.polyval(x, self.jet.coefficients[:order])


def wrap_angle(angle):
    """Representative in (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(angle, dtype=float), 2 * np.pi)


def _point_key(jet_map: Dict[float, TaylorJet], point: float) -> float:
    for key in jet_map:
        if abs(float(wrap_angle(key - point))) < 1e-12:
            return key
    raise ValidationError("No jet stored at this point", code='missing_jet', details={'point': point})


@dataclass(frozen=True)
class CircleFunction:
    """
    Function on S^1 with jets at the light-cone points pi/4, 3pi/4, 5pi/4, 7pi/4.

    ``tails`` maps each point to the offset interval (lo <= 0 <= hi) where its
    jet series is trusted; ``seams`` lists angles where the function is not
    smooth.
    """
    func: Callable
    jets: Dict[float, TaylorJet] = field(repr=False)
    tails: Dict[float, Tuple[float, float]] = field(default_factory=dict, repr=False)
    seams: Tuple[float, ...] = ()
    label: str = ''
    splits: Dict[float, BranchSplit] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for point in LIGHT_CONE_POINTS:
            _point_key(self.jets, point)

    def __call__(self, alpha):
        return self.func(alpha)

    def jet_at(self, point: float, order: int = 0) -> TaylorJet:
        jet = self.jets[_point_key(self.jets, point)]
        if jet.order < order:
            raise ValidationError("Insufficient jet order at the light cone", code='insufficient_jet_order',
                                  details={'point': point, 'have': jet.order, 'need': order})
        return jet

    def tail_at(self, point: float) -> Tuple[float, float]:
        for key, value in self.tails.items():
            if abs(float(wrap_angle(key - point))) < 1e-12:
                return value
        return (0.0, 0.0)

    def split_at(self, point: float) -> Optional[BranchSplit]:
        for key, value in self.splits.items():
            if abs(float(wrap_angle(key - point))) < 1e-12:
                return value
        return None

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def from_expression(cls, expr: Callable, order: int = DEFAULT_JET_ORDER, radius: float = 0.5,
                        label: str = '') -> 'CircleFunction':
        """
        ``expr`` written with :mod:`mero.jets` functions, so it evaluates on
        arrays and on jets alike. ``radius`` is the half-width around each
        light-cone point where its Taylor series is summed.
        """
        jet_map = {p: _as_jet(expr(TaylorJet.variable(p, order)), p, order) for p in LIGHT_CONE_POINTS}
        tails = {p: (-radius, radius) for p in LIGHT_CONE_POINTS}
        return cls(func=expr, jets=jet_map, tails=tails, label=label)

    @classmethod
    def from_fourier(cls, cos_coeffs: Sequence[float], sin_coeffs: Sequence[float] = (),
                     order: int = DEFAULT_JET_ORDER) -> 'CircleFunction':
        """Trigonometric polynomial sum a_j cos(j a) + sum b_j sin(j a), b indexed from j = 1."""
        a = [float(c) for c in cos_coeffs]
        b = [float(c) for c in sin_coeffs]

        def expr(alpha):
            total = 0.0 * jets.cos(alpha)
            for j, coeff in enumerate(a):
                total = total + coeff * jets.cos(j * alpha)
            for j, coeff in enumerate(b, start=1):
                total = total + coeff * jets.sin(j * alpha)
            return total

        return cls.from_expression(expr, order=order, radius=0.5, label='fourier')

    @classmethod
    def from_callable(cls, func: Callable, order: int = 4, label: str = '') -> 'CircleFunction':
        """Jets by finite differences; accurate to roughly 1e-6 for order <= 4."""
        logger.warning("Falling back to numerical jets", order=order, label=label)
        jet_map = {p: numerical_jet(func, p, order) for p in LIGHT_CONE_POINTS}
        return cls(func=func, jets=jet_map, label=label)

    @classmethod
    def from_quadrant(cls, quadrant: 'QuadrantFunction') -> 'CircleFunction':
        """Even, pi-periodic extension phi(alpha) = H(fold(alpha))."""
        q = quadrant
        p0, p1, p2, p3 = LIGHT_CONE_POINTS
        jet_map = {
            p0: q.jet.at(p0),
            p1: q.jet.reflected().at(p1),
            p2: q.jet.at(p2),
            p3: q.jet.reflected().at(p3),
        }
        lo, hi = q.tail
        tails = {p0: (lo, hi), p1: (-hi, -lo), p2: (lo, hi), p3: (-hi, -lo)}
        splits = {}
        if q.split is not None:
            mirrored = q.split.reflected()
            splits = {p0: q.split, p1: mirrored, p2: q.split, p3: mirrored}
        seams = set()
        for s in tuple(q.seams) + (0.0, math.pi / 2):
            for image in (s, math.pi - s, math.pi + s, 2 * math.pi - s):
                seams.add(round(float(np.mod(image, 2 * math.pi)), 15))
        func = q.func

        def folded(alpha):
            return func(fold(alpha))

        return cls(func=folded, jets=jet_map, tails=tails, seams=tuple(sorted(seams)), label=q.label,
                   splits=splits)


def fold(alpha):
    """Map an angle to [0, pi/2] under alpha -> -alpha and alpha -> alpha + pi."""
    a = np.mod(np.asarray(alpha, dtype=float), math.pi)
    return np.minimum(a, math.pi - a)


@dataclass(frozen=True)
class QuadrantFunction:
    """
    Zonal function of the elevation on [0, pi/2] with its jet at pi/4.

    ``tail`` holds offsets (lo <= 0 <= hi) from pi/4 where the jet series
    represents the function, ``seams`` its kinks in (0, pi/2). ``split``, in
    offsets from pi/4, is set for two-branch functions such as stretched-cone
    supports.
    """
    func: Callable
    jet: TaylorJet
    seams: Tuple[float, ...] = ()
    tail: Tuple[float, float] = (0.0, 0.0)
    label: str = ''
    split: Optional[BranchSplit] = None

    def __post_init__(self):
        if abs(self.jet.center - math.pi / 4) > 1e-12:
            raise ValidationError("Quadrant functions carry their jet at pi/4", code='bad_jet',
                                  details={'center': self.jet.center})

    def __call__(self, alpha):
        return self.func(alpha)

    @classmethod
    def from_expression(cls, expr: Callable, order: int = DEFAULT_JET_ORDER, radius: float = 0.5,
                        label: str = '') -> 'QuadrantFunction':
        p = math.pi / 4
        return cls(func=expr, jet=_as_jet(expr(TaylorJet.variable(p, order)), p, order),
                   tail=(-radius, radius), label=label)

    def times(self, expr: Callable) -> 'QuadrantFunction':
        """Product with a function analytic near pi/4 (given as a jet-aware expression)."""
        func = self.func
        other = _as_jet(expr(TaylorJet.variable(math.pi / 4, self.jet.order)), math.pi / 4, self.jet.order)
        split = None
        if self.split is not None:
            split = self.split.times(other, lambda o: float(np.real(expr(math.pi / 4 + o))))
        return QuadrantFunction(
            func=lambda a: func(a) * expr(a),
            jet=self.jet * other,
            seams=self.seams,
            tail=self.tail,
            label=self.label,
            split=split,
        )

    def remainder(self, alpha: float, order: int) -> float:
        """H(alpha) minus its Taylor polynomial at pi/4 with ``order`` terms."""
        if order == 0:
            return self.func(alpha)
        offset = alpha - math.pi / 4
        if self.tail[0] <= offset <= self.tail[1] and self.jet.order >= order + TAIL_TERMS:
            return self.jet.tail(alpha, order)
        if self.split is not None and self.split.covers(offset, order):
            return self.split.remainder(offset, order)
        return self.func(alpha) - np.polynomial.polynomial.polyval(offset, self.jet.coefficients[:order])


def _as_jet(value, center: float, order: int) -> TaylorJet:
    if isinstance(value, TaylorJet):
        return value
    return TaylorJet.constant(value, center, order)


def numerical_jet(func: Callable, center: float, order: int, step: Optional[float] = None) -> TaylorJet:
    """
    Derivatives by central differences with one Richardson step.

    The i-th derivative uses the (i + 1)-point central stencil at steps h and
    h/2, h = 1e-12^(1/(i+4)). Expect about 1e-8 for the first derivatives and
    1e-6 by order 4; orders above 6 are refused.
    """
    if not 0 <= order <= 6:
        raise ValidationError("Numerical jets are limited to order 6", code='bad_jet_order',
                              details={'order': order})
    derivatives = [complex(func(center))]
    for i in range(1, order + 1):
        h = step or 1e-12 ** (1.0 / (i + 4))

        def stencil(width):
            offsets = (i / 2.0 - np.arange(i + 1)) * width
            weights = np.array([(-1) ** j * math.comb(i, j) for j in range(i + 1)], dtype=float)
            values = np.array([func(center + o) for o in offsets])
            return np.dot(weights, values) / width ** i

        coarse, fine = stencil(h), stencil(h / 2)
        derivatives.append((4.0 * fine - coarse) / 3.0)
    d = np.array(derivatives)
    if np.all(d.imag == 0):
        d = d.real
    return TaylorJet.from_derivatives(center, d)
