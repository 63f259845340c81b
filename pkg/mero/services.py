"""
Meromorphic regularization services.

Pairings are continued in lambda by Taylor subtraction: near each singular
point the test function minus its jet is integrated against the power, and
the subtracted jet terms are paired with the series moments ``moment_I``,
which carry all the poles.
"""

import math
from typing import Callable, Dict, Optional, Tuple, Union

import numpy as np

from core.choices import LIGHT_CONE_POINTS, Parity, Side
from core.exceptions import ValidationError
from core.utils.logger import StructuredLogger
from core.utils.quadrature import adaptive_quad
from minkowski.services import boost
from mero import jets
from mero.jets import TaylorJet
from mero.models import (
    TAIL_TERMS, CircleFunction, LaurentValue, LocalTestFunction, QuadrantFunction, wrap_angle, numerical_jet,
)
from mero.series import moment_I

logger = StructuredLogger(__name__)

__all__ = [
    'subtraction_order', 'sin_pm_lambda', 'smooth_step', 'cutoff', 'local_function', 'f_lambda',
    'boost_pullback', 'covariance_residual', 'g_density', 'g_density_expression', 'crofton_lambda',
    'residue_parity', 'crofton_apply', 'jet_subtract', 'numerical_jet',
]

# Local coordinate x = 2 (alpha - p); the partition of unity is 1 for |x| < pi/4
LOCAL_SUPPORT = 3 * math.pi / 4
FLAT_RADIUS = math.pi / 4


def subtraction_order(lam: complex) -> int:
    """Smallest K >= 0 with Re(lambda) + K > -1."""
    return max(0, math.floor(-complex(lam).real - 1) + 1)


# ============================================================================
# sin_+^lambda AND sin_-^lambda
# ============================================================================


def _power_of_sin(lam: complex) -> Callable[[float], complex]:
    if lam.imag == 0:
        real = lam.real
        return lambda x: math.sin(x) ** real
    return lambda x: np.exp(lam * math.log(math.sin(x)))


def _tail_integrand(local: LocalTestFunction, lam: complex, order: int) -> Callable[[float], complex]:
    """(sin x / x)^lambda x^{i Im lambda} (phi - J)/x^K; the weight x^{Re lambda + K} is left to quad."""
    def integrand(x):
        sinc = np.sinc(x / math.pi)
        quotient = local.tail_quotient(x, order)
        if lam.imag == 0:
            return sinc ** lam.real * quotient
        phase = np.exp(1j * lam.imag * math.log(x)) if x > 0 else 1.0
        return np.exp(lam * math.log(sinc)) * phase * quotient
    return integrand


def _regular_part(local: LocalTestFunction, lam: complex, order: int) -> complex:
    """int_0^1 sin^lambda (phi - J_K) + int_1^b sin^lambda phi, analytic in lambda."""
    power = _power_of_sin(lam)
    complex_valued = lam.imag != 0 or np.iscomplexobj(local.jet.coefficients)
    points = [b for b in local.breakpoints if b > 0]

    split = 0.0
    if local.tail[1] > 0 and local.jet.order >= order + TAIL_TERMS:
        split = min(local.tail[1], 1.0)

    total = 0.0
    if split > 0:
        total += adaptive_quad(_tail_integrand(local, lam, order), 0.0, split,
                               complex_valued=complex_valued, weight='alg', wvar=(lam.real + order, 0.0))
    total += adaptive_quad(lambda x: power(x) * local.remainder(x, order) if x > 0 else 0.0,
                           split, 1.0, points=points, complex_valued=complex_valued)
    upper = local.support[1]
    if upper > 1.0:
        total += adaptive_quad(lambda x: power(x) * local(x), 1.0, upper,
                               points=points, complex_valued=complex_valued)
    return total


def sin_pm_lambda(side: Union[Side, str], psi: LocalTestFunction, lam: complex,
                  order: Optional[int] = None) -> LaurentValue:
    """
    Regularized pairing of sin_+^lambda (side plus) or sin_-^lambda (side minus) with ``psi``.

    sin_+^lambda is sin^lambda x on (0, pi); sin_-^lambda pairs with psi(-x).
    ``order`` is the number of subtracted jet terms, at least
    ``subtraction_order(lam)``; the value does not depend on it.
    """
    side = Side(side)
    lam = complex(lam)
    needed = subtraction_order(lam)
    K = needed if order is None else order
    if K < needed:
        raise ValidationError("Subtraction order too small for this lambda", code='insufficient_jet_order',
                              details={'order': K, 'needed': needed, 'lambda': [lam.real, lam.imag]})
    if psi.jet.order < K - 1:
        raise ValidationError("Test function jet is too short", code='insufficient_jet_order',
                              details={'have': psi.jet.order, 'need': K - 1})

    local = psi if side == Side.PLUS else psi.reflected()
    result = LaurentValue.regular(lam, _regular_part(local, lam, K))
    for i in range(K):
        coeff = local.jet.coefficients[i]
        if coeff != 0:
            result = result + moment_I(i, lam) * coeff
    return result


# ============================================================================
# f_lambda ON THE CIRCLE
# ============================================================================


def smooth_step(t: float) -> float:
    """C-infinity step: 0 for t <= 0, 1 for t >= 1."""
    if t <= 0.0:
        return 0.0
    if t >= 1.0:
        return 1.0
    a = math.exp(-1.0 / t)
    b = math.exp(-1.0 / (1.0 - t))
    return a / (a + b)


def cutoff(point: float, alpha: float) -> float:
    """
    Partition of unity on S^1 subordinate to the light-cone points.

    Equal to 1 within pi/8 of ``point`` and to 0 beyond 3 pi/8; the four
    cutoffs sum to 1 everywhere.
    """
    distance = abs(float(wrap_angle(alpha - point)))
    return 1.0 - smooth_step((distance - math.pi / 8) / (math.pi / 4))


def local_function(phi: CircleFunction, point: float, order: int = 0) -> LocalTestFunction:
    """psi(x) = 1/2 chi_p(p + x/2) phi(p + x/2), so that dalpha = dx/2 is absorbed."""
    jet = phi.jet_at(point, order).local(0.5) * 0.5
    lo, hi = phi.tail_at(point)
    seams = [2.0 * float(wrap_angle(s - point)) for s in phi.seams]
    breakpoints = {x for x in seams if -LOCAL_SUPPORT < x < LOCAL_SUPPORT}
    breakpoints.update((-FLAT_RADIUS, FLAT_RADIUS))

    def func(x):
        alpha = point + 0.5 * x
        return 0.5 * cutoff(point, alpha) * phi(alpha)

    # The cutoff is 1 for |x| < FLAT_RADIUS, so a split carries over there.
    split = phi.split_at(point)
    if split is not None:
        split = split.local(0.5, 0.5, FLAT_RADIUS)

    return LocalTestFunction(
        func=func,
        jet=jet,
        support=(-LOCAL_SUPPORT, LOCAL_SUPPORT),
        tail=(max(2.0 * lo, -FLAT_RADIUS), min(2.0 * hi, FLAT_RADIUS)),
        breakpoints=tuple(sorted(breakpoints)),
        split=split,
    )


def _space_side(point: float) -> Side:
    # cos 2a = -sin x at pi/4 and 5pi/4, +sin x at 3pi/4 and 7pi/4
    index = int(round((point - math.pi / 4) / (math.pi / 2))) % 4
    return Side.MINUS if index % 2 == 0 else Side.PLUS


def _opposite(side: Side) -> Side:
    return Side.PLUS if side == Side.MINUS else Side.MINUS


def space_and_time(phi: CircleFunction, lam: complex) -> Tuple[LaurentValue, LaurentValue]:
    """The space-supported and time-supported pairings of |cos 2 alpha|^lambda with phi."""
    lam = complex(lam)
    need = max(subtraction_order(lam) - 1, 0)
    space = LaurentValue.regular(lam, 0.0)
    time = LaurentValue.regular(lam, 0.0)
    for point in LIGHT_CONE_POINTS:
        psi = local_function(phi, point, need)
        s_side = _space_side(point)
        space = space + sin_pm_lambda(s_side, psi, lam)
        time = time + sin_pm_lambda(_opposite(s_side), psi, lam)
    return space, time


def f_lambda(parity: Union[Parity, str], phi: CircleFunction, lam: complex) -> LaurentValue:
    """
    The family |cos 2 alpha|^lambda paired with phi.

    ``S`` and ``T`` restrict to the space-like (cos 2a > 0) and time-like arcs;
    ``sym`` is S + T and ``antisym`` is S - T. At lambda = -m the pole sits in
    ``sym`` for odd m and in ``antisym`` for even m; S and T have both.
    """
    parity = Parity(parity)
    space, time = space_and_time(phi, lam)
    if parity == Parity.SPACE:
        result = space
    elif parity == Parity.TIME:
        result = time
    elif parity == Parity.CONE_SYM:
        result = space + time
    else:
        result = space - time
    logger.debug("f_lambda evaluated", parity=parity.value, label=phi.label, pole=result.is_pole)
    return result


# ============================================================================
# COVARIANCE
# ============================================================================


def _boost_entries(theta: float) -> Tuple[float, float]:
    g = boost(theta, 1, 2)
    return float(g[0, 0]), float(g[0, 1])


def _boosted_angle(theta: float, alpha: float) -> float:
    c, s = _boost_entries(theta)
    x = c * math.cos(alpha) + s * math.sin(alpha)
    y = s * math.cos(alpha) + c * math.sin(alpha)
    return float(np.mod(math.atan2(y, x), 2 * math.pi))


def boost_pullback(phi: CircleFunction, theta: float, lam: complex) -> CircleFunction:
    """
    The test function whose pairing equals that of phi after the boost.

    With u = (cos a, sin a), g the boost by ``theta`` and beta(a) the angle of
    g u, the result is |g u|^{-2 lambda - 2} phi(beta(a)). The Jacobian of
    a -> beta is |g u|^{-2} and Q(g u) = Q(u), which gives the multiplier
    kappa^lambda ((1 + kappa^2 t^2) / (1 + t^2))^{-lambda} in t = tan(pi/4 - a).
    """
    lam = complex(lam)
    exponent = -lam.real - 1.0 if lam.imag == 0 else -lam - 1.0
    c, s = _boost_entries(theta)

    def func(alpha):
        x = c * np.cos(alpha) + s * np.sin(alpha)
        y = s * np.cos(alpha) + c * np.sin(alpha)
        beta = alpha + wrap_angle(np.arctan2(y, x) - alpha)
        return np.power(x * x + y * y, exponent) * phi(beta)

    jet_map: Dict[float, TaylorJet] = {}
    for point in LIGHT_CONE_POINTS:
        outer = phi.jet_at(point)
        a = TaylorJet.variable(point, outer.order)
        x = c * jets.cos(a) + s * jets.sin(a)
        y = s * jets.cos(a) + c * jets.sin(a)
        beta = jets.arctan2(y, x)
        beta = TaylorJet(point, np.concatenate([[point], beta.coefficients[1:]]))
        weight = (x * x + y * y) ** exponent
        jet_map[point] = weight * outer.compose(beta)

    shrink = math.exp(-2.0 * abs(theta))
    tails = {p: tuple(shrink * t for t in phi.tail_at(p)) for p in LIGHT_CONE_POINTS}
    seams = tuple(sorted(_boosted_angle(-theta, seam) for seam in phi.seams))
    return CircleFunction(func=func, jets=jet_map, tails=tails, seams=seams,
                          label=f"{phi.label}|boost({theta:g})")


def covariance_residual(parity: Union[Parity, str], phi: CircleFunction, theta: float, lam: complex) -> float:
    """|f_lambda(pullback of phi) - f_lambda(phi)|, comparing residues at poles."""
    before = f_lambda(parity, phi, lam)
    after = f_lambda(parity, boost_pullback(phi, theta, lam), lam)
    residual = abs(after.value - before.value)
    logger.debug("Covariance residual", parity=Parity(parity).value, theta=theta, residual=residual)
    return residual


# ============================================================================
# GRASSMANNIAN DENSITY AND CROFTON APPLICATION
# ============================================================================


def _check_density_indices(n: int, k: int) -> None:
    if not 1 <= k <= n - 1:
        raise ValidationError("Density needs 1 <= k <= n - 1", code='bad_dimension', details={'n': n, 'k': k})


def g_density(n: int, k: int, alpha):
    """Elevation density cos^{n-k-1} a sin^{k-1} a of k-planes (constant 1)."""
    _check_density_indices(n, k)
    alpha = np.asarray(alpha, dtype=float)
    return np.cos(alpha) ** (n - k - 1) * np.sin(alpha) ** (k - 1)


def g_density_expression(n: int, k: int) -> Callable:
    """``g_density`` as an expression that also evaluates on jets."""
    _check_density_indices(n, k)

    def expr(alpha):
        return jets.cos(alpha) ** (n - k - 1) * jets.sin(alpha) ** (k - 1)

    return expr


def crofton_lambda(n: int) -> float:
    return -(n + 1) / 2.0


def residue_parity(n: int) -> Optional[Parity]:
    """Parity carrying the light-cone residue at lambda = -(n+1)/2; None for even n."""
    if n % 2 == 0:
        return None
    return Parity.CONE_SYM if n % 4 == 1 else Parity.CONE_ANTISYM


def crofton_apply(n: int, k: int, parity: Union[Parity, str], h: QuadrantFunction) -> LaurentValue:
    """f_lambda^parity(h g_{n,n-k} dalpha) at lambda = -(n+1)/2, h extended evenly and pi-periodically."""
    if not 1 <= k <= n - 1:
        raise ValidationError("Crofton application needs 1 <= k <= n - 1", code='bad_dimension',
                              details={'n': n, 'k': k})
    lam = crofton_lambda(n)
    needed = max(subtraction_order(lam) - 1, 0)
    if h.jet.order < needed:
        raise ValidationError("Zonal function is not smooth enough at the light cone",
                              code='insufficient_jet_order', details={'have': h.jet.order, 'need': needed})
    phi = CircleFunction.from_quadrant(h.times(g_density_expression(n, n - k)))
    return f_lambda(parity, phi, lam)


# ============================================================================
# JET SUBTRACTION
# ============================================================================


def jet_subtract(w: Callable, h: Callable, m: int, x):
    """
    Residual of the product rule for Taylor remainders at 0.

    Returns  (w h - J_m(w h)) - [w(0) (h - J_m(h)) + h R_{m+1}(w)]
    = h (J_m(w) - w(0)) - (J_m(w h) - w(0) J_m(h)), which is O(|x|^{m+1}).
    ``w`` and ``h`` are expressions evaluating on arrays and on jets.
    """
    if m < 0:
        raise ValidationError("Jet order must be nonnegative", code='bad_jet_order', details={'m': m})
    variable = TaylorJet.variable(0.0, m)
    jw = w(variable)
    jh = h(variable)
    if not isinstance(jw, TaylorJet):
        jw = TaylorJet.constant(jw, 0.0, m)
    if not isinstance(jh, TaylorJet):
        jh = TaylorJet.constant(jh, 0.0, m)
    w0 = jw.value
    x = np.asarray(x, dtype=float)
    return h(x) * (jw(x) - w0) - ((jw * jh)(x) - w0 * jh(x))
