"""
Divergence experiments on stretched double cones.

The candidate generalized valuations of homogeneity k = n - 2 are evaluated on
C_{n,eps} through the Crofton rule f^parity_{-(n+1)/2}(h_{k,eps} g_{n,2} dalpha).
Sweeps over eps -> 0 are then classified: logarithmic divergence, one-sided
limits that disagree, or bounded sweeps with a nonzero obstruction.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import math
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import stats

from bodies.models import StretchedCone
from bodies.services import double_cone_hk, hk_branch_gap
from core.choices import NVariant, Parity, Side, ValuationKind, VerdictMode
from core.exceptions import ConfigurationError, NumericalError, ValidationError
from core.utils.logger import StructuredLogger
from core.utils.quadrature import adaptive_quad
from experiments.models import SweepConfig
from experiments.schemas import ContinuityReport, DivergenceVerdict, SweepRecord
from lorval import settings
from mero import jets
from mero.jets import TaylorJet
from mero.models import TAIL_TERMS, BranchSplit, LaurentValue, QuadrantFunction
from mero.series import moment_M
from mero.services import (
    crofton_apply, crofton_lambda, g_density_expression, residue_parity, subtraction_order,
)
from valuations.models import InvariantValuation
from valuations.services import evaluate
from zonal.kernels import a_k, w_tail

logger = StructuredLogger(__name__)

QUARTER = math.pi / 4
# Offsets from pi/4 where stretched-cone remainders go through the branch split
SPLIT_RADIUS = 0.4

EPS_MIN = 1e-6
EPS_MAX = 0.2
MIN_RECORDS = 8

# Fit thresholds
SLOPE_SIGNIFICANCE = 5.0
MIN_R_SQUARED = 0.99
TAIL_DECADES = 2.0
TAIL_SLOPE_AGREEMENT = 0.25
LIMIT_TOLERANCE = 1e-4
MISMATCH_FACTOR = 10.0


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if eps == 0.0:
        raise ValidationError("The unstretched cone (eps = 0) has no value", code='bad_eps',
                              details={'eps': eps})
    if not EPS_MIN <= abs(eps) <= EPS_MAX:
        raise ValidationError("Stretch parameter must satisfy 1e-6 <= |eps| <= 0.2", code='bad_eps',
                              details={'eps': eps})
    return eps


def _check_dimension(n: int) -> int:
    if n < 3:
        raise ValidationError("Stretched-cone experiments need n >= 3", code='bad_dimension',
                              details={'n': n})
    return n


# ============================================================================
# THE STRETCHED CONE AS A ZONAL FUNCTION
# ============================================================================


def _hk_branch_jets(k: int, eps: float, order: int) -> Tuple[TaylorJet, TaylorJet]:
    """Jets at pi/4 of the entire branch hk_plus and of hk_branch_gap."""
    eta = math.tan(QUARTER + eps)
    v = TaylorJet.variable(QUARTER, order)
    plus = (eta if k == 1 else a_k(k) * eta) * jets.sin(v)
    if eps > 0:
        return plus, 0.0 * plus
    if k == 1:
        return plus, jets.cos(v) - eta * jets.sin(v)

    base = TaylorJet.variable(QUARTER, order - 1)
    s = jets.sin(base)
    x = eta * jets.tan(base)
    power = (k - 1) / 2.0
    d_prime = (-2.0 / (k - 1)) * (1.0 - x * x) ** power / (s * s)
    d_at_quarter = -2.0 * eta * float(w_tail(k, eta)) + (2.0 / (k - 1)) * (1.0 - eta * eta) ** power
    return plus, jets.sin(v) * d_prime.integrate(d_at_quarter)


def hk_jet(k: int, eps: float, order: Optional[int] = None) -> TaylorJet:
    """
    Jet of double_cone_hk(k, eps, .) at pi/4 from the analytic branch there.

    Above the seam (eps > 0) the branch is A_k eta sin (eta sin for k = 1).
    Below it (eps < 0) it is cos for k = 1 and A_k eta sin + sin D otherwise,
    with D' = -(2/(k-1)) csc^2 (1 - eta^2 tan^2)^((k-1)/2).
    """
    order = settings.JET_ORDER if order is None else order
    if order < 1:
        raise ValidationError("Jet order must be positive", code='bad_jet_order', details={'order': order})
    if k < 1:
        raise ValidationError("k must be positive", code='bad_k', details={'k': k})
    if eps == 0.0:
        raise ValidationError("h_k is not analytic at pi/4 for eps = 0", code='bad_eps', details={'eps': eps})
    plus, gap = _hk_branch_jets(k, eps, order)
    return plus if eps > 0 else plus + gap


def stretched_cone_quadrant(k: int, eps: float, order: Optional[int] = None) -> QuadrantFunction:
    """
    h_{k,eps} on [0, pi/2] with its jet at pi/4 and the seam at pi/4 - eps.

    The branch split makes remainders next to the seam exact sums of series
    tails and closed-form gaps.
    """
    eps = _check_eps(eps)
    radius = abs(eps) / 2.0
    tail = (-radius, 0.2) if eps > 0 else (-radius, radius)
    jet = hk_jet(k, eps, order)
    plus, gap = _hk_branch_jets(k, eps, jet.order)
    split = BranchSplit(
        smooth=plus,
        gap=lambda offset: hk_branch_gap(k, eps, QUARTER + offset),
        gap_jet=gap,
        window=(-SPLIT_RADIUS, SPLIT_RADIUS),
    )
    return QuadrantFunction(
        func=lambda alpha: double_cone_hk(k, eps, alpha),
        jet=jet,
        seams=(QUARTER - eps,),
        tail=tail,
        label=f"h_{k},{eps:g}",
        split=split,
    )


def sweep_value(n: int, parity: Union[Parity, str], value: LaurentValue) -> float:
    """
    Real number reported for a pairing at lambda = -(n+1)/2.

    The parity carrying the light-cone residue reports the residue (0 when it
    cancels), other parities at a pole their finite part, regular pairings
    their value.
    """
    parity = Parity(parity)
    if parity == residue_parity(n):
        return float(value.residue.real) if value.is_pole else 0.0
    return float(value.finite_part.real)


def stretched_cone_pairing(n: int, parity: Union[Parity, str], eps: float,
                           order: Optional[int] = None) -> LaurentValue:
    """Crofton pairing of the k = n - 2 candidate valuation with C_{n,eps}."""
    _check_dimension(n)
    k = n - 2
    return crofton_apply(n, k, parity, stretched_cone_quadrant(k, eps, order))


def evaluate_on_stretched_cone(n: int, parity: Union[Parity, str], eps: float,
                               order: Optional[int] = None) -> float:
    value = sweep_value(n, parity, stretched_cone_pairing(n, parity, eps, order))
    if not math.isfinite(value):
        raise NumericalError("Non-finite stretched-cone value", code='non_finite',
                             details={'n': n, 'parity': Parity(parity).value, 'eps': eps})
    return value


# ============================================================================
# JET-SUBTRACTED INTEGRALS ON THE QUADRANT
# ============================================================================


_VARIANT_FOR_PARITY = {
    Parity.CONE_SYM: NVariant.PLUS,
    Parity.CONE_ANTISYM: NVariant.MINUS,
    Parity.SPACE: NVariant.SPACE,
    Parity.TIME: NVariant.TIME,
}


def _jet_sign(variant: NVariant, i: int) -> float:
    """Weight of t_i (alpha - pi/4)^i in the variant's moment terms."""
    if variant == NVariant.SPACE:
        return (-1.0) ** i
    if variant == NVariant.TIME:
        return 1.0
    if variant == NVariant.PLUS:
        return 2.0 if i % 2 == 0 else 0.0
    return -2.0 if i % 2 else 0.0


def _tail_width(variant: NVariant, H: QuadrantFunction) -> float:
    """Width of the window next to pi/4 where the jet series represents H."""
    lo, hi = H.tail
    if variant == NVariant.SPACE:
        return min(-lo, QUARTER)
    if variant == NVariant.TIME:
        return min(hi, QUARTER)
    return min(-lo, hi, QUARTER)


def _tail_piece(variant: NVariant, H: QuadrantFunction, lam: float, K: int, width: float) -> float:
    """
    The window next to pi/4, integrated with the endpoint power |t|^(lambda+K)
    as a quadrature weight; |cos 2 alpha| = |2t| sinc(2t) with t = alpha - pi/4.
    """
    coeffs = H.jet.coefficients[K:]

    def q(t):
        return float(np.real(np.polynomial.polynomial.polyval(t, coeffs)))

    def smooth_power(t):
        return 2.0 ** lam * float(np.sinc(2.0 * t / math.pi)) ** lam

    sign = (-1.0) ** K
    if variant == NVariant.TIME:
        return adaptive_quad(lambda a: smooth_power(a - QUARTER) * q(a - QUARTER),
                             QUARTER, QUARTER + width, weight='alg', wvar=(lam + K, 0.0))
    if variant == NVariant.SPACE:
        body = lambda t: sign * q(t)
    else:
        mirror = 1.0 if variant == NVariant.PLUS else -1.0
        body = lambda t: sign * q(t) + mirror * q(-t)
    return adaptive_quad(lambda a: smooth_power(a - QUARTER) * body(a - QUARTER),
                         QUARTER - width, QUARTER, weight='alg', wvar=(0.0, lam + K))


def jet_integral_N(variant: Union[NVariant, str], H: QuadrantFunction, n: int,
                   lam: Optional[float] = None) -> float:
    """
    Jet-subtracted integral of |cos 2 alpha|^lambda against H on the quadrant.

    ``space`` and ``time`` integrate H - J_K(H) over [0, pi/4] and
    [pi/4, pi/2]; ``plus`` and ``minus`` integrate the remainders of
    H(alpha) +- H(pi/2 - alpha) over [0, pi/4]. K = subtraction_order(lambda)
    and lambda defaults to -(n+1)/2.
    """
    variant = NVariant(variant)
    lam = crofton_lambda(n) if lam is None else float(lam)
    K = subtraction_order(lam)
    if H.jet.order < K - 1:
        raise ValidationError("Zonal function jet is too short for this lambda", code='insufficient_jet_order',
                              details={'have': H.jet.order, 'need': K - 1, 'n': n})

    def remainder(alpha):
        return float(np.real(H.remainder(alpha, K)))

    if variant == NVariant.SPACE:
        lo, hi, body = 0.0, QUARTER, remainder
    elif variant == NVariant.TIME:
        lo, hi, body = QUARTER, math.pi / 2, remainder
    elif variant == NVariant.PLUS:
        lo, hi = 0.0, QUARTER
        body = lambda a: remainder(a) + remainder(math.pi / 2 - a)
    else:
        lo, hi = 0.0, QUARTER
        body = lambda a: remainder(a) - remainder(math.pi / 2 - a)

    seams = set()
    for s in H.seams:
        seams.update((s, math.pi / 2 - s))

    def integrand(alpha):
        c = abs(math.cos(2.0 * alpha))
        return c ** lam * body(alpha) if c > 0 else 0.0

    total = 0.0
    width = _tail_width(variant, H)
    if width > 0 and H.jet.order >= K + TAIL_TERMS:
        total += _tail_piece(variant, H, lam, K, width)
        if variant == NVariant.TIME:
            lo = QUARTER + width
        else:
            hi = QUARTER - width
    total += adaptive_quad(integrand, lo, hi, points=sorted(seams))
    logger.debug("N integral", variant=variant.value, n=n, label=H.label, value=total)
    return total


def assemble_from_N(parity: Union[Parity, str], H: QuadrantFunction, n: int,
                    lam: Optional[float] = None) -> LaurentValue:
    """
    f^parity_lambda of the even, pi-periodic extension of H, from the quadrant.

    4 [N + sum_{i<K} t_i s_i 2^{-i-1} M_i(lambda)] with the jet t of H at pi/4
    and the variant's signs s_i.
    """
    parity = Parity(parity)
    variant = _VARIANT_FOR_PARITY[parity]
    lam = crofton_lambda(n) if lam is None else float(lam)
    K = subtraction_order(lam)
    total = LaurentValue.regular(lam, 4.0 * jet_integral_N(variant, H, n, lam))
    for i in range(K):
        sign = _jet_sign(variant, i)
        coeff = H.jet.coefficients[i]
        if sign and coeff:
            total = total + moment_M(i, lam) * (4.0 * coeff * sign * 2.0 ** (-i - 1))
    return total


def n_route_pairing(n: int, parity: Union[Parity, str], eps: float,
                    order: Optional[int] = None) -> LaurentValue:
    """stretched_cone_pairing computed through assemble_from_N."""
    _check_dimension(n)
    k = n - 2
    H = stretched_cone_quadrant(k, eps, order).times(g_density_expression(n, n - k))
    return assemble_from_N(parity, H, n)


# ============================================================================
# OBSTRUCTION DATA
# ============================================================================


def time_obstruction(eps: float) -> float:
    """
    J(eps) = -4 + int_{pi/4}^{pi/4-eps} [f(alpha) - f(pi/4)] (alpha - pi/4)^{-3/2} dalpha

    for eps < 0, with f = (1 - eta^2 tan^2)^{1/2}. The integral is
    non-positive and J(eps) -> -2 pi as eps -> 0-.
    """
    eps = _check_eps(eps)
    if eps > 0:
        raise ValidationError("The time obstruction is defined for eps < 0", code='bad_eps',
                              details={'eps': eps})
    eta = math.tan(QUARTER + eps)
    eta2 = eta * eta
    f_quarter = math.sqrt(1.0 - eta2)
    a, b = QUARTER, QUARTER - eps

    def f(alpha):
        return math.sqrt(max(1.0 - eta2 * math.tan(alpha) ** 2, 0.0))

    # f(alpha) - f(a) = -eta^2 sin(alpha - a)(tan a + tan alpha) / (cos a cos alpha (f(alpha) + f(a)))
    def smooth(alpha):
        d = alpha - a
        sinc = float(np.sinc(d / math.pi))
        return -eta2 * sinc * (math.tan(a) + math.tan(alpha)) / (
            math.cos(a) * math.cos(alpha) * (f(alpha) + f_quarter))

    return -4.0 + adaptive_quad(smooth, a, b, weight='alg', wvar=(-0.5, 0.0))


def seam_gap_derivative(eps: float) -> float:
    """d/dalpha (cos - eta sin) at pi/4: the k = 1 branch jump, -sqrt(2) at eps = 0."""
    eta = math.tan(QUARTER + eps)
    return -(1.0 + eta) / math.sqrt(2.0)


def jet_order_conventions(n: int) -> Dict[str, Optional[int]]:
    """Subtraction orders in use at lambda = -(n+1)/2, recorded with every verdict."""
    odd = n % 2 == 1
    return {
        'subtraction_terms': subtraction_order(crofton_lambda(n)),
        'pole_order': math.ceil((n + 1) / 2),
        'odd_minus': (n - 1) // 2 if odd else None,
        'plus_n3mod4': (n - 3) // 4 if n % 4 == 3 else None,
    }


# ============================================================================
# SWEEPS
# ============================================================================


def _check_grid(grid: Sequence[float]) -> List[float]:
    mags = sorted((abs(float(e)) for e in grid), reverse=True)
    if len(mags) < MIN_RECORDS:
        raise ValidationError("A sweep needs at least 8 stretch values", code='too_few_records',
                              details={'count': len(mags)})
    if any(b >= a for a, b in zip(mags, mags[1:])):
        raise ValidationError("Stretch values must be distinct", code='bad_grid')
    for mag in mags:
        _check_eps(mag)
    return mags


_SIDE_ORDER = (Side.PLUS, Side.MINUS)


def _sweep_value(task: Tuple[int, Parity, float, Optional[int]]) -> float:
    n, parity, eps, order = task
    return evaluate_on_stretched_cone(n, parity, eps, order)


def sweep(n: int, parity: Union[Parity, str], grid: Sequence[float],
          sides: Sequence[Union[Side, str]] = _SIDE_ORDER, threads: Optional[int] = None,
          order: Optional[int] = None) -> List[SweepRecord]:
    """
    One record per (side, |eps|), ordered by side then decreasing |eps|.

    Records are computed on up to ``threads`` worker processes (LORVAL_THREADS
    by default). The quadrature callbacks are Python code holding the GIL, so
    a thread pool would run them one at a time. The output does not depend on
    the worker count.
    """
    _check_dimension(n)
    parity = Parity(parity)
    mags = _check_grid(grid)
    requested = {Side(s) for s in sides}
    if not requested:
        raise ValidationError("At least one side is required", code='bad_side')
    ordered_sides = [s for s in _SIDE_ORDER if s in requested]
    points = [(side, mag if side == Side.PLUS else -mag) for side in ordered_sides for mag in mags]
    tasks = [(n, parity, eps, order) for _, eps in points]
    workers = max(1, threads or settings.THREADS)

    logger.info("Sweep started", n=n, parity=parity.value, points=len(mags),
                sides=[s.value for s in ordered_sides], workers=workers)

    if workers == 1:
        values = [_sweep_value(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as executor:
            values = list(executor.map(_sweep_value, tasks))

    records = [SweepRecord(n=n, k=n - 2, parity=parity, side=side, eps=eps, value=value)
               for (side, eps), value in zip(points, values)]
    logger.info("Sweep finished", n=n, parity=parity.value, records=len(records))
    return records


def sweep_from_config(config: SweepConfig) -> List[SweepRecord]:
    ok, message = config.validate()
    if not ok:
        raise ConfigurationError(message, code='bad_sweep_config')
    return sweep(config.n, config.parity, config.grid(), config.sides,
                 threads=config.threads, order=config.jet_order)


def reduced_dimension(n: int, j: int) -> int:
    """Ambient dimension of the reduced problem for homogeneity j (k = n' - 2)."""
    if not 1 <= j <= n - 2:
        raise ValidationError("Reduction needs 1 <= j <= n - 2", code='bad_dimension',
                              details={'n': n, 'j': j})
    return j + 2


def sweep_homogeneity(n: int, j: int, parity: Union[Parity, str], grid: Sequence[float],
                      sides: Sequence[Union[Side, str]] = _SIDE_ORDER,
                      threads: Optional[int] = None) -> List[SweepRecord]:
    """
    Sweep for the j-homogeneous candidate in R^n.

    Every j-subspace lies in a mixed-signature (j+2)-subspace, and the
    restriction there is the k = n' - 2 problem in n' = j + 2.
    """
    reduced = reduced_dimension(n, j)
    logger.info("Sweep reduced", n=n, j=j, reduced_n=reduced)
    return sweep(reduced, parity, grid, sides, threads=threads)


# ============================================================================
# CLASSIFICATION
# ============================================================================


def richardson_limit(eps: Sequence[float], values: Sequence[float], order: Optional[float] = None,
                     tolerance: float = LIMIT_TOLERANCE) -> Tuple[float, bool]:
    """
    Extrapolate values(eps) to eps -> 0 along a decreasing |eps| grid.

    With ``order`` p the error is taken as C |eps|^p (Richardson); without it
    the rate is estimated from consecutive differences (Aitken delta squared).
    The limit is stable when the last three extrapolants agree to
    ``tolerance`` relative to max(1, |limit|).
    """
    mags = np.abs(np.asarray(eps, dtype=float))
    v = np.asarray(values, dtype=float)
    if len(v) < 4:
        raise ValidationError("Extrapolation needs at least four values", code='too_few_records',
                              details={'count': len(v)})

    extrapolants = []
    if order is not None:
        for i in range(len(v) - 1):
            r = (mags[i + 1] / mags[i]) ** order
            extrapolants.append((v[i + 1] - r * v[i]) / (1.0 - r))
    else:
        for i in range(len(v) - 2):
            d1 = v[i + 2] - v[i + 1]
            d2 = v[i + 2] - 2.0 * v[i + 1] + v[i]
            if abs(d2) <= 1e-13 * max(1.0, abs(v[i + 2])):
                extrapolants.append(v[i + 2])
            else:
                extrapolants.append(v[i + 2] - d1 * d1 / d2)

    last = np.array(extrapolants[-3:])
    limit = float(last[-1])
    stable = bool(np.all(np.isfinite(last)) and np.ptp(last) <= tolerance * max(1.0, abs(limit)))
    return limit, stable


@dataclass
class LogFit:
    """Least-squares fit of value against log(1/|eps|) on one side"""
    slope: float
    intercept: float
    stderr: float
    r_squared: float
    tail_slope: float
    monotone: bool
    span: float

    @property
    def divergent(self) -> bool:
        if self.stderr == 0.0 and self.slope == 0.0:
            return False
        significant = abs(self.slope) > SLOPE_SIGNIFICANCE * self.stderr
        consistent = (np.sign(self.tail_slope) == np.sign(self.slope)
                      and abs(self.tail_slope - self.slope) <= TAIL_SLOPE_AGREEMENT * abs(self.slope))
        return bool(significant and self.r_squared >= MIN_R_SQUARED and consistent and self.monotone
                    and abs(self.slope) * self.span > 1e-6 * max(1.0, abs(self.intercept)))


def log_fit(mags: np.ndarray, values: np.ndarray) -> LogFit:
    x = np.log(1.0 / mags)
    span = float(np.ptp(x))
    if np.ptp(values) == 0.0:
        return LogFit(0.0, float(values[0]), 0.0, 0.0, 0.0, False, span)
    fit = stats.linregress(x, values)
    tail = x >= x.max() - TAIL_DECADES * math.log(10.0)
    if tail.sum() >= 3:
        tail_slope = float(np.polyfit(x[tail], values[tail], 1)[0])
        steps = np.diff(values[tail])
    else:
        tail_slope = float(fit.slope)
        steps = np.diff(values)
    monotone = bool(np.all(steps > 0) or np.all(steps < 0))
    return LogFit(float(fit.slope), float(fit.intercept), float(fit.stderr), float(fit.rvalue ** 2),
                  tail_slope, monotone, span)


def _single(values) -> Optional[object]:
    distinct = set(values)
    return distinct.pop() if len(distinct) == 1 else None


def fit_divergence(records: Sequence[SweepRecord], order: Optional[float] = None) -> DivergenceVerdict:
    """
    Classify a sweep.

    A side is log-divergent when value ~ c log(1/|eps|) + b fits with a
    significant slope, r^2 >= 0.99, a stable slope over the last two decades
    and monotone values there. Otherwise the one-sided limits are
    extrapolated: stable limits that differ by more than ten times the
    tolerance are a mismatch, stable agreeing limits are convergent, and
    unstable bounded sweeps are an obstruction.
    """
    records = list(records)
    by_side: Dict[Side, List[SweepRecord]] = {}
    for record in records:
        by_side.setdefault(record.side, []).append(record)
    if not by_side:
        raise ValidationError("No sweep records", code='too_few_records', details={'count': 0})
    for side, rows in by_side.items():
        if len(rows) < MIN_RECORDS:
            raise ValidationError("At least 8 records per side are required", code='too_few_records',
                                  details={'side': side.value, 'count': len(rows)})

    n = _single(r.n for r in records)
    parity = _single(r.parity for r in records)

    series: Dict[Side, Tuple[np.ndarray, np.ndarray]] = {}
    fits: Dict[Side, LogFit] = {}
    for side in [s for s in _SIDE_ORDER if s in by_side]:
        rows = sorted(by_side[side], key=lambda r: -abs(r.eps))
        mags = np.array([abs(r.eps) for r in rows])
        if np.any(np.diff(mags) >= 0):
            raise ValidationError("Stretch values must be distinct within a side", code='bad_grid',
                                  details={'side': side.value})
        values = np.array([r.value for r in rows])
        series[side] = (mags, values)
        fits[side] = log_fit(mags, values)

    metadata = {
        'slopes': {s.value: f.slope for s, f in fits.items()},
        'tail_slopes': {s.value: f.tail_slope for s, f in fits.items()},
        'r_squared': {s.value: f.r_squared for s, f in fits.items()},
        'records': len(records),
    }
    if n is not None:
        metadata['jet_orders'] = jet_order_conventions(n)

    divergent = [s for s, f in fits.items() if f.divergent]
    limits: Dict[str, Optional[float]] = {}
    stable: Dict[str, bool] = {}
    for side, (mags, values) in series.items():
        if side in divergent:
            limits[side.value] = None
            continue
        limits[side.value], stable[side.value] = richardson_limit(mags, values, order=order)
    metadata['stable'] = stable

    if divergent:
        side = max(divergent, key=lambda s: abs(fits[s].slope))
        verdict = DivergenceVerdict(mode=VerdictMode.LOG_DIVERGENT, fitted_slope=fits[side].slope,
                                    r_squared=fits[side].r_squared, limits=limits, n=n, parity=parity,
                                    metadata={**metadata, 'divergent_sides': [s.value for s in divergent]})
        logger.info("Sweep classified", mode=verdict.mode.value, slope=verdict.fitted_slope, n=n)
        return verdict

    best = max(fits.values(), key=lambda f: abs(f.slope))
    finite = [v for v in limits.values() if v is not None]
    tolerance = LIMIT_TOLERANCE * max([1.0] + [abs(v) for v in finite])
    metadata['tolerance'] = tolerance
    gap = abs(limits['plus'] - limits['minus']) if len(finite) == 2 else 0.0

    if not all(stable.values()):
        mode = VerdictMode.BOUNDED_NONZERO_OBSTRUCTION
    elif gap > MISMATCH_FACTOR * tolerance:
        mode = VerdictMode.ONE_SIDED_MISMATCH
    else:
        mode = VerdictMode.CONVERGENT
    verdict = DivergenceVerdict(mode=mode, fitted_slope=best.slope, limit_gap=gap, r_squared=best.r_squared,
                                limits=limits, n=n, parity=parity, metadata=metadata)
    logger.info("Sweep classified", mode=mode.value, gap=gap, n=n)
    return verdict


# ============================================================================
# POSITIVE CONTROL
# ============================================================================


def _sqrt_extrapolate(mags: Sequence[float], values: Sequence[float]) -> float:
    """Limit at eps = 0 of a function smooth in sqrt|eps|, from the smallest |eps|."""
    count = max(MIN_RECORDS, len(mags) // 2)
    s = np.sqrt(np.asarray(mags, dtype=float)[-count:])
    v = np.asarray(values, dtype=float)[-count:]
    if np.ptp(v) == 0.0:
        return float(v[-1])
    degree = min(5, len(s) - 2)
    return float(np.polyfit(s, v, degree)[-1])


def continuity_control(n: int, kind: Union[ValuationKind, str],
                       grid: Optional[Sequence[float]] = None) -> ContinuityReport:
    """
    f_T or f_S on C_{n,eps} (k = n - 1) against the value on C^n.

    These valuations are continuous, so both one-sided limits must reproduce
    the value on the unstretched cone.
    """
    valuation = InvariantValuation(kind, n)
    if grid is None:
        grid = np.geomspace(settings.SWEEP_EPS_MAX, settings.SWEEP_EPS_MIN, settings.SWEEP_POINTS)
    mags = _check_grid(grid)
    target = evaluate(valuation, StretchedCone(n, 0.0))
    limits = {}
    for side in _SIDE_ORDER:
        sign = 1.0 if side == Side.PLUS else -1.0
        values = [evaluate(valuation, StretchedCone(n, sign * mag)) for mag in mags]
        limits[side.value] = _sqrt_extrapolate(mags, values)
    error = max(abs(v - target) for v in limits.values())
    logger.info("Continuity control", n=n, kind=valuation.kind.value, target=target, error=error)
    return ContinuityReport(n=n, kind=valuation.kind, target=target, limits=limits, max_error=error)
