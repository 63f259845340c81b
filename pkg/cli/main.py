"""
Command-line front end for lorval.

Each subcommand resolves its arguments into a :class:`RunConfig`, echoes it
as the first output line and dispatches to the module services. Errors
exit with their class's ``exit_code``; usage errors exit with 64.
"""

import argparse
import contextlib
import json
import math
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np

from bodies.schemas import dump_body, parse_body
from bodies.services import double_cone_hk, zonal_surface_measure
from cli.schemas import RunConfig, parse_zonal_measure
from core.choices import (
    EXIT_INPUT_ERROR,
    EXIT_OK,
    EXIT_USAGE,
    PARITY_CHOICES,
    VALUATION_KIND_CHOICES,
    Parity,
    Sheet,
    Side,
)
from core.exceptions import LorvalBaseException, ValidationError
from core.utils.logger import StructuredLogger, setup_logging
from experiments.models import SweepConfig
from experiments.schemas import FLOAT_FORMAT, read_records_csv, write_records_csv
from experiments.services import fit_divergence, sweep_from_config
from lorval import settings
from mero.schemas import parse_fourier
from mero.series import moment_I
from mero.services import f_lambda
from valuations.cone_area import cone_area_identity, random_patch
from valuations.models import InvariantValuation
from valuations.services import evaluate
from zonal.services import cosine_transform

logger = StructuredLogger(__name__)

class UsageError(Exception):
    """Raised instead of argparse's SystemExit(2)."""


class LorvalArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


# ============================================================================
# ARGUMENT PARSING
# ============================================================================


def _complex_arg(text: str) -> List[float]:
    """'RE' or 'RE,IM' -> [re, im]"""
    parts = text.split(',')
    if len(parts) > 2:
        raise argparse.ArgumentTypeError(f"expected RE[,IM], got {text!r}")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE[,IM], got {text!r}")
    return values + [0.0] * (2 - len(values))


def _seed_arg(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _choice_help(choices: Sequence[Tuple[str, str]]) -> str:
    return "; ".join(f"{value}: {label}" for value, label in choices)


def build_parser() -> LorvalArgumentParser:
    common = LorvalArgumentParser(add_help=False)
    common.add_argument('--output', default=None, help="Write to this file instead of stdout")
    common.add_argument('--seed', type=_seed_arg, default=None, help="Monte-Carlo seed (LORVAL_SEED)")

    parser = LorvalArgumentParser(prog='lorval', description="Lorentz-invariant valuations toolkit")
    sub = parser.add_subparsers(dest='subcommand', required=True, parser_class=LorvalArgumentParser)

    p = sub.add_parser('valuate', parents=[common], help="f_T or f_S of a body")
    body = p.add_mutually_exclusive_group(required=True)
    body.add_argument('--body', help="Body JSON file")
    body.add_argument('--body-json', help="Inline body JSON")
    p.add_argument('--which', choices=[value for value, _ in VALUATION_KIND_CHOICES], required=True,
                   help=_choice_help(VALUATION_KIND_CHOICES))
    p.add_argument('--dump-body', action='store_true', help="Echo the ingested body document")

    p = sub.add_parser('hk', parents=[common], help="Normalized k-support of the stretched double cone")
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--eps', type=float, default=0.0)
    p.add_argument('--grid', type=int, default=181, help="Number of elevations in [-pi/2, pi/2]")

    p = sub.add_parser('mero', help="Meromorphic regularization")
    mero = p.add_subparsers(dest='command', required=True, parser_class=LorvalArgumentParser)
    q = mero.add_parser('ik', parents=[common], help="I_k(lambda)")
    q.add_argument('--k', type=int, required=True)
    q.add_argument('--lambda', dest='lam', type=_complex_arg, required=True, metavar='RE[,IM]')
    q = mero.add_parser('flambda', parents=[common], help="f_lambda of a Fourier test function")
    q.add_argument('--parity', choices=[value for value, _ in PARITY_CHOICES], required=True,
                   help=_choice_help(PARITY_CHOICES))
    q.add_argument('--lambda', dest='lam', type=_complex_arg, required=True, metavar='RE[,IM]')
    phi = q.add_mutually_exclusive_group(required=True)
    phi.add_argument('--phi', help="Fourier test function JSON file")
    phi.add_argument('--phi-json', help="Inline Fourier test function JSON")

    p = sub.add_parser('cosine', parents=[common], help="Cosine transform of a zonal measure")
    p.add_argument('--k', type=int, required=True)
    measure = p.add_mutually_exclusive_group(required=True)
    measure.add_argument('--measure', help="Zonal measure or rotation body JSON file")
    measure.add_argument('--measure-json', help="Inline zonal measure or rotation body JSON")
    p.add_argument('--grid', type=int, default=181)

    p = sub.add_parser('sweep', parents=[common], help="Divergence sweep on stretched double cones")
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--parity', choices=[value for value, _ in PARITY_CHOICES], required=True,
                   help=_choice_help(PARITY_CHOICES))
    p.add_argument('--eps-min', type=float, default=None)
    p.add_argument('--eps-max', type=float, default=None)
    p.add_argument('--points', type=int, default=None)
    p.add_argument('--side', choices=['plus', 'minus', 'both'], default='both')
    p.add_argument('--threads', type=int, default=None)
    p.add_argument('--jet-order', type=int, default=None)

    p = sub.add_parser('fit', parents=[common], help="Classify a sweep CSV")
    p.add_argument('--input', required=True)
    p.add_argument('--richardson-order', type=float, default=None)

    p = sub.add_parser('cone-area', parents=[common], help="Cone-area identity on random hyperboloid patches")
    p.add_argument('--sheet', choices=[s.value for s in Sheet], required=True)
    p.add_argument('--count', type=int, default=10)
    p.add_argument('--vertices', type=int, default=5)

    return parser


def _load_json(path: Optional[str], inline: Optional[str]) -> Dict[str, Any]:
    try:
        if path is not None:
            return json.loads(Path(path).read_text(encoding='utf-8'))
        return json.loads(inline)
    except OSError as exc:
        raise ValidationError("Cannot read input file", code='bad_input', details={'path': path}) from exc
    except json.JSONDecodeError as exc:
        raise ValidationError("Input is not valid JSON", code='bad_json',
                              details={'path': path, 'error': str(exc)}) from exc


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Resolve parsed arguments (files read, defaults filled) into a RunConfig."""
    name = args.subcommand
    if name == 'valuate':
        params = {'body': _load_json(args.body, args.body_json), 'which': args.which,
                  'dump_body': args.dump_body}
    elif name == 'hk':
        params = {'k': args.k, 'eps': args.eps, 'grid': args.grid}
    elif name == 'mero' and args.command == 'ik':
        params = {'k': args.k, 'lambda': args.lam}
    elif name == 'mero':
        params = {'parity': args.parity, 'lambda': args.lam, 'phi': _load_json(args.phi, args.phi_json)}
    elif name == 'cosine':
        params = {'k': args.k, 'measure': _load_json(args.measure, args.measure_json), 'grid': args.grid}
    elif name == 'sweep':
        defaults = SweepConfig.from_env(args.n, args.parity)
        params = {
            'n': args.n,
            'parity': args.parity,
            'eps_min': args.eps_min if args.eps_min is not None else defaults.eps_min,
            'eps_max': args.eps_max if args.eps_max is not None else defaults.eps_max,
            'points': args.points if args.points is not None else defaults.points,
            'side': args.side,
            'threads': args.threads if args.threads is not None else defaults.threads,
            'jet_order': args.jet_order if args.jet_order is not None else defaults.jet_order,
        }
    elif name == 'fit':
        params = {'input': args.input, 'richardson_order': args.richardson_order}
    else:
        params = {'sheet': args.sheet, 'count': args.count, 'vertices': args.vertices}

    return RunConfig(
        subcommand=name,
        command=getattr(args, 'command', None),
        params=params,
        output=args.output,
        seed=args.seed if args.seed is not None else settings.SEED,
    )


# ============================================================================
# HANDLERS
# ============================================================================


def _lam(pair: Sequence[float]) -> Union[float, complex]:
    re, im = pair
    return complex(re, im) if im else float(re)


def _write_json(payload: Dict[str, Any], stream: TextIO) -> None:
    stream.write(json.dumps(payload, indent=2, sort_keys=True) + '\n')


def _write_alpha_csv(alphas: np.ndarray, values: np.ndarray, stream: TextIO) -> None:
    stream.write('alpha,value\n')
    for alpha, value in zip(alphas, values):
        stream.write(f"{FLOAT_FORMAT % alpha},{FLOAT_FORMAT % value}\n")


def _check_grid_size(points: int) -> None:
    if points < 2:
        raise ValidationError("Grids need at least 2 points", code='bad_grid', details={'grid': points})


def run_valuate(config: RunConfig, stream: TextIO) -> None:
    params = config.params
    body = parse_body(params['body'])
    value = evaluate(InvariantValuation(params['which'], body.n), body)
    payload = {'value': value}
    if params.get('dump_body'):
        payload['body'] = dump_body(body)
    _write_json(payload, stream)


def run_hk(config: RunConfig, stream: TextIO) -> None:
    k, eps, points = config.params['k'], config.params['eps'], config.params['grid']
    _check_grid_size(points)
    if not abs(eps) < math.pi / 4:
        raise ValidationError("Stretch must satisfy |eps| < pi/4", code='bad_eps', details={'eps': eps})
    alphas = np.linspace(-math.pi / 2, math.pi / 2, points)
    _write_alpha_csv(alphas, double_cone_hk(k, eps, alphas), stream)


def run_mero(config: RunConfig, stream: TextIO) -> None:
    params = config.params
    lam = _lam(params['lambda'])
    if config.command == 'ik':
        value = moment_I(params['k'], lam)
    else:
        value = f_lambda(params['parity'], parse_fourier(params['phi']), lam)
    _write_json(value.to_dict(), stream)


def run_cosine(config: RunConfig, stream: TextIO) -> None:
    k, document, points = config.params['k'], config.params['measure'], config.params['grid']
    _check_grid_size(points)
    if 'atoms' in document:
        measure = parse_zonal_measure(document)
    else:
        measure = zonal_surface_measure(parse_body(document), k)
    alphas = np.linspace(-math.pi / 2, math.pi / 2, points)
    _write_alpha_csv(alphas, cosine_transform(k, measure)(alphas), stream)


def run_sweep(config: RunConfig, stream: TextIO) -> None:
    params = config.params
    sides = (Side.PLUS, Side.MINUS) if params['side'] == 'both' else (Side(params['side']),)
    sweep_config = SweepConfig(
        n=params['n'],
        parity=Parity(params['parity']),
        eps_min=params['eps_min'],
        eps_max=params['eps_max'],
        points=params['points'],
        sides=sides,
        threads=params['threads'],
        jet_order=params['jet_order'],
    )
    write_records_csv(sweep_from_config(sweep_config), stream)


def run_fit(config: RunConfig, stream: TextIO) -> None:
    records = read_records_csv(config.params['input'])
    verdict = fit_divergence(records, order=config.params.get('richardson_order'))
    _write_json(verdict.model_dump(mode='json'), stream)


def run_cone_area(config: RunConfig, stream: TextIO) -> None:
    params = config.params
    if params['count'] < 1:
        raise ValidationError("count must be positive", code='bad_count', details={'count': params['count']})
    sheet = Sheet(params['sheet'])
    rng = np.random.default_rng(config.seed)
    patches = []
    for _ in range(params['count']):
        lhs, rhs = cone_area_identity(sheet, random_patch(sheet, rng, vertices=params['vertices']))
        patches.append({'lhs': lhs, 'rhs': rhs, 'relative_error': abs(lhs - rhs) / max(abs(lhs), 1e-300)})
    _write_json({
        'sheet': sheet.value,
        'patches': patches,
        'max_relative_error': max(p['relative_error'] for p in patches),
    }, stream)


HANDLERS: Dict[str, Callable[[RunConfig, TextIO], None]] = {
    'valuate': run_valuate,
    'hk': run_hk,
    'mero': run_mero,
    'cosine': run_cosine,
    'sweep': run_sweep,
    'fit': run_fit,
    'cone-area': run_cone_area,
}


# ============================================================================
# ENTRY POINTS
# ============================================================================


def _report(exc: LorvalBaseException, stderr: TextIO) -> None:
    stderr.write(json.dumps(exc.to_dict(), sort_keys=True, default=str) + "\n")


def run(config: RunConfig, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    """Execute a resolved run; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    log = logger.bind(subcommand=config.subcommand, command=config.command)
    log.info("Run started", seed=config.seed)
    try:
        with contextlib.ExitStack() as stack:
            stream = stdout
            if config.output:
                stream = stack.enter_context(open(config.output, 'w', newline='', encoding='utf-8'))
            stream.write(config.to_echo() + '\n')
            HANDLERS[config.subcommand](config, stream)
    except LorvalBaseException as exc:
        code = exc.exit_code
        log.warning("Run failed", error_code=exc.error_code, exit_code=code)
        _report(exc, stderr)
        return code
    except OSError as exc:
        _report(ValidationError("Cannot write output", code='bad_output',
                                details={'path': config.output, 'error': str(exc)}), stderr)
        return EXIT_INPUT_ERROR
    log.info("Run finished")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None,
         stderr: Optional[TextIO] = None) -> int:
    stderr = stderr or sys.stderr
    setup_logging(settings.LOGGING)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return EXIT_USAGE
    try:
        config = config_from_args(args)
    except LorvalBaseException as exc:
        _report(exc, stderr)
        return exc.exit_code
    return run(config, stdout, stderr)
