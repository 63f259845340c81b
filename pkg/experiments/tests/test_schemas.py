"""
Tests for sweep records, verdicts, the CSV codec and the sweep config.
"""

import io
from unittest import TestCase

from pydantic import ValidationError as PydanticValidationError

from core.choices import Parity, Side, VerdictMode
from core.exceptions import ValidationError
from experiments.models import SweepConfig
from experiments.schemas import (
    DivergenceVerdict,
    SweepRecord,
    read_records_csv,
    records_to_csv,
)


def record(eps, value, side=None, n=3, parity=Parity.SPACE):
    side = side or (Side.PLUS if eps > 0 else Side.MINUS)
    return SweepRecord(n=n, k=n - 2, parity=parity, side=side, eps=eps, value=value)


class SweepRecordTests(TestCase):
    """SweepRecord invariants"""

    def test_reduction_enforced(self):
        """k must equal n - 2"""
        with self.assertRaises(PydanticValidationError):
            SweepRecord(n=5, k=2, parity='S', side='plus', eps=0.1, value=1.0)

    def test_side_matches_sign(self):
        """A plus record needs eps > 0"""
        with self.assertRaises(PydanticValidationError):
            SweepRecord(n=3, k=1, parity='S', side='plus', eps=-0.1, value=1.0)

    def test_zero_eps(self):
        """eps = 0 is not a sweep point"""
        with self.assertRaises(PydanticValidationError):
            SweepRecord(n=3, k=1, parity='S', side='minus', eps=0.0, value=1.0)

    def test_parses_strings(self):
        """Enums are parsed from their values"""
        r = SweepRecord(n=4, k=2, parity='antisym', side='minus', eps=-1e-3, value=2.5)
        self.assertEqual(r.parity, Parity.CONE_ANTISYM)
        self.assertEqual(r.side, Side.MINUS)


class VerdictTests(TestCase):
    """DivergenceVerdict invariants"""

    def test_log_divergent_needs_fit_quality(self):
        """r^2 below 0.99 cannot back a log-divergent verdict"""
        with self.assertRaises(PydanticValidationError):
            DivergenceVerdict(mode=VerdictMode.LOG_DIVERGENT, fitted_slope=1.0, r_squared=0.9)

    def test_json(self):
        """Verdicts serialize with the mode value"""
        verdict = DivergenceVerdict(mode='OneSidedMismatch', limit_gap=2.0, limits={'plus': -2.0, 'minus': 0.0})
        data = verdict.model_dump(mode='json')
        self.assertEqual(data['mode'], 'OneSidedMismatch')
        self.assertEqual(data['limits']['plus'], -2.0)


class CsvTests(TestCase):
    """CSV writing and reading"""

    def test_format(self):
        """Header, LF endings and %.12e floats"""
        text = records_to_csv([record(0.1, 1.5), record(-0.1, -2.0)])
        lines = text.split('\n')
        self.assertEqual(lines[0], 'n,k,parity,side,eps,value')
        self.assertEqual(lines[1], '3,1,S,plus,1.000000000000e-01,1.500000000000e+00')
        self.assertEqual(lines[2], '3,1,S,minus,-1.000000000000e-01,-2.000000000000e+00')
        self.assertNotIn('\r', text)

    def test_read_skips_comments(self):
        """Comment lines before the header are ignored"""
        text = '# {"subcommand": "sweep"}\n' + records_to_csv([record(0.01, 3.0), record(0.001, 4.0)])
        records = read_records_csv(io.StringIO(text))
        self.assertEqual(len(records), 2)
        self.assertEqual(records[1].eps, 0.001)
        self.assertEqual(records[0].value, 3.0)

    def test_missing_column(self):
        """Files without the value column are rejected"""
        with self.assertRaises(ValidationError) as ctx:
            read_records_csv(io.StringIO('n,k,parity,side,eps\n3,1,S,plus,0.1\n'))
        self.assertEqual(ctx.exception.code, 'bad_csv')

    def test_bad_row(self):
        """Invalid rows report their line number"""
        with self.assertRaises(ValidationError) as ctx:
            read_records_csv(io.StringIO('n,k,parity,side,eps,value\n3,2,S,plus,0.1,1.0\n'))
        self.assertEqual(ctx.exception.details['row'], 2)

    def test_missing_file(self):
        """A path that cannot be opened is an input error"""
        with self.assertRaises(ValidationError) as ctx:
            read_records_csv('/nonexistent/sweep.csv')
        self.assertEqual(ctx.exception.code, 'bad_input')
        self.assertEqual(ctx.exception.details['path'], '/nonexistent/sweep.csv')


class SweepConfigTests(TestCase):
    """SweepConfig validation and grid"""

    def test_defaults_valid(self):
        """The default grid is 16 points from 1e-1 to 1e-5"""
        config = SweepConfig(n=3, parity=Parity.SPACE)
        self.assertEqual(config.validate(), (True, None))
        grid = config.grid()
        self.assertEqual(len(grid), 16)
        self.assertAlmostEqual(grid[0], 1e-1, places=15)
        self.assertAlmostEqual(grid[-1], 1e-5, places=17)
        self.assertTrue(all(a > b for a, b in zip(grid, grid[1:])))
        self.assertEqual(config.k, 1)

    def test_invalid(self):
        """Dimension, grid range and point count are checked"""
        self.assertFalse(SweepConfig(n=2, parity=Parity.SPACE).validate()[0])
        self.assertFalse(SweepConfig(n=3, parity=Parity.SPACE, eps_min=0.0).validate()[0])
        self.assertFalse(SweepConfig(n=3, parity=Parity.SPACE, eps_max=0.5).validate()[0])
        self.assertFalse(SweepConfig(n=3, parity=Parity.SPACE, points=4).validate()[0])
        self.assertFalse(SweepConfig(n=3, parity=Parity.SPACE, sides=()).validate()[0])
        self.assertFalse(SweepConfig(n=9, parity=Parity.SPACE, jet_order=10).validate()[0])

    def test_from_env(self):
        """Settings provide the grid and thread count"""
        config = SweepConfig.from_env(n=4, parity='T')
        self.assertEqual(config.parity, Parity.TIME)
        self.assertGreaterEqual(config.threads, 1)
        self.assertEqual(config.sides, (Side.PLUS, Side.MINUS))
