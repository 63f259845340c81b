"""
Pydantic schemas for sweep records and divergence verdicts, plus the CSV codec.

Sweep CSV files have the header ``n,k,parity,side,eps,value`` and floats are
written with ``%.12e``. Lines starting with ``#`` are comments (the CLI puts
its resolved configuration there) and are skipped on reading.
"""

import csv
import io
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, TextIO, Union

from pydantic import BaseModel, Field, ValidationError as PydanticValidationError, model_validator

from core.choices import Parity, Side, ValuationKind, VerdictMode
from core.exceptions import ValidationError

CSV_COLUMNS = ('n', 'k', 'parity', 'side', 'eps', 'value')
FLOAT_FORMAT = '%.12e'


class SweepRecord(BaseModel):
    """One evaluation of a candidate valuation on a stretched double cone"""
    n: int = Field(..., ge=3)
    k: int = Field(..., ge=1)
    parity: Parity
    side: Side
    eps: float
    value: float

    @model_validator(mode='after')
    def validate_reduction(self):
        if self.k != self.n - 2:
            raise ValueError('Sweeps are run in the reduced problem k = n - 2')
        if self.eps == 0.0:
            raise ValueError('eps = 0 is the unstretched cone and has no value')
        if (self.eps > 0) != (self.side == Side.PLUS):
            raise ValueError('Side must match the sign of eps')
        return self

    class Config:
        json_schema_extra = {
            "example": {"n": 3, "k": 1, "parity": "S", "side": "plus", "eps": 1e-3, "value": 9.81}
        }


class DivergenceVerdict(BaseModel):
    """Failure-mode classification of a sweep"""
    mode: VerdictMode
    fitted_slope: Optional[float] = None
    limit_gap: Optional[float] = None
    r_squared: Optional[float] = None
    limits: Dict[str, Optional[float]] = Field(default_factory=dict)
    n: Optional[int] = None
    parity: Optional[Parity] = None
    metadata: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode='after')
    def validate_log_fit(self):
        if self.mode == VerdictMode.LOG_DIVERGENT and (self.r_squared is None or self.r_squared < 0.99):
            raise ValueError('A log-divergent verdict needs r^2 >= 0.99')
        return self

    class Config:
        json_schema_extra = {
            "example": {
                "mode": "OneSidedMismatch",
                "limit_gap": 2.0,
                "r_squared": 0.41,
                "limits": {"plus": -2.0, "minus": 0.0},
                "n": 3,
                "parity": "antisym",
            }
        }


class ContinuityReport(BaseModel):
    """One-sided limits of a continuous valuation on C_{n,eps} against C^n"""
    n: int
    kind: ValuationKind
    target: float
    limits: Dict[str, float]
    max_error: float


# ============================================================================
# CSV
# ============================================================================


def _format_row(record: SweepRecord) -> Dict[str, str]:
    return {
        'n': str(record.n),
        'k': str(record.k),
        'parity': record.parity.value,
        'side': record.side.value,
        'eps': FLOAT_FORMAT % record.eps,
        'value': FLOAT_FORMAT % record.value,
    }


def write_records_csv(records: Iterable[SweepRecord], stream: TextIO) -> None:
    writer = csv.DictWriter(stream, fieldnames=list(CSV_COLUMNS), lineterminator='\n')
    writer.writeheader()
    for record in records:
        writer.writerow(_format_row(record))


def records_to_csv(records: Iterable[SweepRecord]) -> str:
    buffer = io.StringIO()
    write_records_csv(records, buffer)
    return buffer.getvalue()


def read_records_csv(source: Union[str, Path, TextIO]) -> List[SweepRecord]:
    """Parse a sweep CSV (path or open stream); comment lines are skipped."""
    if isinstance(source, (str, Path)):
        try:
            with open(source, newline='', encoding='utf-8') as handle:
                return read_records_csv(handle)
        except OSError as exc:
            raise ValidationError("Cannot read input file", code='bad_input',
                                  details={'path': str(source), 'error': exc.strerror}) from exc

    lines = [line for line in source if line.strip() and not line.startswith('#')]
    reader = csv.DictReader(lines)
    missing = set(CSV_COLUMNS) - set(reader.fieldnames or ())
    if missing:
        raise ValidationError("Sweep CSV is missing columns", code='bad_csv',
                              details={'missing': sorted(missing)})
    records = []
    for number, row in enumerate(reader, start=2):
        try:
            records.append(SweepRecord.model_validate({key: row[key] for key in CSV_COLUMNS}))
        except PydanticValidationError as exc:
            raise ValidationError("Invalid sweep record", code='bad_csv',
                                  details={'row': number, 'errors': exc.errors(include_url=False)}) from exc
    return records
