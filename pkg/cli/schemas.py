"""
Pydantic schemas for CLI runs.

Every run starts its output with one comment line ``# {...}`` holding the
resolved :class:`RunConfig`; feeding that line back through
:meth:`RunConfig.from_echo` reproduces the run.
"""

import json
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError as PydanticValidationError, field_validator

from core.exceptions import ValidationError
from bodies.models import ZonalMeasure

ECHO_PREFIX = '# '


class RunConfig(BaseModel):
    """Resolved configuration of one CLI run"""
    subcommand: Literal['valuate', 'hk', 'mero', 'cosine', 'sweep', 'fit', 'cone-area']
    command: Optional[str] = Field(default=None, description="Nested command (mero ik | flambda)")
    params: Dict[str, Any] = Field(default_factory=dict, description="Numeric parameters and inline documents")
    output: Optional[str] = Field(default=None, description="Output path; stdout when empty")
    seed: int = Field(..., ge=0, lt=2 ** 64, description="Seed for Monte-Carlo oracles")

    def to_echo(self) -> str:
        """The first output line: sorted-key JSON behind a comment marker."""
        return ECHO_PREFIX + json.dumps(self.model_dump(mode='json'), sort_keys=True)

    @classmethod
    def from_echo(cls, line: str) -> 'RunConfig':
        text = line.strip()
        if not text.startswith('#'):
            raise ValidationError("Echo lines start with '#'", code='bad_echo')
        try:
            return cls.model_validate(json.loads(text[1:]))
        except (json.JSONDecodeError, PydanticValidationError) as exc:
            raise ValidationError("Invalid echoed configuration", code='bad_echo',
                                  details={'error': str(exc)}) from exc

    class Config:
        json_schema_extra = {
            "example": {
                "subcommand": "sweep",
                "command": None,
                "params": {"n": 3, "parity": "S", "eps_min": 1e-5, "eps_max": 1e-1,
                           "points": 16, "side": "both", "threads": 1, "jet_order": 40},
                "output": None,
                "seed": 20240229,
            }
        }


class ZonalMeasureSchema(BaseModel):
    """Atomic zonal measure on S^k: (elevation, mass) pairs"""
    k: int = Field(..., ge=1)
    atoms: List[Tuple[float, float]] = Field(..., min_length=1)

    @field_validator('atoms')
    @classmethod
    def validate_masses(cls, v):
        if any(mass < 0 for _, mass in v):
            raise ValueError('Atom masses must be nonnegative')
        return v

    def to_measure(self) -> ZonalMeasure:
        return ZonalMeasure(self.k, tuple(self.atoms))

    class Config:
        json_schema_extra = {
            "example": {"k": 1, "atoms": [[0.7853981633974483, 1.0], [-0.7853981633974483, 1.0]]}
        }


def parse_zonal_measure(data: Dict[str, Any]) -> ZonalMeasure:
    try:
        schema = ZonalMeasureSchema.model_validate(data)
    except PydanticValidationError as exc:
        raise ValidationError("Invalid zonal measure document", code='bad_measure',
                              details={'errors': exc.errors(include_url=False)}) from exc
    return schema.to_measure()
