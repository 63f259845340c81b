"""
Pydantic schemas for the regularization commands.

A test function on the circle is read from a Fourier document

    {"cos": [a_0, a_1, ...], "sin": [b_1, b_2, ...], "order": 40}

and Laurent values are written as ``{"at": [re, im], "pole_order": 0|1, ...}``.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, ValidationError as PydanticValidationError, model_validator

from core.choices import DEFAULT_JET_ORDER
from core.exceptions import ValidationError
from mero.models import CircleFunction, LaurentValue


class FourierSeriesSchema(BaseModel):
    """Trigonometric polynomial phi(a) = sum a_j cos(j a) + sum b_j sin(j a)"""
    cos: List[float] = Field(default_factory=list, description="a_0, a_1, ...")
    sin: List[float] = Field(default_factory=list, description="b_1, b_2, ...")
    order: int = Field(default=DEFAULT_JET_ORDER, ge=1, le=60, description="Jet order at the light cone")

    @model_validator(mode='after')
    def validate_nonempty(self):
        if not self.cos and not self.sin:
            raise ValueError('At least one Fourier coefficient is required')
        return self

    def to_function(self) -> CircleFunction:
        return CircleFunction.from_fourier(self.cos, self.sin, order=self.order)

    class Config:
        json_schema_extra = {
            "example": {"cos": [1.0, 0.0, 0.5], "sin": [0.0, 0.25], "order": 40}
        }


def parse_fourier(data: Dict[str, Any]) -> CircleFunction:
    try:
        schema = FourierSeriesSchema.model_validate(data)
    except PydanticValidationError as exc:
        raise ValidationError("Invalid test function document", code='bad_test_function',
                              details={'errors': exc.errors(include_url=False)}) from exc
    return schema.to_function()


class LaurentValueSchema(BaseModel):
    """Serialized LaurentValue; complex numbers as [re, im]"""
    at: List[float]
    pole_order: int = Field(..., ge=0, le=1)
    regular_value: Optional[List[float]] = None
    residue: Optional[List[float]] = None
    finite_part: List[float]

    @classmethod
    def from_value(cls, value: LaurentValue) -> 'LaurentValueSchema':
        return cls(**value.to_dict())
