"""
Pydantic schemas for body JSON documents.

A body document is one of

    {"type": "polytope", "vertices": [[...], ...]}
    {"type": "rotation", "n": N, "profile": [[x, y], ...]}
    {"type": "double_cone", "n": N, "eps": E}

and is read with :func:`parse_body`; :func:`dump_body` is its inverse.
"""

from typing import Annotated, Any, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, TypeAdapter, ValidationError as PydanticValidationError, field_validator

from core.exceptions import ValidationError
from bodies.models import ConvexBody, Polytope, Profile2D, RotationBody, StretchedCone


class PolytopeSchema(BaseModel):
    """Polytope given by its vertices, one row per point"""
    type: Literal['polytope'] = 'polytope'
    vertices: List[List[float]] = Field(..., min_length=1, description="Vertices, row-major")

    @field_validator('vertices')
    @classmethod
    def validate_rows(cls, v):
        widths = {len(row) for row in v}
        if len(widths) != 1 or 0 in widths:
            raise ValueError('All vertices must have the same positive dimension')
        return v

    def to_body(self) -> Polytope:
        return Polytope(np.array(self.vertices, dtype=float))

    class Config:
        json_schema_extra = {
            "example": {
                "type": "polytope",
                "vertices": [[-1, -1, -1], [1, -1, -1], [-1, 1, -1], [1, 1, -1],
                             [-1, -1, 1], [1, -1, 1], [-1, 1, 1], [1, 1, 1]],
            }
        }


class RotationSchema(BaseModel):
    """Rotation body of a first-quadrant profile"""
    type: Literal['rotation'] = 'rotation'
    n: int = Field(..., ge=2, description="Ambient dimension")
    profile: List[List[float]] = Field(..., min_length=1, description="First-quadrant generators (x, y)")

    @field_validator('profile')
    @classmethod
    def validate_pairs(cls, v):
        if any(len(row) != 2 for row in v):
            raise ValueError('Profile generators must be (x, y) pairs')
        return v

    def to_body(self) -> RotationBody:
        return RotationBody(Profile2D(np.array(self.profile, dtype=float)), self.n)


class DoubleConeSchema(BaseModel):
    """Double cone, optionally stretched off the light cone"""
    type: Literal['double_cone'] = 'double_cone'
    n: int = Field(..., ge=2, description="Ambient dimension")
    eps: float = Field(default=0.0, gt=-0.785, lt=0.785, description="Stretch parameter")
    k: Optional[int] = Field(default=None, ge=1, description="Degree fixing the normalization c_eps")

    def to_body(self) -> StretchedCone:
        return StretchedCone(self.n, self.eps, self.k)


BodySchema = Annotated[
    Union[PolytopeSchema, RotationSchema, DoubleConeSchema],
    Field(discriminator='type'),
]

_body_adapter = TypeAdapter(BodySchema)


def parse_body(data: Dict[str, Any]) -> ConvexBody:
    """Validate a body document and build the body."""
    try:
        schema = _body_adapter.validate_python(data)
    except PydanticValidationError as exc:
        raise ValidationError("Invalid body document", code='bad_body',
                              details={'errors': exc.errors(include_url=False)}) from exc
    return schema.to_body()


def dump_body(body: ConvexBody) -> Dict[str, Any]:
    """Body document for ``body``; ``parse_body(dump_body(b))`` rebuilds it."""
    if isinstance(body, Polytope):
        return PolytopeSchema(vertices=body.vertices.tolist()).model_dump()
    if isinstance(body, RotationBody):
        return RotationSchema(n=body.n, profile=body.profile.generators.tolist()).model_dump()
    if isinstance(body, StretchedCone):
        return DoubleConeSchema(n=body.n, eps=body.eps, k=body.k).model_dump()
    raise ValidationError("Unsupported body type", code='unsupported_body',
                          details={'type': type(body).__name__})
