from __future__ import annotations

import json
import logging
from typing import Literal, Optional

from pydantic import AliasChoices, BaseModel, ConfigDict, Field, field_validator
from pydantic import ValidationError as PydanticValidationError

from foldmatch.exceptions import BoundarySegment, InvalidOperation, ParseError, ValidationError
from foldmatch.geometry import (
    Diagonal,
    PolygonConfig,
    ThetaOrbit,
    Triangulation,
    orbit_of,
    validate,
)

logger = logging.getLogger(__name__)

Pair = tuple[int, int]


class Options(BaseModel):
    model_config = ConfigDict(extra="forbid")

    format: Literal["dot", "tikz"] = "dot"
    matching: Optional[int] = Field(default=None, ge=0)
    dump_matchings: bool = False


class Instance(BaseModel):
    """
    One computation request.

    For kinds B and C the triangulation lists tau_1..tau_{2n-1} of the
    (2n+2)-gon and its n-th entry is the diameter written [tail, head]; the
    target is any diagonal of the orbit. For kind A it lists the n diagonals
    of the (n+3)-gon and the target is a diagonal.
    """
    model_config = ConfigDict(extra="forbid")

    rank: int = Field(ge=1)
    kind: Literal["A", "B", "C"]
    triangulation: list[Pair]
    target: Optional[Pair] = Field(default=None, validation_alias=AliasChoices("target", "orbit"))
    options: Options = Options()

    @field_validator("triangulation")
    @classmethod
    def _no_degenerate_pairs(cls, pairs: list[Pair]) -> list[Pair]:
        for u, v in pairs:
            if u == v:
                raise ValueError(f"degenerate diagonal [{u},{v}]")
        return pairs

    @field_validator("target")
    @classmethod
    def _no_degenerate_target(cls, pair: Optional[Pair]) -> Optional[Pair]:
        if pair is not None and pair[0] == pair[1]:
            raise ValueError(f"degenerate target [{pair[0]},{pair[1]}]")
        return pair

    @property
    def polygon(self) -> PolygonConfig:
        return PolygonConfig(self.rank, "plain" if self.kind == "A" else "full")

    def to_triangulation(self) -> Triangulation:
        T = Triangulation.from_pairs(self.polygon, self.triangulation)
        validate(T)
        return T

    def to_target(self) -> Diagonal:
        if self.target is None:
            raise InvalidOperation("instance has no target")
        u, v = self.target
        count = self.polygon.vertex_count
        if not (0 <= u < count and 0 <= v < count):
            raise ValidationError(f"target [{u},{v}] has a vertex outside 0..{count - 1}")
        if self.polygon.is_boundary(u, v):
            raise BoundarySegment(f"target [{u},{v}] is a boundary segment")
        return Diagonal.of(u, v)

    def to_orbit(self) -> ThetaOrbit:
        return orbit_of(self.to_target(), self.polygon)


def parse_instance(text: str) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"instance is not valid JSON: {exc}") from exc
    try:
        instance = Instance.model_validate(data)
    except PydanticValidationError as exc:
        raise ValidationError(str(exc), errors=exc.errors(include_url=False)) from exc
    instance.to_triangulation()
    if instance.target is not None:
        instance.to_target()
    logger.debug("parsed instance", extra={"kind": instance.kind, "rank": instance.rank})
    return instance
