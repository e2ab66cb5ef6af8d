"""Parser for region JSON documents describing sigma.

Schema::

    {"primitives": [
        {"type": "disk", "center": [re, im], "radius": r},
        {"type": "point", "z": [re, im]},
        {"type": "segment", "a": [re, im], "b": [re, im]},
        {"type": "rect", "corner": [re, im], "width": w, "height": h},
        {"type": "annulus", "center": [re, im], "r_inner": a, "r_outer": b},
        {"type": "half_plane", "normal": [re, im], "offset": c},
        {"type": "full_plane"}
    ]}

An empty list is the empty set.
"""

import json
import logging
from pathlib import Path
from typing import Annotated, Any, Literal, Mapping, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from spectral_construct.errors import InvalidPrimitive, RegionParseError
from spectral_construct.geometry.region import (
    Annulus,
    Disk,
    FullPlane,
    HalfPlane,
    Point,
    Primitive,
    Rect,
    RegionSpec,
    Segment,
)

logger = logging.getLogger(__name__)

Coordinate = tuple[float, float]


def _c(pair: Coordinate) -> complex:
    return complex(pair[0], pair[1])


def _pair(z: complex) -> list[float]:
    return [z.real, z.imag]


class _PrimitiveModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class PointModel(_PrimitiveModel):
    type: Literal["point"]
    z: Coordinate

    def build(self) -> Primitive:
        return Point(_c(self.z))


class SegmentModel(_PrimitiveModel):
    type: Literal["segment"]
    a: Coordinate
    b: Coordinate

    def build(self) -> Primitive:
        return Segment(_c(self.a), _c(self.b))


class DiskModel(_PrimitiveModel):
    type: Literal["disk"]
    center: Coordinate
    radius: float

    def build(self) -> Primitive:
        return Disk(_c(self.center), self.radius)


class RectModel(_PrimitiveModel):
    type: Literal["rect"]
    corner: Coordinate
    width: float
    height: float

    def build(self) -> Primitive:
        return Rect(_c(self.corner), self.width, self.height)


class AnnulusModel(_PrimitiveModel):
    type: Literal["annulus"]
    center: Coordinate
    r_inner: float
    r_outer: float

    def build(self) -> Primitive:
        return Annulus(_c(self.center), self.r_inner, self.r_outer)


class HalfPlaneModel(_PrimitiveModel):
    type: Literal["half_plane"]
    normal: Coordinate
    offset: float

    def build(self) -> Primitive:
        return HalfPlane(_c(self.normal), self.offset)


class FullPlaneModel(_PrimitiveModel):
    type: Literal["full_plane"]

    def build(self) -> Primitive:
        return FullPlane()


PrimitiveModel = Annotated[
    Union[
        PointModel,
        SegmentModel,
        DiskModel,
        RectModel,
        AnnulusModel,
        HalfPlaneModel,
        FullPlaneModel,
    ],
    Field(discriminator="type"),
]


class RegionModel(BaseModel):
    """Top-level region document."""

    model_config = ConfigDict(extra="forbid")

    primitives: list[PrimitiveModel] = Field(default_factory=list)


def _error_index(exc: ValidationError) -> Optional[int]:
    for error in exc.errors():
        loc = error.get("loc", ())
        if len(loc) >= 2 and loc[0] == "primitives" and isinstance(loc[1], int):
            return loc[1]
    return None


def _first_message(exc: ValidationError) -> str:
    errors = exc.errors()
    if not errors:
        return str(exc)
    return errors[0].get("msg", str(exc))


def _build(model: RegionModel) -> RegionSpec:
    primitives = []
    for index, item in enumerate(model.primitives):
        try:
            primitives.append(item.build())
        except InvalidPrimitive as exc:
            raise RegionParseError(str(exc), index) from exc
    return RegionSpec(tuple(primitives))


def parse_region(data: Mapping[str, Any]) -> RegionSpec:
    """Build a RegionSpec from an already-decoded JSON object."""
    try:
        model = RegionModel.model_validate(data)
    except ValidationError as exc:
        raise RegionParseError(_first_message(exc), _error_index(exc)) from exc
    return _build(model)


def parse_region_text(text: str) -> RegionSpec:
    """Build a RegionSpec from JSON text."""
    try:
        model = RegionModel.model_validate_json(text)
    except ValidationError as exc:
        raise RegionParseError(_first_message(exc), _error_index(exc)) from exc
    return _build(model)


def load_region(path: Union[str, Path]) -> RegionSpec:
    """Read and parse a region file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise RegionParseError(f"cannot read {path}: {exc}") from exc
    spec = parse_region_text(text)
    logger.debug("loaded %d primitives from %s", len(spec.primitives), path)
    return spec


def primitive_to_dict(primitive: Primitive) -> dict[str, Any]:
    """JSON-ready form of one primitive, inverse of the schema above."""
    if isinstance(primitive, Point):
        return {"type": "point", "z": _pair(primitive.z)}
    if isinstance(primitive, Segment):
        return {"type": "segment", "a": _pair(primitive.a), "b": _pair(primitive.b)}
    if isinstance(primitive, Disk):
        return {"type": "disk", "center": _pair(primitive.center), "radius": primitive.radius}
    if isinstance(primitive, Rect):
        return {
            "type": "rect",
            "corner": _pair(primitive.corner),
            "width": primitive.width,
            "height": primitive.height,
        }
    if isinstance(primitive, Annulus):
        return {
            "type": "annulus",
            "center": _pair(primitive.center),
            "r_inner": primitive.r_inner,
            "r_outer": primitive.r_outer,
        }
    if isinstance(primitive, HalfPlane):
        return {"type": "half_plane", "normal": _pair(primitive.normal), "offset": primitive.offset}
    return {"type": "full_plane"}


def region_to_json(spec: RegionSpec) -> str:
    return json.dumps({"primitives": [primitive_to_dict(p) for p in spec.primitives]})
