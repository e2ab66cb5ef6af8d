"""Closed subsets of the complex plane."""

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

__all__ = [
    "Annulus",
    "Disk",
    "FullPlane",
    "HalfPlane",
    "Point",
    "Primitive",
    "Rect",
    "RegionSpec",
    "Segment",
]
