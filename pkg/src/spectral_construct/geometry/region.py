"""Exact geometric model of a closed set sigma as a finite union of primitives."""

from __future__ import annotations

import cmath
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import ClassVar, Iterable, Optional

import numpy as np

from spectral_construct.config import settings
from spectral_construct.errors import EmptyRegion, InvalidPrimitive


def _check_length(name: str, value: float) -> float:
    if not math.isfinite(value) or value < 0:
        raise InvalidPrimitive(f"{name} must be finite and nonnegative, got {value!r}")
    return float(value)


def _check_point(name: str, value: complex) -> complex:
    value = complex(value)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise InvalidPrimitive(f"{name} must be finite, got {value!r}")
    return value


class Primitive(ABC):
    """A nonempty closed subset of the complex plane."""

    kind: ClassVar[str]
    bounded: ClassVar[bool] = True

    @abstractmethod
    def distances(self, z: np.ndarray) -> np.ndarray:
        """Euclidean distance from every entry of ``z`` to the primitive."""

    @abstractmethod
    def nearest(self, z: complex) -> complex:
        """Closest point of the primitive to ``z``."""

    @property
    @abstractmethod
    def enclosing_radius(self) -> float:
        """Upper bound on |w| over the primitive; inf when unbounded."""

    @abstractmethod
    def sample(self, rng: np.random.Generator, boundary: bool, extent: float) -> complex:
        """Random point of the primitive (of its boundary when ``boundary``)."""


@dataclass(frozen=True)
class Point(Primitive):
    """Singleton {z}."""

    z: complex
    kind: ClassVar[str] = "point"

    def __post_init__(self):
        object.__setattr__(self, "z", _check_point("z", self.z))

    def distances(self, z):
        return np.abs(np.asarray(z) - self.z)

    def nearest(self, z):
        return self.z

    @property
    def enclosing_radius(self):
        return abs(self.z)

    def sample(self, rng, boundary, extent):
        return self.z


@dataclass(frozen=True)
class Segment(Primitive):
    """Closed segment [a, b]."""

    a: complex
    b: complex
    kind: ClassVar[str] = "segment"

    def __post_init__(self):
        object.__setattr__(self, "a", _check_point("a", self.a))
        object.__setattr__(self, "b", _check_point("b", self.b))

    def _foot(self, z):
        d = self.b - self.a
        length2 = abs(d) ** 2
        if length2 == 0:
            return np.zeros(np.shape(z))
        return np.clip(((np.asarray(z) - self.a) * np.conj(d)).real / length2, 0.0, 1.0)

    def distances(self, z):
        z = np.asarray(z)
        return np.abs(z - (self.a + self._foot(z) * (self.b - self.a)))

    def nearest(self, z):
        return complex(self.a + float(self._foot(z)) * (self.b - self.a))

    @property
    def enclosing_radius(self):
        return max(abs(self.a), abs(self.b))

    def sample(self, rng, boundary, extent):
        return self.a + rng.random() * (self.b - self.a)


@dataclass(frozen=True)
class Annulus(Primitive):
    """Closed annulus r_inner <= |z - center| <= r_outer."""

    center: complex
    r_inner: float
    r_outer: float
    kind: ClassVar[str] = "annulus"

    def __post_init__(self):
        object.__setattr__(self, "center", _check_point("center", self.center))
        object.__setattr__(self, "r_inner", _check_length("r_inner", self.r_inner))
        object.__setattr__(self, "r_outer", _check_length("r_outer", self.r_outer))
        if self.r_inner > self.r_outer:
            raise InvalidPrimitive(
                f"r_inner {self.r_inner} exceeds r_outer {self.r_outer}"
            )

    def distances(self, z):
        rho = np.abs(np.asarray(z) - self.center)
        return np.maximum(np.maximum(rho - self.r_outer, self.r_inner - rho), 0.0)

    def nearest(self, z):
        offset = complex(z) - self.center
        rho = abs(offset)
        if self.r_inner <= rho <= self.r_outer:
            return complex(z)
        target = self.r_outer if rho > self.r_outer else self.r_inner
        if rho == 0:
            # every point of the inner circle is nearest; take argument 0
            return self.center + target
        return self.center + target * offset / rho

    @property
    def enclosing_radius(self):
        return abs(self.center) + self.r_outer

    def sample(self, rng, boundary, extent):
        theta = rng.uniform(0.0, 2 * math.pi)
        if boundary:
            radius = self.r_outer if rng.integers(2) else self.r_inner
        else:
            radius = math.sqrt(
                self.r_inner**2 + rng.random() * (self.r_outer**2 - self.r_inner**2)
            )
        return self.center + radius * cmath.exp(1j * theta)


@dataclass(frozen=True)
class Disk(Primitive):
    """Closed disk |z - center| <= radius."""

    center: complex
    radius: float
    kind: ClassVar[str] = "disk"

    def __post_init__(self):
        object.__setattr__(self, "center", _check_point("center", self.center))
        object.__setattr__(self, "radius", _check_length("radius", self.radius))

    @property
    def as_annulus(self) -> Annulus:
        return Annulus(self.center, 0.0, self.radius)

    def distances(self, z):
        return np.maximum(np.abs(np.asarray(z) - self.center) - self.radius, 0.0)

    def nearest(self, z):
        return self.as_annulus.nearest(z)

    @property
    def enclosing_radius(self):
        return abs(self.center) + self.radius

    def sample(self, rng, boundary, extent):
        return self.as_annulus.sample(rng, boundary, extent)


@dataclass(frozen=True)
class Rect(Primitive):
    """Closed rectangle [x, x + width] x [y, y + height] with corner x + iy."""

    corner: complex
    width: float
    height: float
    kind: ClassVar[str] = "rect"

    def __post_init__(self):
        object.__setattr__(self, "corner", _check_point("corner", self.corner))
        object.__setattr__(self, "width", _check_length("width", self.width))
        object.__setattr__(self, "height", _check_length("height", self.height))

    @property
    def _bounds(self) -> tuple[float, float, float, float]:
        x0, y0 = self.corner.real, self.corner.imag
        return x0, x0 + self.width, y0, y0 + self.height

    def _clamp(self, z):
        x0, x1, y0, y1 = self._bounds
        z = np.asarray(z)
        return np.clip(z.real, x0, x1) + 1j * np.clip(z.imag, y0, y1)

    def distances(self, z):
        return np.abs(np.asarray(z) - self._clamp(z))

    def nearest(self, z):
        return complex(self._clamp(complex(z)))

    @property
    def enclosing_radius(self):
        x0, x1, y0, y1 = self._bounds
        return max(abs(complex(x, y)) for x in (x0, x1) for y in (y0, y1))

    def sample(self, rng, boundary, extent):
        if not boundary:
            return self.corner + rng.random() * self.width + 1j * rng.random() * self.height
        w, h = self.width, self.height
        s = rng.random() * 2 * (w + h)
        if s < w:
            return self.corner + s
        if s < w + h:
            return self.corner + w + 1j * (s - w)
        if s < 2 * w + h:
            return self.corner + (2 * w + h - s) + 1j * h
        return self.corner + 1j * (2 * (w + h) - s)


@dataclass(frozen=True)
class HalfPlane(Primitive):
    """Closed half-plane {z : Re(conj(normal) z) >= offset} for a unit normal."""

    normal: complex
    offset: float
    kind: ClassVar[str] = "half_plane"
    bounded: ClassVar[bool] = False

    def __post_init__(self):
        normal = _check_point("normal", self.normal)
        if abs(abs(normal) - 1.0) > 1e-9:
            raise InvalidPrimitive(f"normal must be a unit vector, |normal| = {abs(normal)}")
        if not math.isfinite(self.offset):
            raise InvalidPrimitive("offset must be finite")
        object.__setattr__(self, "normal", normal / abs(normal))
        object.__setattr__(self, "offset", float(self.offset))

    def _height(self, z):
        return (np.conj(self.normal) * np.asarray(z)).real

    def distances(self, z):
        return np.maximum(self.offset - self._height(z), 0.0)

    def nearest(self, z):
        gap = self.offset - float(self._height(z))
        if gap <= 0:
            return complex(z)
        return complex(z) + gap * self.normal

    @property
    def enclosing_radius(self):
        return math.inf

    def sample(self, rng, boundary, extent):
        depth = 0.0 if boundary else rng.random() * extent
        across = rng.uniform(-extent, extent)
        return (self.offset + depth) * self.normal + across * 1j * self.normal


@dataclass(frozen=True)
class FullPlane(Primitive):
    """The whole complex plane."""

    kind: ClassVar[str] = "full_plane"
    bounded: ClassVar[bool] = False

    def distances(self, z):
        return np.zeros(np.shape(z))

    def nearest(self, z):
        return complex(z)

    @property
    def enclosing_radius(self):
        return math.inf

    def sample(self, rng, boundary, extent):
        return complex(rng.uniform(-extent, extent), rng.uniform(-extent, extent))


@dataclass(frozen=True)
class RegionSpec:
    """sigma as the union of an ordered list of primitives; empty list means sigma = {}."""

    primitives: tuple[Primitive, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "primitives", tuple(self.primitives))

    @classmethod
    def of(cls, *primitives: Primitive) -> RegionSpec:
        return cls(tuple(primitives))

    def union(self, *primitives: Primitive) -> RegionSpec:
        return RegionSpec(self.primitives + tuple(primitives))

    def is_empty(self) -> bool:
        return not self.primitives

    def distances(self, z: Iterable[complex] | np.ndarray) -> np.ndarray:
        """Vectorized distance; +inf everywhere for the empty region."""
        z = np.asarray(z, dtype=complex)
        if self.is_empty():
            return np.full(z.shape, math.inf)
        result = self.primitives[0].distances(z)
        for primitive in self.primitives[1:]:
            result = np.minimum(result, primitive.distances(z))
        return np.asarray(result, dtype=float)

    def distance(self, z: complex) -> float:
        """Exact Euclidean distance from ``z`` to sigma."""
        return float(self.distances(np.asarray([complex(z)]))[0])

    def contains(self, z: complex, tol: float = 0.0) -> bool:
        if not math.isfinite(tol):
            raise ValueError("tol must be finite")
        return self.distance(z) <= tol

    def nearest_point(self, z: complex) -> complex:
        """Closest point of sigma; ties go to the lowest primitive index."""
        if self.is_empty():
            raise EmptyRegion("nearest_point")
        z = complex(z)
        best: Optional[complex] = None
        best_distance = math.inf
        for primitive in self.primitives:
            d = float(primitive.distances(np.asarray([z]))[0])
            if best is None or d < best_distance:
                best, best_distance = primitive.nearest(z), d
        return best

    def is_bounded(self) -> tuple[bool, float]:
        """Whether sigma is bounded, with a radius enclosing it (0 for the empty set)."""
        if any(not p.bounded for p in self.primitives):
            return False, math.inf
        return True, max((p.enclosing_radius for p in self.primitives), default=0.0)

    def sample_boundary_and_interior(
        self,
        count: int,
        seed: int = 0,
        extent: Optional[float] = None,
    ) -> list[complex]:
        """Deterministic pseudo-random points of sigma.

        Even draws come from primitive interiors and odd draws from their
        boundaries. Unbounded primitives are sampled on a patch of half-width
        ``extent`` around their base point.
        """
        if self.is_empty():
            raise EmptyRegion("sample_boundary_and_interior")
        if count < 1:
            raise ValueError("count must be at least 1")
        extent = settings.sample_extent if extent is None else extent
        rng = np.random.default_rng(seed)
        points = []
        for i in range(count):
            primitive = self.primitives[int(rng.integers(len(self.primitives)))]
            points.append(complex(primitive.sample(rng, i % 2 == 1, extent)))
        return points
