"""Deterministic countable dense enumeration (m_n) of sigma."""

from __future__ import annotations

import itertools
import logging
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, singledispatch
from typing import Callable, Iterator, Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from spectral_construct.config import settings
from spectral_construct.errors import ConfigurationError, EmptyIntersection, EmptyRegion
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
from spectral_construct.models import ExactComplex, Window

logger = logging.getLogger(__name__)

IMAG_UNIT = ExactComplex(Fraction(0), Fraction(1))

# Every FAR_PERIOD-th item of an unbounded primitive comes from the far stream.
FAR_PERIOD = 8
# Far-stream magnitudes run through 2**1 .. 2**FAR_EXPONENTS and then repeat.
FAR_EXPONENTS = 64


# --- Rationals in [0, 1] ---


def farey_rationals() -> Iterator[Fraction]:
    """Reduced fractions of [0, 1] by increasing denominator: 0, 1, 1/2, 1/3, 2/3, 1/4, ..."""
    yield Fraction(0)
    yield Fraction(1)
    for d in itertools.count(2):
        for p in range(1, d):
            if math.gcd(p, d) == 1:
                yield Fraction(p, d)


def stern_diatomic(n: int) -> int:
    """Stern's diatomic sequence fusc(n)."""
    a, b = 1, 0
    while n:
        if n & 1:
            b += a
        else:
            a += b
        n >>= 1
    return b


def calkin_wilf(n: int) -> Fraction:
    """n-th term (1-based) of the Calkin-Wilf enumeration of the positive rationals."""
    if n < 1:
        raise ValueError("Calkin-Wilf indices start at 1")
    return Fraction(stern_diatomic(n), stern_diatomic(n + 1))


def calkin_wilf_rationals() -> Iterator[Fraction]:
    """0, 1, then q/(1+q) for the Calkin-Wilf sequence q: a bijection onto Q in (0, 1)."""
    yield Fraction(0)
    yield Fraction(1)
    for n in itertools.count(1):
        a, b = stern_diatomic(n), stern_diatomic(n + 1)
        yield Fraction(a, a + b)


RATIONAL_ORDERS: dict[str, Callable[[], Iterator[Fraction]]] = {
    "farey": farey_rationals,
    "calkin_wilf": calkin_wilf_rationals,
}


# --- Per-primitive exact streams ---


def _exact(z: complex) -> ExactComplex:
    return ExactComplex.from_complex(z)


def unit_circle_point(t: Fraction) -> ExactComplex:
    """Rational point ((1 - t^2) + 2ti) / (1 + t^2) of the unit circle, angle 2*atan(t)."""
    denominator = 1 + t * t
    return ExactComplex((1 - t * t) / denominator, 2 * t / denominator)


@singledispatch
def exact_points(primitive: Primitive, rational_order: str) -> Iterator[ExactComplex]:
    """Infinite dense stream of exact Gaussian rationals inside ``primitive``."""
    raise TypeError(f"no enumeration registered for {type(primitive).__name__}")


@exact_points.register
def _(primitive: Point, rational_order: str) -> Iterator[ExactComplex]:
    value = _exact(primitive.z)
    while True:
        yield value


@exact_points.register
def _(primitive: Segment, rational_order: str) -> Iterator[ExactComplex]:
    a, b = _exact(primitive.a), _exact(primitive.b)
    direction = b - a
    for q in RATIONAL_ORDERS[rational_order]():
        yield a + direction * q


@exact_points.register
def _(primitive: Rect, rational_order: str) -> Iterator[ExactComplex]:
    corner = _exact(primitive.corner)
    width, height = Fraction(primitive.width), Fraction(primitive.height)
    for d in itertools.count(1):
        for q in range(d + 1):
            for p in range(d + 1):
                yield corner + ExactComplex(width * Fraction(p, d), height * Fraction(q, d))


@exact_points.register
def _(primitive: Annulus, rational_order: str) -> Iterator[ExactComplex]:
    # Level d: rings a = 0..d, ring a carries 4k points with arc spacing
    # at most max(r_outer - r_inner, r_outer / 2) / d, so a thin ring never
    # spends a whole level on one arc.
    center = _exact(primitive.center)
    r_inner, r_outer = Fraction(primitive.r_inner), Fraction(primitive.r_outer)
    width = r_outer - r_inner
    arc_scale = max(width, r_outer / 2)
    for d in itertools.count(1):
        for a in range(d + 1) if width > 0 else range(1):
            rho = r_inner + width * Fraction(a, d)
            if rho == 0:
                yield center
                continue
            k = max(1, math.ceil(2 * d * rho / arc_scale))
            for quarter in range(4):
                for b in range(k):
                    yield center + unit_circle_point(Fraction(b, k)).rotate(quarter) * rho


@exact_points.register
def _(primitive: Disk, rational_order: str) -> Iterator[ExactComplex]:
    return exact_points(primitive.as_annulus, rational_order)


def _full_ring(level: int) -> list[tuple[int, int]]:
    """Integer points with max(|p|, |q|) == level, walked once around the square."""
    if level == 0:
        return [(0, 0)]
    return (
        [(level, q) for q in range(-level + 1, level + 1)]
        + [(p, level) for p in range(level - 1, -level - 1, -1)]
        + [(-level, q) for q in range(level - 1, -level - 1, -1)]
        + [(p, -level) for p in range(-level + 1, level + 1)]
    )


def _half_ring(level: int) -> list[tuple[int, int]]:
    """Points of the full ring with p >= 0."""
    if level == 0:
        return [(0, 0)]
    return (
        [(level, q) for q in range(-level, level + 1)]
        + [(p, level) for p in range(level - 1, -1, -1)]
        + [(p, -level) for p in range(level - 1, -1, -1)]
    )


FULL_DIRECTIONS = ((1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1))
# Far half-plane directions keep depth >= |transverse| so points stay inside after rounding.
HALF_DIRECTIONS = ((1, 0), (1, 1), (1, -1))


def _lattice_stream(
    base: ExactComplex,
    e1: ExactComplex,
    e2: ExactComplex,
    ring: Callable[[int], list[tuple[int, int]]],
    directions: tuple[tuple[int, int], ...],
) -> Iterator[ExactComplex]:
    """Interleave fine near shells with a sparse stream of far points."""

    def near() -> Iterator[ExactComplex]:
        for s in itertools.count(1):
            for level in range(s * s + 1):
                for p, q in ring(level):
                    yield base + e1 * Fraction(p, s) + e2 * Fraction(q, s)

    def far() -> Iterator[ExactComplex]:
        for t in itertools.count():
            scale = 2 ** ((t // len(directions)) % FAR_EXPONENTS + 1)
            p, q = directions[t % len(directions)]
            yield base + e1 * (p * scale) + e2 * (q * scale)

    near_points, far_points = near(), far()
    for j in itertools.count(1):
        yield next(far_points) if j % FAR_PERIOD == 0 else next(near_points)


@exact_points.register
def _(primitive: HalfPlane, rational_order: str) -> Iterator[ExactComplex]:
    normal = _exact(primitive.normal)
    base = normal * Fraction(primitive.offset)
    return _lattice_stream(base, normal, normal * IMAG_UNIT, _half_ring, HALF_DIRECTIONS)


@exact_points.register
def _(primitive: FullPlane, rational_order: str) -> Iterator[ExactComplex]:
    one = ExactComplex(Fraction(1), Fraction(0))
    return _lattice_stream(ExactComplex(Fraction(0)), one, IMAG_UNIT, _full_ring, FULL_DIRECTIONS)


# --- The sequence ---


class MultiplierSequence:
    """Round-robin interleaving of the per-primitive streams of a nonempty sigma.

    m_n is a pure function of (spec, rational order, n); values are produced
    exactly and rounded once. Prefixes are memoized.
    """

    def __init__(self, spec: RegionSpec, rational_order: Optional[str] = None):
        if spec.is_empty():
            raise EmptyRegion("MultiplierSequence")
        order = rational_order or settings.rational_order
        if order not in RATIONAL_ORDERS:
            raise ConfigurationError(f"unknown rational order {order!r}")
        self.spec = spec
        self.rational_order = order
        self._streams = [exact_points(p, order) for p in spec.primitives]
        self._exact: list[ExactComplex] = []
        self._values: list[complex] = []
        self._first_index: dict[ExactComplex, int] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        """Number of terms materialized so far."""
        return len(self._exact)

    def _extend(self, n: int) -> None:
        if n <= len(self._exact):
            return
        with self._lock:
            start = len(self._exact)
            count = len(self._streams)
            while len(self._exact) < n:
                k = len(self._exact)
                value = next(self._streams[k % count])
                self._exact.append(value)
                self._values.append(value.to_complex())
                self._first_index.setdefault(value, k + 1)
            logger.debug("multiplier cache grew from %d to %d terms", start, n)

    def exact(self, n: int) -> ExactComplex:
        """Exact m_n (1-based)."""
        if n < 1:
            raise ValueError("multiplier indices start at 1")
        self._extend(n)
        return self._exact[n - 1]

    def value(self, n: int) -> complex:
        """m_n rounded to complex."""
        if n < 1:
            raise ValueError("multiplier indices start at 1")
        self._extend(n)
        return self._values[n - 1]

    def prefix(self, count: int) -> np.ndarray:
        """m_1 .. m_count as a complex array."""
        self._extend(count)
        return np.asarray(self._values[:count], dtype=complex)

    def exact_prefix(self, count: int) -> list[ExactComplex]:
        self._extend(count)
        return list(self._exact[:count])

    def index_of(self, value: ExactComplex, limit: int) -> Optional[int]:
        """Smallest n <= limit with m_n == value exactly, else None."""
        self._extend(limit)
        index = self._first_index.get(value)
        return index if index is not None and index <= limit else None


@lru_cache(maxsize=64)
def sequence_for(spec: RegionSpec, rational_order: Optional[str] = None) -> MultiplierSequence:
    """Shared memoized sequence for a region."""
    return MultiplierSequence(spec, rational_order)


def enumerate_multiplier(spec: RegionSpec, n: int) -> complex:
    """m_n of the default enumeration of ``spec``."""
    return sequence_for(spec).value(n)


@dataclass
class CoveringRadiusReport:
    """Empirical covering radius of the prefix m_1..m_N over sigma within a window."""

    N: int
    window: Window
    radius_estimate: float
    sample_count: int


def covering_radius(
    spec: RegionSpec,
    N: int,
    window: Window,
    samples: int = 2000,
    seed: int = 0,
    sequence: Optional[MultiplierSequence] = None,
    extra_points: Sequence[complex] = (),
) -> CoveringRadiusReport:
    """max over sampled z in sigma and window of min_{n <= N} |m_n - z|.

    Samples are window points projected onto sigma plus direct draws from
    sigma, so lower-dimensional primitives are covered as well as areas.
    The sample set depends only on (spec, window, samples, seed) and any
    extra_points of sigma, which makes the estimate nonincreasing in N.
    """
    if spec.is_empty():
        raise EmptyRegion("covering_radius")
    if N < 1 or samples < 1:
        raise ValueError("N and samples must be positive")
    sequence = sequence or sequence_for(spec)

    rng = np.random.default_rng(seed)
    projected = [spec.nearest_point(z) for z in window.uniform(rng, samples - samples // 2)]
    drawn = spec.sample_boundary_and_interior(max(1, samples // 2), seed) if samples > 1 else []
    candidates = np.asarray(projected + drawn + list(extra_points), dtype=complex)
    points = candidates[window.contains(candidates)]
    if points.size == 0:
        raise EmptyIntersection(f"no sample of the region lies in {window}")

    prefix = sequence.prefix(N)
    tree = cKDTree(np.column_stack([prefix.real, prefix.imag]))
    gaps, _ = tree.query(np.column_stack([points.real, points.imag]))
    radius = float(np.max(gaps))
    logger.debug("covering radius N=%d over %d samples: %.3e", N, points.size, radius)
    return CoveringRadiusReport(
        N=N, window=window, radius_estimate=radius, sample_count=int(points.size)
    )
