"""Tests for the multiplier enumeration."""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from spectral_construct.errors import ConfigurationError, EmptyIntersection, EmptyRegion
from spectral_construct.geometry.region import (
    Annulus,
    Disk,
    FullPlane,
    HalfPlane,
    Point,
    Rect,
    RegionSpec,
    Segment,
)
from spectral_construct.models import ExactComplex, Window
from spectral_construct.operators.multipliers import (
    MultiplierSequence,
    calkin_wilf,
    calkin_wilf_rationals,
    covering_radius,
    enumerate_multiplier,
    farey_rationals,
    stern_diatomic,
    unit_circle_point,
)

SPECS = {
    "point": RegionSpec.of(Point(0.5 - 0.25j)),
    "segment": RegionSpec.of(Segment(0, 1)),
    "disk": RegionSpec.of(Disk(0, 1)),
    "annulus": RegionSpec.of(Annulus(0, 1, 2)),
    "rect": RegionSpec.of(Rect(-1 - 1j, 2, 2)),
    "half_plane": RegionSpec.of(HalfPlane(1, 0)),
    "full_plane": RegionSpec.of(FullPlane()),
    "union": RegionSpec.of(Segment(-2, -2 + 1j), Disk(3, 0.5), HalfPlane(-1j, 4)),
}

UNIT_SQUARE = Window(-1.0, 1.0, -1.0, 1.0)


def _take(iterator, count):
    return list(itertools.islice(iterator, count))


class TestRationalOrders:
    def test_farey_prefix(self):
        expected = [0, 1, Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 4)]
        assert _take(farey_rationals(), 6) == expected

    def test_stern_diatomic(self):
        assert [stern_diatomic(n) for n in range(1, 10)] == [1, 1, 2, 1, 3, 2, 3, 1, 4]

    def test_calkin_wilf(self):
        assert [calkin_wilf(n) for n in range(1, 6)] == [
            Fraction(1),
            Fraction(1, 2),
            Fraction(2),
            Fraction(1, 3),
            Fraction(3, 2),
        ]

    def test_calkin_wilf_index_starts_at_one(self):
        with pytest.raises(ValueError):
            calkin_wilf(0)

    @pytest.mark.parametrize("source", [farey_rationals, calkin_wilf_rationals])
    def test_duplicate_free_in_unit_interval(self, source):
        values = _take(source(), 2000)
        assert len(set(values)) == len(values)
        assert all(0 <= q <= 1 for q in values)

    def test_unit_circle_point_is_exact(self):
        for t in (Fraction(0), Fraction(1, 3), Fraction(5, 7), Fraction(1)):
            z = unit_circle_point(t)
            assert z.re**2 + z.im**2 == 1


class TestMultiplierSequence:
    """Tests for MultiplierSequence."""

    def test_point_is_constant(self):
        spec = RegionSpec.of(Point(7 - 2j))
        assert [enumerate_multiplier(spec, n) for n in range(1, 6)] == [7 - 2j] * 5

    def test_segment_farey_order(self):
        sequence = MultiplierSequence(RegionSpec.of(Segment(0, 1)))
        assert [sequence.value(n) for n in (1, 2, 3, 4)] == [0, 1, 0.5, 1 / 3]

    def test_segment_calkin_wilf_order(self):
        sequence = MultiplierSequence(RegionSpec.of(Segment(0, 2)), "calkin_wilf")
        assert sequence.exact(3) == ExactComplex(Fraction(1), Fraction(0))

    def test_disk_starts_at_center(self):
        sequence = MultiplierSequence(RegionSpec.of(Disk(1j, 1)))
        assert sequence.value(1) == 1j
        assert sequence.value(2) == pytest.approx(1 + 1j)

    def test_round_robin_over_primitives(self):
        sequence = MultiplierSequence(RegionSpec.of(Point(5), Point(-5)))
        assert list(sequence.prefix(4)) == [5, -5, 5, -5]

    def test_empty_region(self):
        with pytest.raises(EmptyRegion):
            MultiplierSequence(RegionSpec())

    def test_unknown_order(self):
        with pytest.raises(ConfigurationError):
            MultiplierSequence(RegionSpec.of(Point(0)), "random")

    def test_index_starts_at_one(self):
        with pytest.raises(ValueError):
            MultiplierSequence(RegionSpec.of(Point(0))).value(0)

    def test_deterministic(self):
        a = MultiplierSequence(SPECS["union"]).exact_prefix(500)
        b = MultiplierSequence(SPECS["union"]).exact_prefix(500)
        assert a == b

    def test_values_round_exact_terms(self):
        sequence = MultiplierSequence(SPECS["annulus"])
        for n in (1, 17, 250):
            assert sequence.value(n) == sequence.exact(n).to_complex()

    def test_index_of_returns_first_occurrence(self):
        sequence = MultiplierSequence(RegionSpec.of(Segment(0, 1)))
        assert sequence.index_of(ExactComplex(Fraction(1, 2)), 100) == 3
        assert sequence.index_of(ExactComplex(Fraction(1, 2)), 2) is None

    @pytest.mark.parametrize("name", sorted(SPECS))
    def test_membership(self, name):
        spec = SPECS[name]
        prefix = MultiplierSequence(spec).prefix(4096)
        assert np.all(np.isfinite(prefix))
        assert spec.distances(prefix).max() <= 1e-12

    @pytest.mark.parametrize("name", ["half_plane", "full_plane"])
    def test_unbounded_regions_reach_large_magnitudes(self, name):
        prefix = MultiplierSequence(SPECS[name]).prefix(4096)
        assert np.abs(prefix).max() > 1e6


class TestCoveringRadius:
    """Tests for covering_radius."""

    def test_point_is_zero(self):
        spec = RegionSpec.of(Point(0))
        assert covering_radius(spec, 1, UNIT_SQUARE).radius_estimate == 0.0

    def test_segment_bound(self):
        spec = RegionSpec.of(Segment(0, 1))
        report = covering_radius(spec, 512, Window(-0.5, 1.5, -1, 1))
        assert report.radius_estimate <= 0.02

    def test_segment_nonincreasing(self):
        spec = RegionSpec.of(Segment(0, 1))
        window = Window(-0.5, 1.5, -1, 1)
        radii = [covering_radius(spec, n, window).radius_estimate for n in (128, 256, 512)]
        assert radii[0] >= radii[1] >= radii[2]

    def test_disk_bound(self):
        spec = RegionSpec.of(Disk(0, 1))
        report = covering_radius(spec, 4096, Window(-1.5, 1.5, -1.5, 1.5))
        assert report.radius_estimate <= 0.1
        assert report.sample_count > 0

    @pytest.mark.parametrize("width", [0.0, 1e-3, 0.1, 1.0])
    def test_annulus_bound_independent_of_width(self, width):
        spec = RegionSpec.of(Annulus(0, 1, 1 + width))
        report = covering_radius(spec, 4096, Window(-2.5, 2.5, -2.5, 2.5))
        assert report.radius_estimate <= 0.1

    @pytest.mark.parametrize("name", ["segment", "disk", "rect", "annulus"])
    def test_squaring_prefix_shrinks_radius(self, name):
        spec = SPECS[name]
        window = Window(-2.5, 2.5, -2.5, 2.5)
        coarse = covering_radius(spec, 64, window).radius_estimate
        fine = covering_radius(spec, 64**2, window).radius_estimate
        assert fine <= 0.75 * coarse

    def test_full_plane_window(self):
        spec = SPECS["full_plane"]
        report = covering_radius(spec, 4096, UNIT_SQUARE)
        assert report.radius_estimate <= 0.25

    def test_window_missing_region(self):
        spec = RegionSpec.of(Disk(0, 1))
        with pytest.raises(EmptyIntersection):
            covering_radius(spec, 16, Window(10, 11, 10, 11))

    def test_empty_region(self):
        with pytest.raises(EmptyRegion):
            covering_radius(RegionSpec(), 16, UNIT_SQUARE)

    def test_reuses_given_sequence(self):
        spec = SPECS["disk"]
        sequence = MultiplierSequence(spec)
        report = covering_radius(spec, 100, UNIT_SQUARE, sequence=sequence)
        assert len(sequence) >= 100
        assert math.isfinite(report.radius_estimate)
