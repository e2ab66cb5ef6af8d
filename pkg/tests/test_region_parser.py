"""Tests for region JSON documents."""

import json

import pytest

from spectral_construct.errors import RegionParseError
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
from spectral_construct.parsers.region_parser import (
    load_region,
    parse_region,
    parse_region_text,
    region_to_json,
)

ALL_PRIMITIVES = {
    "primitives": [
        {"type": "disk", "center": [0, 0], "radius": 1},
        {"type": "point", "z": [3, 4]},
        {"type": "segment", "a": [0, 0], "b": [1, 0]},
        {"type": "rect", "corner": [-1, -1], "width": 2, "height": 1},
        {"type": "annulus", "center": [0, 1], "r_inner": 1, "r_outer": 2},
        {"type": "half_plane", "normal": [0, 1], "offset": -3},
        {"type": "full_plane"},
    ]
}


class TestParseRegion:
    """Tests for parse_region and friends."""

    def test_every_primitive_type(self):
        spec = parse_region(ALL_PRIMITIVES)
        assert spec.primitives == (
            Disk(0, 1),
            Point(3 + 4j),
            Segment(0, 1),
            Rect(-1 - 1j, 2, 1),
            Annulus(1j, 1, 2),
            HalfPlane(1j, -3),
            FullPlane(),
        )

    def test_empty_list_is_empty_set(self):
        assert parse_region({"primitives": []}).is_empty()

    def test_missing_primitives_is_empty_set(self):
        assert parse_region({}).is_empty()

    def test_unknown_type_points_at_index(self):
        data = {"primitives": [{"type": "point", "z": [0, 0]}, {"type": "ellipse"}]}
        with pytest.raises(RegionParseError) as excinfo:
            parse_region(data)
        assert excinfo.value.index == 1
        assert excinfo.value.pointer == "/primitives/1"

    def test_missing_field(self):
        with pytest.raises(RegionParseError) as excinfo:
            parse_region({"primitives": [{"type": "disk", "center": [0, 0]}]})
        assert excinfo.value.pointer == "/primitives/0"

    def test_extra_field_rejected(self):
        with pytest.raises(RegionParseError):
            parse_region({"primitives": [{"type": "full_plane", "radius": 1}]})

    def test_invalid_parameters_point_at_index(self):
        data = {
            "primitives": [
                {"type": "full_plane"},
                {"type": "full_plane"},
                {"type": "disk", "center": [0, 0], "radius": -1},
            ]
        }
        with pytest.raises(RegionParseError) as excinfo:
            parse_region(data)
        assert excinfo.value.pointer == "/primitives/2"

    def test_malformed_json(self):
        with pytest.raises(RegionParseError):
            parse_region_text("{not json")

    def test_to_json_and_back(self):
        spec = parse_region(ALL_PRIMITIVES)
        assert parse_region_text(region_to_json(spec)) == spec


class TestLoadRegion:
    def test_load_from_file(self, tmp_path):
        path = tmp_path / "disk.json"
        disk = {"type": "disk", "center": [1, 0], "radius": 2}
        path.write_text(json.dumps({"primitives": [disk]}))
        assert load_region(path) == RegionSpec.of(Disk(1, 2))

    def test_missing_file(self, tmp_path):
        with pytest.raises(RegionParseError):
            load_region(tmp_path / "absent.json")
