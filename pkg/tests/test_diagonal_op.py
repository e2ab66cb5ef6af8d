"""Tests for the truncated multiplication operator."""

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from spectral_construct.errors import IndexBeyondTruncation, SearchBudgetExhausted, SingularEntry
from spectral_construct.geometry.region import (
    Disk,
    FullPlane,
    HalfPlane,
    Point,
    RegionSpec,
    Segment,
)
from spectral_construct.models import ExactComplex, SparseVector, SpectralKind, Window
from spectral_construct.operators.diagonal_op import (
    BoundedCertificate,
    DiagonalWitness,
    TruncatedDiagonal,
    reciprocal,
)
from spectral_construct.operators.multipliers import covering_radius


def _make_op(*primitives, N: int = 4096) -> TruncatedDiagonal:
    return TruncatedDiagonal.from_spec(RegionSpec.of(*primitives), N)


class TestReciprocal:
    def test_conventions(self):
        assert reciprocal(0.0) == math.inf
        assert reciprocal(math.inf) == 0.0
        assert reciprocal(4.0) == 0.25


class TestApply:
    def test_scalar_multiple(self):
        op = _make_op(Point(3), N=8)
        assert op.apply(SparseVector.basis(1)).as_dict() == {1: 3}

    def test_zero(self):
        op = _make_op(Disk(0, 1), N=16)
        assert op.apply(SparseVector.zero()) == SparseVector.zero()

    def test_entrywise_product(self):
        op = _make_op(Segment(0, 1), N=16)
        x = SparseVector.from_mapping({1: 1.0, 2: 1.0})
        result = op.apply(x).as_dict()
        assert result == {1: op.values[0], 2: op.values[1]}

    def test_beyond_truncation(self):
        op = _make_op(Disk(0, 1), N=16)
        with pytest.raises(IndexBeyondTruncation):
            op.apply(SparseVector.basis(17))


class TestResolventApply:
    def test_constant_zero_multiplier(self):
        op = _make_op(Point(0), N=4)
        result = op.resolvent_apply(2.0, SparseVector.basis(1))
        assert result.as_dict()[1] == pytest.approx(-0.5)

    def test_exact_eigenvalue_hit(self):
        op = _make_op(Disk(0, 1), N=16)
        with pytest.raises(SingularEntry) as excinfo:
            op.resolvent_apply(op.sequence.exact(1), SparseVector.basis(1))
        assert excinfo.value.n == 1

    def test_float_eigenvalue_hit(self):
        op = _make_op(Point(1), N=4)
        with pytest.raises(SingularEntry):
            op.resolvent_apply(1.0, SparseVector.basis(2))

    def test_left_inverse(self):
        op = _make_op(Disk(0, 1), N=64)
        x = SparseVector.from_mapping({1: 1.0, 2: 1.0, 3: 1.0})
        r = op.resolvent_apply(3.0, x)
        back = op.apply(r) - r.scaled(3.0)
        assert (back - x).norm <= 1e-14
        for n, c in r.as_dict().items():
            assert c == pytest.approx(1.0 / (op.values[n - 1] - 3.0))


class TestResolventNorm:
    def test_disk_exterior(self):
        norm = _make_op(Disk(0, 1)).resolvent_norm(2.0)
        assert norm.exact_limit == pytest.approx(1.0)
        assert norm.truncated <= norm.exact_limit * (1 + 1e-12)

    def test_single_multiplier(self):
        norm = _make_op(Point(0), N=4).resolvent_norm(1j)
        assert norm.truncated == pytest.approx(1.0)
        assert norm.exact_limit == pytest.approx(1.0)

    def test_segment_truncated_below_limit(self):
        spec = RegionSpec.of(Segment(0, 1))
        op = TruncatedDiagonal.from_spec(spec, 4096)
        lam = 0.5 + 0.1j
        norm = op.resolvent_norm(lam)
        radius = covering_radius(spec, 4096, Window(0, 1, -0.5, 0.5)).radius_estimate
        delta = radius / spec.distance(lam)
        assert norm.exact_limit / (1 + delta) <= norm.truncated <= norm.exact_limit

    def test_exact_hit_is_infinite(self):
        op = _make_op(Disk(0, 1), N=64)
        assert op.resolvent_norm(op.sequence.exact(5)).truncated == math.inf


class TestClassify:
    """Tests for TruncatedDiagonal.classify."""

    def test_exact_multiplier_is_point(self):
        op = _make_op(Segment(0, 1), N=64)
        result = op.classify(op.sequence.exact(5))
        assert result.kind is SpectralKind.POINT
        assert result.witness_index == 5
        assert not result.truncation_limited

    def test_float_multiplier_is_truncation_limited(self):
        op = _make_op(Segment(0, 1), N=64)
        result = op.classify(0.5)
        assert result.kind is SpectralKind.POINT
        assert result.witness_index == 3
        assert result.truncation_limited

    def test_boundary_point_outside_enumeration_is_continuous(self):
        op = _make_op(Disk(0, 1))
        lam = cmath.exp(1j * math.sqrt(2) * math.pi)
        exact = ExactComplex.from_complex(lam)
        assert op.sequence.index_of(exact, op.N) is None
        result = op.classify(exact)
        assert result.kind is SpectralKind.CONTINUOUS
        assert result.resolvent_norm == math.inf

    def test_exterior_is_resolvent_set(self):
        result = _make_op(Disk(0, 1)).classify(2.0)
        assert result.kind is SpectralKind.RESOLVENT_SET
        assert result.dist == pytest.approx(1.0)
        assert result.resolvent_norm == pytest.approx(1.0)

    def test_exact_rational_beyond_prefix_is_continuous(self):
        op = _make_op(Segment(0, 1), N=8)
        result = op.classify(ExactComplex(Fraction(1, 997)))
        assert result.kind is SpectralKind.CONTINUOUS

    def test_tolerance_band(self):
        op = _make_op(Disk(0, 1), N=64)
        assert op.classify(1.0 + 1e-6, tol=1e-3).kind is SpectralKind.CONTINUOUS
        assert op.classify(1.0 + 1e-6, tol=1e-9).kind is SpectralKind.RESOLVENT_SET


class TestApproxEigenvector:
    def test_exact_eigenvector(self):
        op = _make_op(Disk(0, 1), N=64)
        vector, residual = op.approx_eigenvector(op.values[2])
        assert vector == SparseVector.basis(3)
        assert residual == 0.0

    def test_residual_below_covering_radius(self):
        spec = RegionSpec.of(Segment(0, 1))
        op = TruncatedDiagonal.from_spec(spec, 4096)
        vector, residual = op.approx_eigenvector(0.5 + 1e-7)
        radius = covering_radius(spec, 4096, Window(0, 1, -0.5, 0.5)).radius_estimate
        assert residual <= radius + 1e-7
        assert vector.norm == pytest.approx(1.0)

    def test_distance_to_only_multiplier(self):
        vector, residual = _make_op(Point(1), N=4).approx_eigenvector(0)
        assert vector == SparseVector.basis(1)
        assert residual == pytest.approx(1.0)

    def test_residual_matches_operator_action(self):
        op = _make_op(Disk(0, 1), N=256)
        lam = 0.3 - 0.7j
        vector, residual = op.approx_eigenvector(lam)
        assert (op.apply(vector) - vector.scaled(lam)).norm == pytest.approx(residual)


class TestUnboundednessWitness:
    def test_half_plane(self):
        op = _make_op(HalfPlane(1, 0))
        witness = op.unboundedness_witness(1e3)
        assert isinstance(witness, DiagonalWitness)
        assert witness.ratio > 1e3
        assert abs(op.sequence.value(witness.index)) == pytest.approx(witness.ratio)

    def test_full_plane_large_threshold(self):
        witness = _make_op(FullPlane()).unboundedness_witness(1e6)
        assert isinstance(witness, DiagonalWitness)
        assert witness.ratio > 1e6

    def test_bounded_region_certificate(self):
        result = _make_op(Disk(0, 1)).unboundedness_witness(2.0)
        assert isinstance(result, BoundedCertificate)
        assert result.enclosing_radius <= 1.0
        assert result.observed_sup <= 1.0 + 1e-12

    def test_budget_exhausted(self):
        op = _make_op(HalfPlane(1, 0))
        with pytest.raises(SearchBudgetExhausted):
            op.unboundedness_witness(1e300, budget=100)

    def test_threshold_must_be_positive(self):
        with pytest.raises(ValueError):
            _make_op(FullPlane()).unboundedness_witness(0)

    def test_witness_is_first_index_above_threshold(self):
        op = _make_op(FullPlane())
        witness = op.unboundedness_witness(50.0)
        magnitudes = np.abs(op.sequence.prefix(witness.index))
        assert np.all(magnitudes[:-1] <= 50.0)
