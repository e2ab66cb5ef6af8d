"""Truncated multiplication operator M(x_n) = (m_n x_n) on l2."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from spectral_construct.config import settings
from spectral_construct.errors import IndexBeyondTruncation, SearchBudgetExhausted, SingularEntry
from spectral_construct.geometry.region import RegionSpec
from spectral_construct.models import ExactComplex, SparseVector, SpectralKind
from spectral_construct.operators.multipliers import MultiplierSequence, sequence_for

logger = logging.getLogger(__name__)

Lambda = Union[complex, float, ExactComplex]

WITNESS_CHUNK = 4096


def as_complex(lam: Lambda) -> complex:
    return lam.to_complex() if isinstance(lam, ExactComplex) else complex(lam)


def reciprocal(value: float) -> float:
    """1/value with 1/0 = inf and 1/inf = 0."""
    if value == 0:
        return math.inf
    if math.isinf(value):
        return 0.0
    return 1.0 / value


@dataclass
class SpectrumClass:
    """Where lambda sits relative to sigma(M), with witness data."""

    kind: SpectralKind
    dist: float
    resolvent_norm: float  # limit 1/dist(lambda, sigma)
    resolvent_norm_truncated: float
    nearest_index: int
    nearest_gap: float  # |m_k - lambda| for the nearest prefix multiplier
    witness_index: Optional[int] = None
    truncation_limited: bool = False


@dataclass
class ResolventNorm:
    """Prefix value max_{n<=N} 1/|m_n - lambda| and its N -> inf limit."""

    truncated: float
    exact_limit: float


@dataclass
class BoundedCertificate:
    """sigma is bounded, so ||M|| = sup |m_n| <= enclosing_radius."""

    enclosing_radius: float
    observed_sup: float


@dataclass
class DiagonalWitness:
    """Basis vector e_n with ||M e_n|| / ||e_n|| = |m_n| = ratio."""

    vector: SparseVector
    index: int
    ratio: float


class TruncatedDiagonal:
    """First-N realization of M with exact per-entry resolvent arithmetic."""

    def __init__(self, sequence: MultiplierSequence, N: Optional[int] = None):
        """Initialize the truncation.

        Args:
            sequence: Multiplier enumeration of a nonempty sigma
            N: Truncation level (defaults to the configured truncation)
        """
        N = settings.truncation if N is None else N
        if N < 1:
            raise ValueError("truncation level N must be at least 1")
        self.sequence = sequence
        self.spec: RegionSpec = sequence.spec
        self.N = N
        self.values = sequence.prefix(N)

    @classmethod
    def from_spec(
        cls, spec: RegionSpec, N: Optional[int] = None, rational_order: Optional[str] = None
    ) -> TruncatedDiagonal:
        return cls(sequence_for(spec, rational_order), N)

    def _check_support(self, x: SparseVector) -> None:
        if x.max_index > self.N:
            raise IndexBeyondTruncation(x.max_index, self.N)

    def _gaps(self, lam: complex) -> np.ndarray:
        return np.abs(self.values - lam)

    def _point_index(self, lam: Lambda) -> tuple[Optional[int], bool]:
        """Index of a multiplier equal to lambda and whether the match is float-limited."""
        if isinstance(lam, ExactComplex):
            return self.sequence.index_of(lam, self.N), False
        lam = complex(lam)
        close = (
            (np.abs(self.values.real - lam.real) <= np.spacing(abs(lam.real)))
            & (np.abs(self.values.imag - lam.imag) <= np.spacing(abs(lam.imag)))
        )
        hits = np.flatnonzero(close)
        return (int(hits[0]) + 1 if hits.size else None), True

    def apply(self, x: SparseVector) -> SparseVector:
        """(M x)_n = m_n x_n."""
        self._check_support(x)
        return SparseVector(
            x.indices,
            tuple(self.values[n - 1] * c for n, c in zip(x.indices, x.coefficients)),
        )

    def resolvent_apply(self, lam: Lambda, x: SparseVector) -> SparseVector:
        """(R(lambda, M) x)_n = x_n / (m_n - lambda)."""
        self._check_support(x)
        lam_c = as_complex(lam)
        coefficients = []
        for n, c in zip(x.indices, x.coefficients):
            if isinstance(lam, ExactComplex):
                singular = self.sequence.exact(n) == lam
            else:
                singular = self.values[n - 1] == lam_c
            if singular:
                raise SingularEntry(n)
            coefficients.append(c / (self.values[n - 1] - lam_c))
        return SparseVector(x.indices, tuple(coefficients))

    def resolvent_norm(self, lam: Lambda) -> ResolventNorm:
        """Truncated norm and its limit 1/dist(lambda, sigma) for the normal operator M."""
        lam_c = as_complex(lam)
        gap = float(self._gaps(lam_c).min())
        if isinstance(lam, ExactComplex) and self.sequence.index_of(lam, self.N) is not None:
            gap = 0.0
        return ResolventNorm(
            truncated=reciprocal(gap),
            exact_limit=reciprocal(self.spec.distance(lam_c)),
        )

    def classify(self, lam: Lambda, tol: Optional[float] = None) -> SpectrumClass:
        """Point, continuous or resolvent-set classification of lambda.

        Point needs lambda to equal some m_n with n <= N: exactly for
        ExactComplex input, to one ulp per component (flagged as
        truncation-limited) for floats.
        """
        tol = settings.tolerance if tol is None else tol
        lam_c = as_complex(lam)
        gaps = self._gaps(lam_c)
        nearest = int(np.argmin(gaps))
        nearest_gap = float(gaps[nearest])
        dist = self.spec.distance(lam_c)
        index, limited = self._point_index(lam)

        if index is not None:
            return SpectrumClass(
                kind=SpectralKind.POINT,
                dist=dist,
                resolvent_norm=math.inf,
                resolvent_norm_truncated=math.inf,
                nearest_index=index,
                nearest_gap=float(gaps[index - 1]),
                witness_index=index,
                truncation_limited=limited,
            )
        kind = SpectralKind.CONTINUOUS if dist <= tol else SpectralKind.RESOLVENT_SET
        return SpectrumClass(
            kind=kind,
            dist=dist,
            resolvent_norm=reciprocal(dist) if kind is SpectralKind.RESOLVENT_SET else math.inf,
            resolvent_norm_truncated=reciprocal(nearest_gap),
            nearest_index=nearest + 1,
            nearest_gap=nearest_gap,
        )

    def approx_eigenvector(self, lam: Lambda) -> tuple[SparseVector, float]:
        """Unit e_k for the nearest multiplier (smallest k on ties) and ||(M - lambda) e_k||."""
        gaps = self._gaps(as_complex(lam))
        k = int(np.argmin(gaps)) + 1
        return SparseVector.basis(k), float(gaps[k - 1])

    def unboundedness_witness(
        self, K: float, budget: Optional[int] = None
    ) -> Union[DiagonalWitness, BoundedCertificate]:
        """e_n with |m_n| > K when sigma is unbounded, else a bound on ||M||."""
        if K <= 0:
            raise ValueError("K must be positive")
        bounded, radius = self.spec.is_bounded()
        if bounded:
            return BoundedCertificate(
                enclosing_radius=radius,
                observed_sup=float(np.abs(self.values).max()),
            )
        budget = settings.witness_budget if budget is None else budget
        start = 0
        while start < budget:
            stop = min(start + WITNESS_CHUNK, budget)
            magnitudes = np.abs(self.sequence.prefix(stop)[start:])
            above = np.flatnonzero(magnitudes > K)
            if above.size:
                n = start + int(above[0]) + 1
                logger.info(
                    "unboundedness witness |m_%d| = %.3e > %.3e", n, magnitudes[above[0]], K
                )
                return DiagonalWitness(SparseVector.basis(n), n, float(magnitudes[above[0]]))
            start = stop
        raise SearchBudgetExhausted(budget, K)
