"""Block-diagonal operator A = M + D on l2 + L_p(0, 1) with spectrum sigma."""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from spectral_construct.config import settings
from spectral_construct.errors import ConfigurationError, DomainViolation, OverflowGuard
from spectral_construct.geometry.region import RegionSpec
from spectral_construct.models import PairVector, SparseVector, SpectralKind, SumNorm, Window
from spectral_construct.operators import volterra_op
from spectral_construct.operators.diagonal_op import (
    BoundedCertificate,
    Lambda,
    ResolventNorm,
    TruncatedDiagonal,
    as_complex,
)

logger = logging.getLogger(__name__)


def _larger(m_norm: float, d_norm: float) -> float:
    """max of the block norms; a NaN (unevaluated) D norm defers to M."""
    return m_norm if math.isnan(d_norm) else max(m_norm, d_norm)


@dataclass
class SpectralReport:
    """Classification of lambda for A with norms and an approximate eigenvector."""

    lam: complex
    kind: SpectralKind
    dist_to_sigma: float
    resolvent_norm_truncated: float
    resolvent_norm_exact_limit: float
    volterra_norm: float
    volterra_overflow: bool = False
    witness_index: Optional[int] = None
    truncation_limited: bool = False
    certificate: Optional[PairVector] = None
    certificate_residual: Optional[float] = None


@dataclass
class SpectrumReport:
    """Row-major grid of reports with counts per class."""

    window: Window
    nx: int
    ny: int
    nodes: list[SpectralReport]
    counts: dict[str, int] = field(default_factory=dict)


@dataclass
class BlockWitness:
    """Domain pair v with ||A v|| / ||v|| = ratio, supported in one block."""

    block: str  # "M" or "D"
    vector: PairVector
    ratio: float
    index: Optional[int] = None
    frequency: Optional[int] = None


@dataclass
class UnboundednessReport:
    witnesses: list[BlockWitness]
    m_bound: Optional[BoundedCertificate] = None


class DirectSumOperator:
    """A = [[M, 0], [0, D]] acting blockwise.

    An empty sigma drops the M block, leaving A = D with empty spectrum.
    """

    def __init__(
        self,
        spec: RegionSpec,
        N: Optional[int] = None,
        n_cells: Optional[int] = None,
        p: Optional[int] = None,
        sum_norm: SumNorm = SumNorm.ONE_SUM,
        rational_order: Optional[str] = None,
    ):
        self.spec = spec
        self.n_cells = settings.n_cells if n_cells is None else n_cells
        self.p = settings.norm_p if p is None else p
        if self.p not in (1, 2):
            raise ConfigurationError(f"norm exponent must be 1 or 2, got {self.p}")
        if sum_norm is SumNorm.TWO_SUM and self.p != 2:
            raise ConfigurationError("the Hilbert 2-sum requires p = 2")
        self.sum_norm = sum_norm
        self.m_part: Optional[TruncatedDiagonal] = (
            None if spec.is_empty() else TruncatedDiagonal.from_spec(spec, N, rational_order)
        )

    @property
    def N(self) -> int:
        return self.m_part.N if self.m_part is not None else 0

    def _check_x(self, x: SparseVector) -> None:
        if self.m_part is None and x.indices:
            raise DomainViolation("sigma is empty, so A has no l2 block")

    def apply(self, v: PairVector) -> PairVector:
        """(M x, D y)."""
        self._check_x(v.x)
        x = self.m_part.apply(v.x) if self.m_part is not None else SparseVector()
        y = volterra_op.differentiate(v.y) if v.y is not None else None
        return PairVector(x, y)

    def resolvent_apply(self, lam: Lambda, w: PairVector) -> PairVector:
        """(R(lambda, M) x, R(lambda, D) y)."""
        self._check_x(w.x)
        x = self.m_part.resolvent_apply(lam, w.x) if self.m_part is not None else SparseVector()
        y = volterra_op.resolvent_apply(as_complex(lam), w.y) if w.y is not None else None
        return PairVector(x, y)

    def volterra_norm(self, lam: Lambda) -> float:
        return volterra_op.resolvent_norm(as_complex(lam), self.n_cells, self.p)

    def _capped_volterra_norm(self, lam: Lambda) -> tuple[float, bool]:
        """||R(lambda, D)||, or +inf with the overflow flag when it exceeds the float range."""
        try:
            return self.volterra_norm(lam), False
        except OverflowGuard as exc:
            logger.warning("volterra norm capped at inf: %s", exc)
            return math.inf, True

    def resolvent_norm(self, lam: Lambda) -> ResolventNorm:
        """Block-diagonal norm: the larger of the two block norms, for either sum norm."""
        if self.m_part is None:
            d_norm, _ = self._capped_volterra_norm(lam)
            return ResolventNorm(truncated=d_norm, exact_limit=d_norm)
        m_norm = self.m_part.resolvent_norm(lam)
        if math.isinf(m_norm.truncated):
            return m_norm
        d_norm, _ = self._capped_volterra_norm(lam)
        return ResolventNorm(
            truncated=max(m_norm.truncated, d_norm),
            exact_limit=max(m_norm.exact_limit, d_norm),
        )

    def classify(self, lam: Lambda, tol: Optional[float] = None) -> SpectralReport:
        """Spectral class of lambda; D adds no spectrum so M decides.

        D is only evaluated on the resolvent set; at spectral points both norms
        are +inf and volterra_norm stays NaN.
        """
        lam_c = as_complex(lam)
        if self.m_part is None:
            d_norm, overflow = self._capped_volterra_norm(lam)
            return SpectralReport(
                lam=lam_c,
                kind=SpectralKind.RESOLVENT_SET,
                dist_to_sigma=math.inf,
                resolvent_norm_truncated=d_norm,
                resolvent_norm_exact_limit=d_norm,
                volterra_norm=d_norm,
                volterra_overflow=overflow,
            )

        result = self.m_part.classify(lam, tol)
        d_norm, overflow = math.nan, False
        if result.kind is SpectralKind.RESOLVENT_SET:
            d_norm, overflow = self._capped_volterra_norm(lam)
        report = SpectralReport(
            lam=lam_c,
            kind=result.kind,
            dist_to_sigma=result.dist,
            resolvent_norm_truncated=_larger(result.resolvent_norm_truncated, d_norm),
            resolvent_norm_exact_limit=_larger(result.resolvent_norm, d_norm),
            volterra_norm=d_norm,
            volterra_overflow=overflow,
            witness_index=result.witness_index,
            truncation_limited=result.truncation_limited,
        )
        if result.kind is not SpectralKind.RESOLVENT_SET:
            report.certificate = PairVector(SparseVector.basis(result.nearest_index))
            report.certificate_residual = result.nearest_gap
        return report

    def spectrum_report(
        self, window: Window, nx: int, ny: int, tol: Optional[float] = None
    ) -> SpectrumReport:
        """Classify every node of an nx-by-ny grid over the window."""
        nodes = [self.classify(complex(z), tol) for z in window.nodes(nx, ny)]
        counts = Counter(node.kind.value for node in nodes)
        logger.info("spectrum report over %dx%d nodes: %s", nx, ny, dict(counts))
        return SpectrumReport(
            window=window,
            nx=nx,
            ny=ny,
            nodes=nodes,
            counts={kind.value: counts.get(kind.value, 0) for kind in SpectralKind},
        )

    def unboundedness_witnesses(
        self, K: float, budget: Optional[int] = None
    ) -> UnboundednessReport:
        """Witnesses with ratio > K: D always, M too when sigma is unbounded."""
        n_cells = max(self.n_cells, 8 * volterra_op.witness_frequency(K))
        d_witness = volterra_op.unboundedness_witness(K, n_cells, self.p)
        witnesses = [
            BlockWitness(
                block="D",
                vector=PairVector(y=d_witness.function),
                ratio=d_witness.ratio,
                frequency=d_witness.k,
            )
        ]
        if self.m_part is None:
            return UnboundednessReport(witnesses)

        m_result = self.m_part.unboundedness_witness(K, budget)
        if isinstance(m_result, BoundedCertificate):
            return UnboundednessReport(witnesses, m_bound=m_result)
        witnesses.append(
            BlockWitness(
                block="M",
                vector=PairVector(x=m_result.vector),
                ratio=m_result.ratio,
                index=m_result.index,
            )
        )
        return UnboundednessReport(witnesses)
