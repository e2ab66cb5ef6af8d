"""Pydantic response models for the JSON outputs of the CLI."""

from __future__ import annotations

import math
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from spectral_construct.analyzers.pseudospec import SweepResult
from spectral_construct.analyzers.verification import VerificationReport
from spectral_construct.models import ExactComplex
from spectral_construct.operators.direct_sum import SpectralReport, UnboundednessReport
from spectral_construct.operators.volterra_op import ResolventEstimate

ComplexPair = tuple[float, float]


def _pair(z: complex) -> ComplexPair:
    return (z.real, z.imag)


class _Response(BaseModel):
    # inf appears for resolvent norms at spectral points
    model_config = ConfigDict(ser_json_inf_nan="constants")


# ─── Classification ──────────────────────────────────────────────


class CertificateModel(_Response):
    """Approximate eigenvector (e_k, 0) with ||(A - lambda)(e_k, 0)|| = residual."""

    index: int
    residual: float


class ClassificationResponse(_Response):
    lam: ComplexPair = Field(serialization_alias="lambda")
    exact: Optional[str] = None
    kind: str = Field(serialization_alias="class")
    witness: Optional[int] = None
    truncation_limited: bool = False
    dist: float
    resolvent_norm: float
    resolvent_norm_truncated: float
    volterra_norm: Optional[float] = None
    volterra_overflow: bool = False
    certificate: Optional[CertificateModel] = None
    N: int
    n_cells: int
    p: int


# ─── Volterra ────────────────────────────────────────────────────


class ResolventEstimateResponse(_Response):
    lam: ComplexPair = Field(serialization_alias="lambda")
    n_cells: int
    p: int
    norm_estimate: float
    method: str
    iterations: int
    residual_tolerance: float
    log_norm: float


# ─── Grids ───────────────────────────────────────────────────────


class SpectrumReportSummary(_Response):
    nodes: int
    grid: tuple[int, int]
    counts: dict[str, int]
    output: Optional[str] = None


class SweepSummary(_Response):
    nodes: int
    grid: tuple[int, int]
    counts: dict[str, int]
    sublevel_counts: dict[str, int]
    covering_radius: Optional[float] = None
    max_deviation: float
    error_count: int
    output: Optional[str] = None


# ─── Verification ────────────────────────────────────────────────


class CheckModel(_Response):
    module: str
    name: str
    status: str
    detail: str
    value: Optional[float] = None


class VerificationResponse(_Response):
    profile: str
    region: str
    passed: bool
    counts: dict[str, int]
    checks: list[CheckModel]


# ─── Certificates ────────────────────────────────────────────────


class WitnessModel(_Response):
    block: str
    ratio: float
    index: Optional[int] = None
    frequency: Optional[int] = None


class BoundModel(_Response):
    enclosing_radius: float
    observed_sup: float


class CertificateResponse(_Response):
    classification: ClassificationResponse
    approximate_eigenvector: Optional[CertificateModel] = None
    K: float
    witnesses: list[WitnessModel]
    m_bound: Optional[BoundModel] = None


def classification_response(
    report: SpectralReport,
    N: int,
    n_cells: int,
    p: int,
    exact: Optional[ExactComplex] = None,
) -> ClassificationResponse:
    certificate = None
    if report.certificate is not None:
        certificate = CertificateModel(
            index=report.certificate.x.indices[0],
            residual=report.certificate_residual,
        )
    return ClassificationResponse(
        lam=_pair(report.lam),
        exact=str(exact) if exact is not None else None,
        kind=report.kind.value,
        witness=report.witness_index,
        truncation_limited=report.truncation_limited,
        dist=report.dist_to_sigma,
        resolvent_norm=report.resolvent_norm_exact_limit,
        resolvent_norm_truncated=report.resolvent_norm_truncated,
        volterra_norm=None if math.isnan(report.volterra_norm) else report.volterra_norm,
        volterra_overflow=report.volterra_overflow,
        certificate=certificate,
        N=N,
        n_cells=n_cells,
        p=p,
    )


def estimate_response(estimate: ResolventEstimate) -> ResolventEstimateResponse:
    return ResolventEstimateResponse(
        lam=_pair(estimate.lam),
        n_cells=estimate.n_cells,
        p=estimate.p,
        norm_estimate=estimate.norm_estimate,
        method=estimate.method,
        iterations=estimate.iterations,
        residual_tolerance=estimate.residual_tolerance,
        log_norm=estimate.log_norm,
    )


def sweep_summary(result: SweepResult, output: Optional[str] = None) -> SweepSummary:
    return SweepSummary(
        nodes=len(result.nodes),
        grid=(result.config.nx, result.config.ny),
        counts=result.counts,
        sublevel_counts={"%g" % eps: count for eps, count in result.sublevel_counts.items()},
        covering_radius=result.covering_radius,
        max_deviation=result.max_deviation,
        error_count=result.error_count,
        output=output,
    )


def verification_response(report: VerificationReport) -> VerificationResponse:
    return VerificationResponse(
        profile=report.profile,
        region=report.region,
        passed=report.passed,
        counts=report.counts(),
        checks=[
            CheckModel(
                module=check.module,
                name=check.name,
                status=check.status.value,
                detail=check.detail,
                value=check.value,
            )
            for check in report.checks
        ],
    )


def certificate_response(
    classification: ClassificationResponse,
    approximate: Optional[tuple[int, float]],
    witnesses: UnboundednessReport,
    K: float,
) -> CertificateResponse:
    bound = witnesses.m_bound
    return CertificateResponse(
        classification=classification,
        approximate_eigenvector=(
            CertificateModel(index=approximate[0], residual=approximate[1])
            if approximate is not None
            else None
        ),
        K=K,
        witnesses=[
            WitnessModel(block=w.block, ratio=w.ratio, index=w.index, frequency=w.frequency)
            for w in witnesses.witnesses
        ],
        m_bound=(
            BoundModel(enclosing_radius=bound.enclosing_radius, observed_sup=bound.observed_sup)
            if bound is not None
            else None
        ),
    )


def dump(model: BaseModel) -> str:
    """Serialized JSON with public field names."""
    return model.model_dump_json(indent=2, by_alias=True)
