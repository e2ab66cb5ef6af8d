"""Pseudospectrum sweeper: s(lambda) = 1 / ||R(lambda, A)|| over a complex window."""

from __future__ import annotations

import contextvars
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from spectral_construct.config import settings
from spectral_construct.core.logging import log_context
from spectral_construct.errors import ConfigurationError, EmptyIntersection, SpectralError
from spectral_construct.models import SpectralKind, Window
from spectral_construct.operators.diagonal_op import reciprocal
from spectral_construct.operators.direct_sum import DirectSumOperator
from spectral_construct.operators.multipliers import covering_radius

logger = logging.getLogger(__name__)

COVERING_SAMPLES = 2000


@dataclass(frozen=True)
class SweepConfig:
    """Grid and thresholds for one sweep."""

    window: Window
    nx: int
    ny: int
    epsilons: tuple[float, ...] = (1e-1, 1e-2, 1e-3)
    seed: int = 0
    tol: Optional[float] = None
    workers: Optional[int] = None

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ConfigurationError("grid dimensions must be at least 2")
        epsilons = tuple(float(e) for e in self.epsilons)
        if any(not (e > 0 and math.isfinite(e)) for e in epsilons):
            raise ConfigurationError("epsilons must be positive and finite")
        if any(a <= b for a, b in zip(epsilons, epsilons[1:])):
            raise ConfigurationError("epsilons must be strictly decreasing")
        object.__setattr__(self, "epsilons", epsilons)


@dataclass
class SweepNode:
    """One grid node; ``error`` is set when the node could not be evaluated."""

    index: int
    lam: complex
    s_truncated: float = math.nan
    s_exact: float = math.nan
    dist: float = math.nan
    volterra_norm: float = math.nan
    kind: Optional[SpectralKind] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class SweepResult:
    """Per-node records in row-major order plus summary statistics."""

    config: SweepConfig
    nodes: list[SweepNode]
    covering_radius: Optional[float] = None
    max_deviation: float = 0.0  # max |s_truncated - s_exact| where dist > covering radius
    counts: dict[str, int] = field(default_factory=dict)
    sublevel_counts: dict[float, int] = field(default_factory=dict)
    error_count: int = 0

    def s_truncated_grid(self) -> np.ndarray:
        """s_truncated reshaped to (ny, nx)."""
        values = np.array([node.s_truncated for node in self.nodes])
        return values.reshape(self.config.ny, self.config.nx)


def _evaluate(
    operator: DirectSumOperator, index: int, lam: complex, tol: Optional[float]
) -> SweepNode:
    node = SweepNode(index=index, lam=lam)
    try:
        report = operator.classify(lam, tol)
    except SpectralError as exc:
        logger.warning(
            "sweep node %d at %s failed: %s", index, lam, exc, extra={"node": index, "lam": lam}
        )
        node.error = f"{type(exc).__name__}: {exc}"
        return node
    node.kind = report.kind
    node.dist = report.dist_to_sigma
    node.volterra_norm = report.volterra_norm
    node.s_truncated = reciprocal(report.resolvent_norm_truncated)
    node.s_exact = reciprocal(report.resolvent_norm_exact_limit)
    logger.debug(
        "node %d lambda=%s s=%.6g",
        index,
        lam,
        node.s_truncated,
        extra={"node": index, "lam": lam},
    )
    return node


def _sweep_covering_radius(
    operator: DirectSumOperator, config: SweepConfig, nodes: list[SweepNode]
) -> Optional[float]:
    """Covering radius over the window grown to hold the nearest point of every node.

    Those nearest points join the random samples, so every node on sigma has
    s_truncated <= radius.
    """
    if operator.m_part is None:
        return None
    reached = [node for node in nodes if node.ok and math.isfinite(node.dist)]
    finite = [node.dist for node in reached]
    margin = max(finite, default=0.0)
    try:
        report = covering_radius(
            operator.spec,
            operator.N,
            config.window.grown(margin),
            samples=COVERING_SAMPLES,
            seed=config.seed,
            sequence=operator.m_part.sequence,
            extra_points=[operator.spec.nearest_point(node.lam) for node in reached],
        )
    except EmptyIntersection:
        return None
    return report.radius_estimate


def sweep(operator: DirectSumOperator, config: SweepConfig) -> SweepResult:
    """Evaluate s_truncated and s_exact at every node of the window grid.

    Node failures are recorded on the node and never abort the sweep.
    """
    window = config.window
    with log_context(window=[window.x0, window.x1, window.y0, window.y1]):
        return _sweep(operator, config)


def _sweep(operator: DirectSumOperator, config: SweepConfig) -> SweepResult:
    points = [complex(z) for z in config.window.nodes(config.nx, config.ny)]
    workers = settings.sweep_workers if config.workers is None else config.workers

    if workers > 1:
        # worker threads start with an empty context; run each node in a copy of ours
        context = contextvars.copy_context()
        with ThreadPoolExecutor(max_workers=workers) as pool:
            nodes = list(
                pool.map(
                    lambda item: context.copy().run(
                        _evaluate, operator, item[0], item[1], config.tol
                    ),
                    enumerate(points),
                )
            )
    else:
        nodes = [_evaluate(operator, i, lam, config.tol) for i, lam in enumerate(points)]

    radius = _sweep_covering_radius(operator, config, nodes)
    evaluated = [node for node in nodes if node.ok]

    deviations = [
        abs(node.s_truncated - node.s_exact)
        for node in evaluated
        if radius is not None and node.dist > radius
    ]
    counts = {kind.value: 0 for kind in SpectralKind}
    for node in evaluated:
        counts[node.kind.value] += 1

    result = SweepResult(
        config=config,
        nodes=nodes,
        covering_radius=radius,
        max_deviation=max(deviations, default=0.0),
        counts=counts,
        sublevel_counts={
            eps: sum(1 for node in evaluated if node.s_truncated < eps)
            for eps in config.epsilons
        },
        error_count=len(nodes) - len(evaluated),
    )
    logger.info(
        "sweep of %d nodes: %s, %d errors, covering radius %s",
        len(nodes),
        counts,
        result.error_count,
        radius,
    )
    return result
