"""Property battery for a region: every block of the construction checked at desk scale."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np

from spectral_construct.analyzers.pseudospec import SweepConfig, sweep
from spectral_construct.core.logging import log_context
from spectral_construct.errors import SingularEntry, SpectralError
from spectral_construct.geometry.region import RegionSpec
from spectral_construct.models import GridFunction, PairVector, SparseVector, SpectralKind, Window
from spectral_construct.operators import volterra_op
from spectral_construct.operators.direct_sum import DirectSumOperator
from spectral_construct.operators.multipliers import covering_radius

logger = logging.getLogger(__name__)

EMPTY_REASON = "sigma is empty, so A has no multiplication block"
MEMBERSHIP_TOLERANCE = 1e-12
ORDER_RANGE = (2.5, 6.0)
DUALITY_PASS_FRACTION = 0.95
ROUND_TRIP_LAMBDAS = (2.0, -1 + 1j, 1.5j, 0.5 - 1j)


class CheckStatus(Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    SKIP = "SKIP"


@dataclass(frozen=True)
class VerificationBudget:
    """Sizes used by one verification profile."""

    name: str
    truncation: int
    lambda_samples: int
    norm_grid: int  # nodes per side of the Volterra lambda grid on [-20, 20]^2
    norm_cells: int
    refinement_cells: tuple[int, int]
    witness_K: float
    enumeration_budget: int
    exact_queries: int
    sweep_grid: int


PROFILES: dict[str, VerificationBudget] = {
    "quick": VerificationBudget(
        name="quick",
        truncation=1024,
        lambda_samples=60,
        norm_grid=5,
        norm_cells=64,
        refinement_cells=(64, 128),
        witness_K=1e2,
        enumeration_budget=100_000,
        exact_queries=10,
        sweep_grid=9,
    ),
    "full": VerificationBudget(
        name="full",
        truncation=4096,
        lambda_samples=200,
        norm_grid=21,
        norm_cells=256,
        refinement_cells=(128, 256),
        witness_K=1e3,
        enumeration_budget=1_000_000,
        exact_queries=50,
        sweep_grid=21,
    ),
}


@dataclass
class CheckResult:
    name: str
    module: str
    status: CheckStatus
    detail: str = ""
    value: Optional[float] = None


@dataclass
class VerificationReport:
    """Outcome of every check for one region and profile."""

    profile: str
    region: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.status is not CheckStatus.FAIL for check in self.checks)

    def counts(self) -> dict[str, int]:
        return {
            status.value: sum(1 for check in self.checks if check.status is status)
            for status in CheckStatus
        }


def _outcome(
    name: str, module: str, ok: bool, detail: str, value: Optional[float] = None
) -> CheckResult:
    return CheckResult(name, module, CheckStatus.PASS if ok else CheckStatus.FAIL, detail, value)


def _skip(name: str, module: str, reason: str) -> CheckResult:
    return CheckResult(name, module, CheckStatus.SKIP, reason)


def check_window(spec: RegionSpec) -> Window:
    """Box around sigma (or around its point nearest 0) with room outside it."""
    if spec.is_empty():
        return Window(-2.0, 2.0, -2.0, 2.0)
    bounded, radius = spec.is_bounded()
    if bounded:
        half = radius + 1.0
        return Window(-half, half, -half, half)
    anchor = spec.nearest_point(0j)
    return Window(anchor.real - 2.0, anchor.real + 2.0, anchor.imag - 2.0, anchor.imag + 2.0)


# --- D block ---


def check_resolvent_formula(budget: VerificationBudget) -> CheckResult:
    worst = 0.0
    for n_cells in (64, 128, 256):
        y = GridFunction.from_callable(np.ones_like, n_cells)
        u = volterra_op.resolvent_apply(1.0, y)
        error = float(np.abs(u.samples - (np.exp(u.t) - 1.0)).max())
        worst = max(worst, error / u.h**2)
    linear = volterra_op.resolvent_apply(0.0, GridFunction.from_callable(np.ones_like, 64))
    linear_error = float(np.abs(linear.samples - linear.t).max())
    ok = worst <= 5.0 and linear_error <= 1e-10
    return _outcome(
        "resolvent_formula",
        "volterra_op",
        ok,
        f"max error / h^2 = {worst:.3f} (limit 5), lambda=0 error {linear_error:.1e}",
        worst,
    )


def check_empty_spectrum(budget: VerificationBudget) -> CheckResult:
    axis = np.linspace(-20.0, 20.0, budget.norm_grid)
    failures = 0
    largest = 0.0
    for im in axis:
        for re in axis:
            try:
                norm = volterra_op.resolvent_norm(complex(re, im), budget.norm_cells, 2)
            except SpectralError as exc:
                logger.warning("Volterra norm failed at %s: %s", complex(re, im), exc)
                failures += 1
                continue
            if not (math.isfinite(norm) and norm > 0):
                failures += 1
            largest = max(largest, norm)
    total = budget.norm_grid**2
    return _outcome(
        "empty_spectrum",
        "volterra_op",
        failures == 0,
        f"{total - failures}/{total} finite resolvent norms on [-20,20]^2, max {largest:.3e}",
        largest,
    )


def check_second_order(budget: VerificationBudget, seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    coarse, fine = budget.refinement_cells
    ratios = []
    for _ in range(10):
        lam = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
        residuals = [
            volterra_op.verify_resolvent(
                lam, GridFunction.from_callable(lambda t: np.cos(np.pi * t), n)
            )
            for n in (coarse, fine)
        ]
        ratios.append(residuals[0] / residuals[1])
    ok = all(ORDER_RANGE[0] <= r <= ORDER_RANGE[1] for r in ratios)
    return _outcome(
        "second_order",
        "volterra_op",
        ok,
        f"residual ratios per halving in [{min(ratios):.2f}, {max(ratios):.2f}]",
        float(np.median(ratios)),
    )


def check_linearity(budget: VerificationBudget, seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    n = budget.norm_cells
    y1 = GridFunction(n, rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1))
    y2 = GridFunction(n, rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1))
    alpha, beta = 2.0 - 1.0j, -0.5 + 3.0j
    lam = 2.0 - 3.0j
    mixed = y1.with_samples(alpha * y1.samples + beta * y2.samples)
    combined = volterra_op.resolvent_apply(lam, mixed)
    u1 = volterra_op.resolvent_apply(lam, y1).samples
    u2 = volterra_op.resolvent_apply(lam, y2).samples
    separate = alpha * u1 + beta * u2
    error = float(np.abs(combined.samples - separate).max())
    scale = max(1.0, float(np.abs(separate).max()))
    return _outcome(
        "linearity", "volterra_op", error <= 1e-12 * scale, f"max deviation {error:.2e}", error
    )


def check_unboundedness(
    operator: DirectSumOperator, budget: VerificationBudget
) -> CheckResult:
    report = operator.unboundedness_witnesses(budget.witness_K, budget.enumeration_budget)
    ratios = {w.block: w.ratio for w in report.witnesses}
    ok = all(r > budget.witness_K for r in ratios.values())
    if not operator.spec.is_bounded()[0]:
        ok = ok and "M" in ratios
    detail = ", ".join(f"{block}: {ratio:.4g}" for block, ratio in ratios.items())
    return _outcome("unboundedness", "direct_sum", ok, f"K={budget.witness_K:g}; {detail}")


# --- M block ---


def check_membership(operator: DirectSumOperator) -> CheckResult:
    count = min(operator.N, 10_000)
    prefix = operator.m_part.sequence.prefix(count)
    worst = float(operator.spec.distances(prefix).max())
    return _outcome(
        "membership",
        "multipliers",
        worst <= MEMBERSHIP_TOLERANCE,
        f"max distance of m_1..m_{count} to sigma: {worst:.1e}",
        worst,
    )


def check_covering(operator: DirectSumOperator, window: Window, seed: int) -> CheckResult:
    sequence = operator.m_part.sequence
    try:
        coarse = covering_radius(
            operator.spec, max(1, operator.N // 4), window, seed=seed, sequence=sequence
        )
        fine = covering_radius(operator.spec, operator.N, window, seed=seed, sequence=sequence)
    except SpectralError as exc:
        return _outcome("covering_radius", "multipliers", False, str(exc))
    ok = fine.radius_estimate <= coarse.radius_estimate
    return _outcome(
        "covering_radius",
        "multipliers",
        ok,
        f"r(N/4)={coarse.radius_estimate:.4g}, r(N)={fine.radius_estimate:.4g}",
        fine.radius_estimate,
    )


def check_resolvent_identity(
    operator: DirectSumOperator, window: Window, seed: int
) -> CheckResult:
    rng = np.random.default_rng(seed)
    m = operator.m_part
    worst = 0.0
    checked = 0
    for lam in window.uniform(rng, 100):
        indices = np.unique(rng.integers(1, m.N + 1, size=5))
        coefficients = rng.standard_normal(indices.size) + 1j * rng.standard_normal(indices.size)
        x = SparseVector(tuple(int(i) for i in indices), tuple(coefficients))
        try:
            r = m.resolvent_apply(complex(lam), x)
        except SingularEntry:
            continue
        back = m.apply(r) - r.scaled(complex(lam))
        values = m.values[indices - 1]
        conditioning = max(1.0, float(np.max((np.abs(values) + abs(lam)) / np.abs(values - lam))))
        worst = max(worst, (back - x).norm / (x.norm * conditioning))
        checked += 1
    return _outcome(
        "resolvent_identity",
        "diagonal_op",
        worst <= 1e-12,
        f"{checked} samples, max relative defect {worst:.1e}",
        worst,
    )


def check_point_spectrum(
    operator: DirectSumOperator, budget: VerificationBudget, seed: int
) -> CheckResult:
    rng = np.random.default_rng(seed)
    sequence = operator.m_part.sequence
    misses = []
    for n in rng.integers(1, operator.N + 1, size=budget.exact_queries):
        value = sequence.exact(int(n))
        report = operator.classify(value)
        expected = sequence.index_of(value, operator.N)
        if report.kind is not SpectralKind.POINT or report.witness_index != expected:
            misses.append(int(n))
    return _outcome(
        "point_spectrum",
        "diagonal_op",
        not misses,
        f"{budget.exact_queries - len(misses)}/{budget.exact_queries} exact queries returned Point"
        + (f"; misses at n={misses[:5]}" if misses else ""),
    )


# --- A = M + D ---


def check_spectrum_equality(
    operator: DirectSumOperator, window: Window, budget: VerificationBudget, seed: int
) -> CheckResult:
    """classify says ResolventSet exactly when dist > tol; on-sigma samples blow up."""
    rng = np.random.default_rng(seed)
    spec = operator.spec
    tol = 1e-9
    off = list(window.uniform(rng, budget.lambda_samples - budget.lambda_samples // 2))
    on: list[complex] = []
    radius = None
    if not spec.is_empty():
        drawn = spec.sample_boundary_and_interior(1000, seed)
        on = [z for z in drawn[: budget.lambda_samples // 2] if window.contains(z)]
        radius = covering_radius(
            spec, operator.N, window, seed=seed, sequence=operator.m_part.sequence
        ).radius_estimate

    mismatches = 0
    weak = 0
    for lam in off + on:
        report = operator.classify(complex(lam), tol)
        if (report.kind is SpectralKind.RESOLVENT_SET) != (spec.distance(complex(lam)) > tol):
            mismatches += 1
    for lam in on:
        norm = operator.m_part.resolvent_norm(complex(lam)).truncated
        if radius and norm < 1.0 / radius:
            weak += 1
    total = len(off) + len(on)
    return _outcome(
        "spectrum_equality",
        "direct_sum",
        mismatches == 0 and weak == 0,
        f"{total - mismatches}/{total} classifications agree with dist; "
        f"{len(on) - weak}/{len(on)} on-sigma norms >= 1/covering radius",
    )


def check_duality(operator: DirectSumOperator, window: Window, seed: int) -> CheckResult:
    """1 / ||R_N(lambda, M)|| tracks dist(lambda, sigma) away from sigma."""
    rng = np.random.default_rng(seed + 1)
    spec = operator.spec
    radius = covering_radius(
        spec, operator.N, window, seed=seed, sequence=operator.m_part.sequence
    ).radius_estimate
    qualifying = passing = 0
    for lam in window.uniform(rng, 500):
        lam = complex(lam)
        dist = spec.distance(lam)
        if dist < 10 * radius or not window.contains(spec.nearest_point(lam)):
            continue
        qualifying += 1
        s = 1.0 / operator.m_part.resolvent_norm(lam).truncated
        passing += abs(s - dist) <= max(1.2 * radius, 1e-12 * (1.0 + dist))
    if not qualifying:
        return _skip(
            "norm_distance_duality", "diagonal_op", "no node with dist >= 10 covering radii"
        )
    fraction = passing / qualifying
    return _outcome(
        "norm_distance_duality",
        "diagonal_op",
        fraction >= DUALITY_PASS_FRACTION,
        f"{passing}/{qualifying} nodes within 1.2 covering radii ({radius:.3g})",
        fraction,
    )


def check_round_trip(operator: DirectSumOperator, seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    n_cells = operator.n_cells
    worst = 0.0
    checked = 0
    for lam in ROUND_TRIP_LAMBDAS:
        a, b = rng.uniform(0.5, 2.0, size=2)
        y = GridFunction.from_callable(lambda t: a * np.cos(b * np.pi * t), n_cells, operator.p)
        x = SparseVector()
        if operator.N:
            x = SparseVector.basis(int(rng.integers(1, operator.N + 1)))
        try:
            r = operator.resolvent_apply(lam, PairVector(x, y))
        except SingularEntry:
            continue
        image = operator.apply(r)
        x_defect = (image.x - r.x.scaled(lam) - x).norm
        y_defect = float(np.abs((image.y.samples - lam * r.y.samples - y.samples)[1:-1]).max())
        allowed = max(1e-10, 10.0 * (1 + abs(lam)) ** 3 * r.y.h**2)
        worst = max(worst, x_defect / 1e-10, y_defect / allowed)
        checked += 1
    return _outcome(
        "resolvent_round_trip",
        "direct_sum",
        checked > 0 and worst <= 1.0,
        f"{checked} pairs, worst defect at {worst:.2f} of tolerance",
        worst,
    )


def check_sweep(
    operator: DirectSumOperator, window: Window, budget: VerificationBudget, seed: int
) -> CheckResult:
    config = SweepConfig(window=window, nx=budget.sweep_grid, ny=budget.sweep_grid, seed=seed)
    result = sweep(operator, config)
    problems = []
    if result.error_count:
        problems.append(f"{result.error_count} node errors")
    if any(node.s_truncated < 0 or node.s_exact < 0 for node in result.nodes if node.ok):
        problems.append("negative s")
    counts = [result.sublevel_counts[eps] for eps in config.epsilons]
    if any(a < b for a, b in zip(counts, counts[1:])):
        problems.append("sublevel sets not nested")
    radius = result.covering_radius
    if radius is not None:
        for node in result.nodes:
            if node.dist <= MEMBERSHIP_TOLERANCE and node.s_truncated > radius:
                problems.append(f"no blow-up at {node.lam}")
                break
        for node in result.nodes:
            far = node.dist >= 10 * radius and node.dist > 0
            if not far or 1.0 / node.dist < node.volterra_norm:
                continue
            if abs(node.s_truncated - node.dist) > max(1.2 * radius, 1e-12 * (1.0 + node.dist)):
                problems.append(f"s deviates from dist at {node.lam}")
                break
    resolvent_nodes = result.counts.get(SpectralKind.RESOLVENT_SET.value, 0)
    if operator.spec.is_empty() and resolvent_nodes != len(result.nodes):
        problems.append("empty sigma sweep left the resolvent set")
    return _outcome(
        "sweep",
        "pseudospec",
        not problems,
        "; ".join(problems) or f"{len(result.nodes)} nodes, classes {result.counts}",
    )


def verify_all(
    spec: RegionSpec,
    profile: str = "quick",
    seed: int = 0,
    n_cells: Optional[int] = None,
    region_label: Optional[str] = None,
) -> VerificationReport:
    """Run every check for ``spec``; failures are data, never exceptions."""
    budget = PROFILES[profile]
    operator = DirectSumOperator(spec, N=budget.truncation, n_cells=n_cells)
    window = check_window(spec)
    report = VerificationReport(profile=budget.name, region=region_label or _describe(spec))

    Check = tuple[str, str, Callable[[], CheckResult]]
    m_checks: list[Check] = [
        ("membership", "multipliers", lambda: check_membership(operator)),
        ("covering_radius", "multipliers", lambda: check_covering(operator, window, seed)),
        (
            "resolvent_identity",
            "diagonal_op",
            lambda: check_resolvent_identity(operator, window, seed),
        ),
        ("point_spectrum", "diagonal_op", lambda: check_point_spectrum(operator, budget, seed)),
        ("norm_distance_duality", "diagonal_op", lambda: check_duality(operator, window, seed)),
    ]
    d_checks: list[Check] = [
        ("resolvent_formula", "volterra_op", lambda: check_resolvent_formula(budget)),
        ("empty_spectrum", "volterra_op", lambda: check_empty_spectrum(budget)),
        ("second_order", "volterra_op", lambda: check_second_order(budget, seed)),
        ("linearity", "volterra_op", lambda: check_linearity(budget, seed)),
        ("unboundedness", "direct_sum", lambda: check_unboundedness(operator, budget)),
        (
            "spectrum_equality",
            "direct_sum",
            lambda: check_spectrum_equality(operator, window, budget, seed),
        ),
        ("resolvent_round_trip", "direct_sum", lambda: check_round_trip(operator, seed)),
        ("sweep", "pseudospec", lambda: check_sweep(operator, window, budget, seed)),
    ]

    with log_context(profile=budget.name):
        for name, module, run in m_checks:
            if spec.is_empty():
                report.checks.append(_skip(name, module, EMPTY_REASON))
                continue
            report.checks.append(_run(name, module, run))
        for name, module, run in d_checks:
            report.checks.append(_run(name, module, run))

        for check in report.checks:
            if check.status is CheckStatus.FAIL:
                logger.warning(
                    "check %s.%s failed: %s",
                    check.module,
                    check.name,
                    check.detail,
                    extra={"check": f"{check.module}.{check.name}"},
                )
        logger.info("verification %s: %s", budget.name, report.counts())
    return report


def _run(name: str, module: str, run: Callable[[], CheckResult]) -> CheckResult:
    try:
        with log_context(check=f"{module}.{name}"):
            return run()
    except SpectralError as exc:
        return CheckResult(name, module, CheckStatus.FAIL, f"{type(exc).__name__}: {exc}")


def _describe(spec: RegionSpec) -> str:
    if spec.is_empty():
        return "empty"
    return " | ".join(primitive.kind for primitive in spec.primitives)
