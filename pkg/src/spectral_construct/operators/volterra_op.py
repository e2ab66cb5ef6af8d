"""Differentiation operator D x = x' with x(0) = 0 on L_p(0, 1) and its Volterra resolvent.

The resolvent

    [R(lambda, D) y](t) = integral_0^t exp(lambda (t - s)) y(s) ds

exists for every complex lambda, so the spectrum of D is empty. Applications
use the one-step trapezoid recurrence; the discretized matrix is only built
to estimate norms.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.signal import lfilter

from spectral_construct.config import settings
from spectral_construct.errors import (
    ConfigurationError,
    DomainViolation,
    GridTooCoarse,
    NonConvergence,
    OverflowGuard,
)
from spectral_construct.models import GridFunction, trapezoid_weights

logger = logging.getLogger(__name__)

BOUNDARY_TOLERANCE = 1e-12
MIN_NORM_CELLS = 16
POWER_SEED = 0
LOG_FLOAT_MAX = math.log(np.finfo(float).max)


@dataclass
class ResolventEstimate:
    """Discrete estimate of ||R(lambda, D)|| in L_p(0, 1)."""

    lam: complex
    n_cells: int
    p: int
    norm_estimate: float
    method: str  # "power-iteration" (p = 2) or "column-sum" (p = 1)
    iterations: int
    residual_tolerance: float
    log_norm: float = math.nan


@dataclass
class GridWitness:
    """sin(k pi t) on the grid with ||D x|| / ||x|| = ratio."""

    function: GridFunction
    k: int
    ratio: float


def differentiate(x: GridFunction) -> GridFunction:
    """Second-order derivative: central in the interior, one-sided at the ends."""
    if abs(x.samples[0]) > BOUNDARY_TOLERANCE:
        raise DomainViolation(
            f"x(0) = {x.samples[0]:.3e} violates the boundary condition x(0) = 0"
        )
    return x.with_samples(np.gradient(x.samples, x.h, edge_order=2))


def _step_factor(lam: complex, h: float) -> complex:
    with np.errstate(over="ignore", invalid="ignore"):
        factor = complex(np.exp(lam * h))
    if not (math.isfinite(factor.real) and math.isfinite(factor.imag)):
        raise OverflowGuard(
            f"exp(lambda h) is not finite for lambda={lam}, h={h:g}; refine the grid"
        )
    return factor


def resolvent_apply(lam: complex, y: GridFunction) -> GridFunction:
    """u = R(lambda, D) y via u_{i+1} = f u_i + (h/2)(f y_i + y_{i+1}), f = exp(lambda h).

    u(0) = 0 exactly.
    """
    lam = complex(lam)
    h = y.h
    f = _step_factor(lam, h)
    increments = (h / 2) * (f * y.samples[:-1] + y.samples[1:])
    with np.errstate(over="ignore", invalid="ignore"):
        tail = lfilter([1.0], [1.0, -f], increments)
    if not np.all(np.isfinite(tail)):
        raise OverflowGuard(f"resolvent overflowed for lambda={lam}; scale lambda or refine")
    return y.with_samples(np.concatenate(([0j], tail)))


def verify_resolvent(lam: complex, y: GridFunction) -> float:
    """max over interior nodes of |(D - lambda) R(lambda, D) y - y|."""
    u = resolvent_apply(lam, y)
    defect = differentiate(u).samples - complex(lam) * u.samples - y.samples
    return float(np.abs(defect[1:-1]).max())


def resolvent_matrix(lam: complex, n_cells: int, shift: float = 0.0) -> np.ndarray:
    """Lower-triangular trapezoid discretization K with u = K y, times exp(-shift).

    K_ij = w_ij exp(lambda (t_i - t_j)) for j <= i, where w_ij is h/2 at
    j = 0 and j = i and h in between. With shift >= Re lambda every kernel
    entry has modulus at most 1.
    """
    lam = complex(lam)
    h = 1.0 / n_cells
    idx = np.arange(n_cells + 1)
    lag = np.subtract.outer(idx, idx)
    lower = lag >= 0
    with np.errstate(over="ignore", invalid="ignore"):
        kernel = np.where(lower, np.exp(lam * h * np.where(lower, lag, 0) - shift), 0.0)
    if not np.all(np.isfinite(kernel)):
        raise OverflowGuard(f"resolvent kernel overflowed for lambda={lam}")
    weights = np.where(lower, h, 0.0)
    weights[:, 0] = h / 2
    weights[idx, idx] = h / 2
    weights[0, 0] = 0.0
    return kernel * weights


def _power_iteration(
    normal: np.ndarray, max_iterations: int, tolerance: float
) -> tuple[float, int, float]:
    """Largest eigenvalue of a Hermitian positive semidefinite matrix."""
    rng = np.random.default_rng(POWER_SEED)
    v = rng.standard_normal(normal.shape[0]) + 1j * rng.standard_normal(normal.shape[0])
    v /= np.linalg.norm(v)
    previous = 0.0
    change = math.inf
    for iteration in range(1, max_iterations + 1):
        w = normal @ v
        rayleigh = float(np.vdot(v, w).real)
        length = float(np.linalg.norm(w))
        if length == 0.0:
            return 0.0, iteration, 0.0
        v = w / length
        change = abs(rayleigh - previous) / rayleigh if rayleigh > 0 else math.inf
        if change < tolerance:
            return rayleigh, iteration, change
        previous = rayleigh
    raise NonConvergence(max_iterations, change)


def resolvent_norm_estimate(
    lam: complex,
    n_cells: Optional[int] = None,
    p: Optional[int] = None,
    *,
    max_iterations: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> ResolventEstimate:
    """Operator norm of the discretized resolvent in the trapezoid-weighted L_p norm.

    p = 2 runs power iteration on B^H B with B = W^(1/2) K W^(-1/2); p = 1
    takes the largest weighted column sum, which is exact. Both work on K
    scaled by exp(-max(Re lambda, 0)) and add the shift back in log space;
    OverflowGuard only when the norm itself exceeds the float range.
    """
    lam = complex(lam)
    n_cells = settings.n_cells if n_cells is None else n_cells
    p = settings.norm_p if p is None else p
    if p not in (1, 2):
        raise ConfigurationError(f"norm exponent must be 1 or 2, got {p}")
    if n_cells < MIN_NORM_CELLS:
        raise ConfigurationError(f"norm estimation needs n_cells >= {MIN_NORM_CELLS}")
    if n_cells > settings.max_matrix_cells:
        raise ConfigurationError(
            f"n_cells={n_cells} exceeds the matrix guard {settings.max_matrix_cells}"
        )

    shift = max(lam.real, 0.0)
    matrix = resolvent_matrix(lam, n_cells, shift)
    weights = trapezoid_weights(n_cells)

    if p == 1:
        column_sums = (weights @ np.abs(matrix)) / weights
        scaled_norm, method, iterations, change = float(column_sums.max()), "column-sum", 0, 0.0
    else:
        root = np.sqrt(weights)
        balanced = root[:, np.newaxis] * matrix / root[np.newaxis, :]
        top, iterations, change = _power_iteration(
            balanced.conj().T @ balanced,
            settings.power_max_iterations if max_iterations is None else max_iterations,
            settings.power_tolerance if tolerance is None else tolerance,
        )
        scaled_norm, method = math.sqrt(top), "power-iteration"
        logger.info(
            "power iteration for lambda=%s converged in %d iterations", lam, iterations
        )

    log_norm = shift + math.log(scaled_norm) if scaled_norm > 0 else -math.inf
    if log_norm >= LOG_FLOAT_MAX:
        raise OverflowGuard(
            f"||R(lambda, D)|| = exp({log_norm:.6g}) exceeds the float range for lambda={lam}"
        )
    return ResolventEstimate(
        lam=lam,
        n_cells=n_cells,
        p=p,
        norm_estimate=math.exp(log_norm),
        method=method,
        iterations=iterations,
        residual_tolerance=change,
        log_norm=log_norm,
    )


@lru_cache(maxsize=4096)
def _norm_for_real_part(re: float, n_cells: int, p: int) -> float:
    return resolvent_norm_estimate(complex(re, 0.0), n_cells, p).norm_estimate


def resolvent_norm(lam: complex, n_cells: Optional[int] = None, p: Optional[int] = None) -> float:
    """Cached ||R(lambda, D)|| estimate.

    Depends on Re lambda only: exp(i Im(lambda) t) is a unimodular multiplier
    that conjugates R(lambda, D) to R(Re lambda, D).
    """
    n_cells = settings.n_cells if n_cells is None else n_cells
    p = settings.norm_p if p is None else p
    return _norm_for_real_part(float(complex(lam).real), n_cells, p)


def witness_frequency(K: float) -> int:
    """Smallest k with k pi > K, plus one."""
    return math.ceil(K / math.pi) + 1


def unboundedness_witness(K: float, n_cells: Optional[int] = None, p: int = 2) -> GridWitness:
    """Domain element sin(k pi t) whose discrete Rayleigh ratio exceeds K.

    Starts at k = ceil(K / pi) + 1 and raises k while central differences,
    which scale the continuum ratio k pi by sin(k pi h) / (k pi h), keep the
    discrete ratio at or below K.
    """
    if K <= 0:
        raise ValueError("K must be positive")
    n_cells = settings.n_cells if n_cells is None else n_cells
    k = witness_frequency(K)
    if n_cells < 8 * k:
        raise GridTooCoarse(f"n_cells={n_cells} cannot resolve sin({k} pi t); need >= {8 * k}")
    while True:
        x = GridFunction.from_callable(lambda t, k=k: np.sin(k * np.pi * t), n_cells, p)
        ratio = differentiate(x).norm() / x.norm()
        if ratio > K:
            logger.debug("D witness k=%d ratio=%.6g on %d cells", k, ratio, n_cells)
            return GridWitness(function=x, k=k, ratio=ratio)
        k += 1
        if k > n_cells // 4:
            raise GridTooCoarse(f"discrete ratio stays below {K:g} on {n_cells} cells")
