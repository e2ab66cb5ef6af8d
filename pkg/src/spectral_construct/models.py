"""Data models shared across spectral-construct."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Mapping, Optional, Union

import numpy as np

from spectral_construct.errors import ConfigurationError

Scalar = Union[int, Fraction]


class SpectralKind(Enum):
    """Parts of the spectrum a query point can belong to.

    No residual member: multiplication operators and their direct sums
    with the differentiation operator have empty residual spectrum.
    """

    POINT = "point"
    CONTINUOUS = "continuous"
    RESOLVENT_SET = "resolvent_set"


class SumNorm(Enum):
    """Norm placed on the direct sum X + Y."""

    ONE_SUM = "one_sum"  # ||x|| + ||y||
    TWO_SUM = "two_sum"  # sqrt(||x||^2 + ||y||^2), Hilbert when p = 2

    def combine(self, x_norm: float, y_norm: float) -> float:
        """Norm of a pair from the norms of its components."""
        if self is SumNorm.ONE_SUM:
            return x_norm + y_norm
        return math.hypot(x_norm, y_norm)


@dataclass(frozen=True)
class ExactComplex:
    """Gaussian rational re + i*im held exactly."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def from_complex(cls, z: complex) -> ExactComplex:
        """Exact rational value of a binary floating point complex number."""
        z = complex(z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ValueError(f"cannot represent {z!r} exactly")
        return cls(Fraction(z.real), Fraction(z.imag))

    def __add__(self, other: ExactComplex) -> ExactComplex:
        return ExactComplex(self.re + other.re, self.im + other.im)

    def __sub__(self, other: ExactComplex) -> ExactComplex:
        return ExactComplex(self.re - other.re, self.im - other.im)

    def __mul__(self, other: Union[ExactComplex, Scalar]) -> ExactComplex:
        if isinstance(other, ExactComplex):
            return ExactComplex(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        return ExactComplex(self.re * other, self.im * other)

    __rmul__ = __mul__

    def rotate(self, quarter_turns: int) -> ExactComplex:
        """Multiply by i**quarter_turns."""
        re, im = self.re, self.im
        for _ in range(quarter_turns % 4):
            re, im = -im, re
        return ExactComplex(re, im)

    def to_complex(self) -> complex:
        """Round once to the working complex type."""
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        return f"{self.re},{self.im}"


@dataclass(frozen=True)
class Window:
    """Closed axis-aligned rectangle [x0, x1] x [y0, y1] of the complex plane."""

    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        values = (self.x0, self.x1, self.y0, self.y1)
        if not all(math.isfinite(v) for v in values):
            raise ConfigurationError("window bounds must be finite")
        if self.x0 > self.x1 or self.y0 > self.y1:
            raise ConfigurationError(f"window is inverted: {values}")

    def contains(self, z):
        """Membership test; accepts scalars or arrays."""
        z = np.asarray(z)
        return (
            (z.real >= self.x0) & (z.real <= self.x1)
            & (z.imag >= self.y0) & (z.imag <= self.y1)
        )

    def nodes(self, nx: int, ny: int) -> np.ndarray:
        """Grid nodes in row-major order (imaginary part outer, real inner)."""
        if nx < 2 or ny < 2:
            raise ConfigurationError("grid dimensions must be at least 2")
        xs = np.linspace(self.x0, self.x1, nx)
        ys = np.linspace(self.y0, self.y1, ny)
        return (xs[np.newaxis, :] + 1j * ys[:, np.newaxis]).ravel()

    def uniform(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Uniform random points of the window."""
        re = rng.uniform(self.x0, self.x1, count)
        im = rng.uniform(self.y0, self.y1, count)
        return re + 1j * im

    def grown(self, margin: float) -> Window:
        """Window enlarged by ``margin`` on every side."""
        return Window(self.x0 - margin, self.x1 + margin, self.y0 - margin, self.y1 + margin)


@dataclass(frozen=True)
class SparseVector:
    """Finitely supported element of l2 with 1-based, strictly increasing indices."""

    indices: tuple[int, ...] = ()
    coefficients: tuple[complex, ...] = ()

    def __post_init__(self):
        if len(self.indices) != len(self.coefficients):
            raise ValueError("indices and coefficients differ in length")
        previous = 0
        for index in self.indices:
            if index <= previous:
                raise ValueError("indices must be positive and strictly increasing")
            previous = index
        object.__setattr__(self, "coefficients", tuple(complex(c) for c in self.coefficients))

    @classmethod
    def zero(cls) -> SparseVector:
        return cls()

    @classmethod
    def basis(cls, k: int, coefficient: complex = 1.0) -> SparseVector:
        """Standard basis vector e_k scaled by ``coefficient``."""
        return cls((k,), (coefficient,))

    @classmethod
    def from_mapping(cls, entries: Mapping[int, complex]) -> SparseVector:
        keys = sorted(entries)
        return cls(tuple(keys), tuple(entries[k] for k in keys))

    @property
    def norm(self) -> float:
        """l2 norm."""
        return float(np.linalg.norm(np.asarray(self.coefficients, dtype=complex)))

    @property
    def max_index(self) -> int:
        return self.indices[-1] if self.indices else 0

    def as_dict(self) -> dict[int, complex]:
        return dict(zip(self.indices, self.coefficients))

    def scaled(self, alpha: complex) -> SparseVector:
        return SparseVector(self.indices, tuple(alpha * c for c in self.coefficients))

    def __add__(self, other: SparseVector) -> SparseVector:
        merged = self.as_dict()
        for k, c in zip(other.indices, other.coefficients):
            merged[k] = merged.get(k, 0j) + c
        return SparseVector.from_mapping(merged)

    def __sub__(self, other: SparseVector) -> SparseVector:
        return self + other.scaled(-1.0)


def trapezoid_weights(n_cells: int) -> np.ndarray:
    """Composite trapezoid weights on the uniform grid of [0, 1]."""
    h = 1.0 / n_cells
    weights = np.full(n_cells + 1, h)
    weights[0] = weights[-1] = h / 2
    return weights


@dataclass(eq=False)
class GridFunction:
    """Samples of a function on the uniform grid t_i = i / n_cells of [0, 1].

    Represents an element of L_p(0, 1); the norm is the composite
    trapezoid approximation of (integral |x|^p)^(1/p).
    """

    n_cells: int
    samples: np.ndarray
    p: int = 2

    def __post_init__(self):
        if self.n_cells < 2:
            raise ConfigurationError("a grid needs at least 2 cells")
        if self.p not in (1, 2):
            raise ConfigurationError(f"norm exponent must be 1 or 2, got {self.p}")
        self.samples = np.asarray(self.samples, dtype=complex)
        if self.samples.shape != (self.n_cells + 1,):
            raise ValueError(
                f"expected {self.n_cells + 1} samples, got shape {self.samples.shape}"
            )

    @classmethod
    def from_callable(
        cls, f: Callable[[np.ndarray], np.ndarray], n_cells: int, p: int = 2
    ) -> GridFunction:
        t = np.linspace(0.0, 1.0, n_cells + 1)
        return cls(n_cells, np.broadcast_to(f(t), t.shape).astype(complex), p)

    @classmethod
    def zeros(cls, n_cells: int, p: int = 2) -> GridFunction:
        return cls(n_cells, np.zeros(n_cells + 1, dtype=complex), p)

    @property
    def h(self) -> float:
        return 1.0 / self.n_cells

    @property
    def t(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n_cells + 1)

    def norm(self) -> float:
        weights = trapezoid_weights(self.n_cells)
        magnitudes = np.abs(self.samples)
        if self.p == 1:
            return float(weights @ magnitudes)
        return float(np.sqrt(weights @ magnitudes**2))

    def with_samples(self, samples: np.ndarray) -> GridFunction:
        return GridFunction(self.n_cells, samples, self.p)


@dataclass(eq=False)
class PairVector:
    """Element (x, y) of X + Y = l2 + L_p(0, 1)."""

    x: SparseVector = field(default_factory=SparseVector)
    y: Optional[GridFunction] = None

    def norm(self, sum_norm: SumNorm) -> float:
        y_norm = self.y.norm() if self.y is not None else 0.0
        return sum_norm.combine(self.x.norm, y_norm)
