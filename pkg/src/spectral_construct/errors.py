"""Exception hierarchy for spectral-construct."""

from typing import Optional


class SpectralError(Exception):
    """Base class for every error raised by the package."""


class EmptyRegion(SpectralError):
    """An operation needs a point of sigma but the region is empty."""

    def __init__(self, operation: str = "operation"):
        super().__init__(f"{operation} requires a nonempty region")
        self.operation = operation


class EmptyIntersection(SpectralError):
    """No sample of the region landed inside the requested window."""


class InvalidPrimitive(SpectralError, ValueError):
    """Primitive parameters violate their invariants."""


class ConfigurationError(SpectralError, ValueError):
    """Operator or sweep configuration is inconsistent."""


class RegionParseError(SpectralError):
    """A region JSON document could not be parsed."""

    def __init__(self, message: str, index: Optional[int] = None):
        self.index = index
        self.pointer = f"/primitives/{index}" if index is not None else ""
        where = f" at {self.pointer}" if self.pointer else ""
        super().__init__(f"{message}{where}")


class IndexBeyondTruncation(SpectralError):
    """A sparse vector touches coordinates past the truncation level."""

    def __init__(self, index: int, truncation: int):
        super().__init__(f"index {index} exceeds truncation level N={truncation}")
        self.index = index
        self.truncation = truncation


class SingularEntry(SpectralError):
    """lambda coincides with the multiplier at a support index."""

    def __init__(self, n: int):
        super().__init__(f"lambda equals multiplier m_{n}; M - lambda is not injective")
        self.n = n


class SearchBudgetExhausted(SpectralError):
    """No unboundedness witness found within the enumeration budget."""

    def __init__(self, reached: int, threshold: float):
        super().__init__(f"no |m_n| > {threshold:g} found up to n={reached}")
        self.reached = reached
        self.threshold = threshold


class DomainViolation(SpectralError):
    """A grid function does not satisfy the boundary condition x(0) = 0."""


class OverflowGuard(SpectralError):
    """A resolvent value or norm exceeds the float range."""


class NonConvergence(SpectralError):
    """Power iteration missed its tolerance within the iteration budget."""

    def __init__(self, iterations: int, last_change: float):
        super().__init__(
            f"power iteration did not converge after {iterations} iterations "
            f"(last relative change {last_change:.3e})"
        )
        self.iterations = iterations
        self.last_change = last_change


class GridTooCoarse(SpectralError):
    """The grid cannot resolve the requested oscillation."""
