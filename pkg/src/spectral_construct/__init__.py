"""spectral-construct - unbounded operators with a prescribed spectrum."""

__version__ = "1.0.0"
__author__ = "spectral-construct developers"

from spectral_construct.geometry import RegionSpec
from spectral_construct.operators import DirectSumOperator, MultiplierSequence, TruncatedDiagonal
from spectral_construct.parsers import load_region, parse_region
from spectral_construct.analyzers import sweep, verify_all

__all__ = [
    "RegionSpec",
    "DirectSumOperator",
    "MultiplierSequence",
    "TruncatedDiagonal",
    "load_region",
    "parse_region",
    "sweep",
    "verify_all",
]
