"""Operators of the construction: multipliers, M, D and their direct sum."""

from spectral_construct.operators.direct_sum import DirectSumOperator, SpectralReport
from spectral_construct.operators.diagonal_op import TruncatedDiagonal
from spectral_construct.operators.multipliers import MultiplierSequence, covering_radius

__all__ = [
    "DirectSumOperator",
    "MultiplierSequence",
    "SpectralReport",
    "TruncatedDiagonal",
    "covering_radius",
]
