"""Pseudospectrum sweeps and the verification battery."""

from spectral_construct.analyzers.pseudospec import SweepConfig, SweepNode, SweepResult, sweep
from spectral_construct.analyzers.verification import (
    PROFILES,
    CheckResult,
    CheckStatus,
    VerificationReport,
    verify_all,
)

__all__ = [
    "PROFILES",
    "CheckResult",
    "CheckStatus",
    "SweepConfig",
    "SweepNode",
    "SweepResult",
    "VerificationReport",
    "sweep",
    "verify_all",
]
