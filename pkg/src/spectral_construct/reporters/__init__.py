"""Output writers: CSV grids, JSON responses and text reports."""

from spectral_construct.reporters.csv_export import (
    multipliers_to_csv,
    spectrum_report_to_csv,
    sweep_to_csv,
)
from spectral_construct.reporters.verification_report import VerificationTextReport, write_atomic

__all__ = [
    "VerificationTextReport",
    "multipliers_to_csv",
    "spectrum_report_to_csv",
    "sweep_to_csv",
    "write_atomic",
]
