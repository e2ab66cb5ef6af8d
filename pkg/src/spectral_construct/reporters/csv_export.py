"""CSV export for multipliers, spectrum reports and sweeps."""

from __future__ import annotations

import csv
import io
from typing import TYPE_CHECKING

from spectral_construct.models import ExactComplex
from spectral_construct.operators.diagonal_op import reciprocal

if TYPE_CHECKING:
    from spectral_construct.analyzers.pseudospec import SweepResult
    from spectral_construct.operators.direct_sum import SpectrumReport


def fmt(value: float) -> str:
    """Round-trip exact float text."""
    return "%.17g" % value


def multipliers_to_csv(exact_values: list[ExactComplex]) -> str:
    """m_1..m_N with their rounded and exact rational forms."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([
        "n", "re", "im",
        "exact_num_re", "exact_den_re", "exact_num_im", "exact_den_im",
    ])
    for n, value in enumerate(exact_values, start=1):
        z = value.to_complex()
        writer.writerow([
            n,
            fmt(z.real),
            fmt(z.imag),
            value.re.numerator,
            value.re.denominator,
            value.im.numerator,
            value.im.denominator,
        ])
    return buf.getvalue()


def spectrum_report_to_csv(report: SpectrumReport) -> str:
    """One row per grid node, row-major."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["re", "im", "class", "dist", "inv_norm_truncated", "inv_norm_exact"])
    for node in report.nodes:
        writer.writerow([
            fmt(node.lam.real),
            fmt(node.lam.imag),
            node.kind.value,
            fmt(node.dist_to_sigma),
            fmt(reciprocal(node.resolvent_norm_truncated)),
            fmt(reciprocal(node.resolvent_norm_exact_limit)),
        ])
    return buf.getvalue()


def sweep_to_csv(result: SweepResult) -> str:
    """One row per sweep node; failed nodes keep their error text."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([
        "index", "re", "im", "class", "dist",
        "s_truncated", "s_exact", "volterra_norm", "error",
    ])
    for node in result.nodes:
        writer.writerow([
            node.index,
            fmt(node.lam.real),
            fmt(node.lam.imag),
            node.kind.value if node.kind is not None else "",
            fmt(node.dist),
            fmt(node.s_truncated),
            fmt(node.s_exact),
            fmt(node.volterra_norm),
            node.error or "",
        ])
    return buf.getvalue()
