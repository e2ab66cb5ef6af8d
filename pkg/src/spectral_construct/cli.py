"""CLI application for spectral-construct."""

import json
import logging
import sys
from contextlib import contextmanager
from functools import wraps
from typing import Callable, Iterator, Optional

import click
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from spectral_construct import __version__
from spectral_construct.analyzers.pseudospec import SweepConfig, sweep
from spectral_construct.analyzers.verification import PROFILES, CheckStatus, verify_all
from spectral_construct.config import settings
from spectral_construct.core.logging import log_context, setup_logging
from spectral_construct.errors import RegionParseError, SpectralError
from spectral_construct.geometry.region import RegionSpec
from spectral_construct.models import ExactComplex, SumNorm, Window
from spectral_construct.operators.direct_sum import DirectSumOperator
from spectral_construct.operators.multipliers import RATIONAL_ORDERS, sequence_for
from spectral_construct.operators.volterra_op import resolvent_norm_estimate
from spectral_construct.parsers.arguments import COMPLEX, EPSILONS, EXACT, GRID, WINDOW
from spectral_construct.parsers.region_parser import load_region
from spectral_construct.reporters import json_export
from spectral_construct.reporters.csv_export import (
    multipliers_to_csv,
    spectrum_report_to_csv,
    sweep_to_csv,
)
from spectral_construct.reporters.verification_report import VerificationTextReport, write_atomic

console = Console(stderr=True)
logger = logging.getLogger(__name__)

EXIT_FAILURE = 1
EXIT_PARSE_ERROR = 3


@contextmanager
def _handled(command: str) -> Iterator[None]:
    """Map package errors to exit codes: parse errors 3, everything else 1."""
    try:
        yield
    except RegionParseError as e:
        console.print(f"[red]Error parsing region: {escape(str(e))}[/red]")
        click.echo(json.dumps({"error": str(e), "pointer": e.pointer}), err=True)
        sys.exit(EXIT_PARSE_ERROR)
    except SpectralError as e:
        logger.error("%s failed: %s", command, e)
        console.print(f"[red]Error: {type(e).__name__}: {escape(str(e))}[/red]")
        sys.exit(EXIT_FAILURE)


def _emit(content: str, out: Optional[str]) -> None:
    if out:
        write_atomic(out, content)
    else:
        click.echo(content, nl=not content.endswith("\n"))


# ─── Shared options ──────────────────────────────────────────────


def spec_option(f: Callable) -> Callable:
    return click.option(
        "--spec", "spec_path",
        type=click.Path(exists=True, dir_okay=False),
        required=True,
        help="Region JSON file describing sigma",
    )(f)


def operator_options(f: Callable) -> Callable:
    """--N, --cells, --p, --sum-norm and --rational-order, defaults from settings."""
    options = [
        click.option(
            "--N", "truncation",
            type=click.IntRange(min=1),
            default=settings.truncation,
            show_default=True,
            help="Truncation level of the multiplication block",
        ),
        click.option(
            "--cells", "n_cells",
            type=click.IntRange(min=16),
            default=settings.n_cells,
            show_default=True,
            help="Grid cells on [0, 1] for the differentiation block",
        ),
        click.option(
            "--p", "p",
            type=click.Choice(["1", "2"]),
            default=str(settings.norm_p),
            show_default=True,
            help="Exponent of L_p(0, 1)",
        ),
        click.option(
            "--sum-norm",
            type=click.Choice([s.value for s in SumNorm]),
            default=SumNorm.ONE_SUM.value,
            show_default=True,
            help="Norm on the direct sum (two_sum needs --p 2)",
        ),
        click.option(
            "--rational-order",
            type=click.Choice(sorted(RATIONAL_ORDERS)),
            default=settings.rational_order,
            show_default=True,
            help="Enumeration order of the rationals in [0, 1]",
        ),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _build_operator(
    spec: RegionSpec,
    truncation: int,
    n_cells: int,
    p: str,
    sum_norm: str,
    rational_order: str,
) -> DirectSumOperator:
    if sum_norm == SumNorm.TWO_SUM.value and p != "2":
        raise click.UsageError("--sum-norm two_sum requires --p 2")
    return DirectSumOperator(
        spec,
        N=truncation,
        n_cells=n_cells,
        p=int(p),
        sum_norm=SumNorm(sum_norm),
        rational_order=rational_order,
    )


def _query_point(lam: Optional[complex], exact: Optional[ExactComplex]):
    if exact is not None:
        return exact
    if lam is None:
        raise click.UsageError("give --lambda or --exact")
    return lam


def _command(name: str):
    """Run the command body in a logging scope under the error-to-exit-code mapping."""

    def decorator(f: Callable) -> Callable:
        @wraps(f)
        def wrapper(*args, **kwargs):
            with log_context(command=name), _handled(name):
                return f(*args, **kwargs)

        return wrapper

    return decorator


# ─── Commands ────────────────────────────────────────────────────


@click.group()
@click.version_option(version=__version__, prog_name="spectral-construct")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default=settings.log_level,
    show_default=True,
    help="Logging threshold (logs go to stderr)",
)
@click.option("--log-json", is_flag=True, default=settings.log_json, help="Log as JSON lines")
def main(log_level: str, log_json: bool):
    """spectral-construct - operators with a prescribed spectrum.

    Builds A = M + D from a region sigma (multiplication operator M with a
    dense multiplier sequence in sigma, plus the differentiation operator D
    with empty spectrum) and checks numerically that the spectrum of A is sigma.
    """
    setup_logging(json_format=log_json, level=log_level)


@main.command("generate-multipliers")
@spec_option
@click.option("--count", type=click.IntRange(min=1), default=settings.truncation, show_default=True)
@click.option(
    "--rational-order",
    type=click.Choice(sorted(RATIONAL_ORDERS)),
    default=settings.rational_order,
    show_default=True,
)
@click.option("--out", "-o", type=click.Path(dir_okay=False), help="CSV file (stdout if omitted)")
@_command("generate-multipliers")
def generate_multipliers(spec_path: str, count: int, rational_order: str, out: Optional[str]):
    """Write m_1..m_COUNT with exact rational parts as CSV."""
    spec = load_region(spec_path)
    values = sequence_for(spec, rational_order).exact_prefix(count)
    _emit(multipliers_to_csv(values), out)
    console.print(f"[green]{count} multipliers[/green]" + (f" written to {out}" if out else ""))


@main.command()
@spec_option
@click.option("--lambda", "lam", type=COMPLEX, help="Query point re,im")
@click.option("--exact", type=EXACT, help="Exact query point num/den,num/den")
@click.option("--tol", type=float, default=settings.tolerance, show_default=True)
@operator_options
@click.option("--out", "-o", type=click.Path(dir_okay=False), help="JSON file (stdout if omitted)")
@_command("classify")
def classify(
    spec_path: str,
    lam: Optional[complex],
    exact: Optional[ExactComplex],
    tol: float,
    truncation: int,
    n_cells: int,
    p: str,
    sum_norm: str,
    rational_order: str,
    out: Optional[str],
):
    """Classify a point as point spectrum, continuous spectrum or resolvent set."""
    query = _query_point(lam, exact)
    operator = _build_operator(
        load_region(spec_path), truncation, n_cells, p, sum_norm, rational_order
    )
    report = operator.classify(query, tol)
    response = json_export.classification_response(report, operator.N, n_cells, int(p), exact)
    _emit(json_export.dump(response), out)
    console.print(f"[bold]{report.kind.value}[/bold] dist={report.dist_to_sigma:.6g}")


@main.command("volterra-norm")
@click.option("--lambda", "lam", type=COMPLEX, required=True, help="Query point re,im")
@click.option(
    "--cells", "n_cells", type=click.IntRange(min=16), default=settings.n_cells, show_default=True
)
@click.option(
    "--p", "p", type=click.Choice(["1", "2"]), default=str(settings.norm_p), show_default=True
)
@click.option("--out", "-o", type=click.Path(dir_okay=False), help="JSON file (stdout if omitted)")
@_command("volterra-norm")
def volterra_norm(lam: complex, n_cells: int, p: str, out: Optional[str]):
    """Estimate ||R(lambda, D)|| on the discretized L_p(0, 1)."""
    estimate = resolvent_norm_estimate(lam, n_cells, int(p))
    _emit(json_export.dump(json_export.estimate_response(estimate)), out)
    console.print(
        f"||R({lam}, D)|| ~ {estimate.norm_estimate:.6g} ({estimate.method}, "
        f"{estimate.iterations} iterations)"
    )


@main.command("spectrum-report")
@spec_option
@click.option("--window", type=WINDOW, required=True, help="x0,x1,y0,y1")
@click.option("--grid", type=GRID, default="201x201", show_default=True, help="NXxNY nodes")
@click.option("--tol", type=float, default=settings.tolerance, show_default=True)
@operator_options
@click.option("--out", "-o", type=click.Path(dir_okay=False), help="CSV file (stdout if omitted)")
@_command("spectrum-report")
def spectrum_report(
    spec_path: str,
    window: Window,
    grid: tuple[int, int],
    tol: float,
    truncation: int,
    n_cells: int,
    p: str,
    sum_norm: str,
    rational_order: str,
    out: Optional[str],
):
    """Classify every node of a grid over the window (CSV)."""
    operator = _build_operator(
        load_region(spec_path), truncation, n_cells, p, sum_norm, rational_order
    )
    report = operator.spectrum_report(window, grid[0], grid[1], tol)
    _emit(spectrum_report_to_csv(report), out)
    if out:
        summary = json_export.SpectrumReportSummary(
            nodes=len(report.nodes), grid=grid, counts=report.counts, output=out
        )
        click.echo(json_export.dump(summary))
    _display_counts("Spectrum report", report.counts)


@main.command()
@spec_option
@click.option("--window", type=WINDOW, required=True, help="x0,x1,y0,y1")
@click.option("--grid", type=GRID, default="101x101", show_default=True, help="NXxNY nodes")
@click.option("--eps", "epsilons", type=EPSILONS, default="1e-1,1e-2,1e-3", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--workers", type=click.IntRange(min=1), default=settings.sweep_workers)
@operator_options
@click.option("--out", "-o", type=click.Path(dir_okay=False), help="CSV file (stdout if omitted)")
@_command("pseudospectrum")
def pseudospectrum(
    spec_path: str,
    window: Window,
    grid: tuple[int, int],
    epsilons: tuple[float, ...],
    seed: int,
    workers: int,
    truncation: int,
    n_cells: int,
    p: str,
    sum_norm: str,
    rational_order: str,
    out: Optional[str],
):
    """Sweep s(lambda) = 1/||R(lambda, A)|| over the window (CSV)."""
    operator = _build_operator(
        load_region(spec_path), truncation, n_cells, p, sum_norm, rational_order
    )
    config = SweepConfig(
        window=window, nx=grid[0], ny=grid[1], epsilons=epsilons, seed=seed, workers=workers
    )
    result = sweep(operator, config)
    _emit(sweep_to_csv(result), out)
    if out:
        click.echo(json_export.dump(json_export.sweep_summary(result, out)))
    _display_counts("Pseudospectrum sweep", result.counts)
    if result.error_count:
        console.print(f"[yellow]{result.error_count} nodes recorded errors[/yellow]")


@main.command()
@spec_option
@click.option(
    "--profile", type=click.Choice(sorted(PROFILES)), default="quick", show_default=True
)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option(
    "--cells", "n_cells", type=click.IntRange(min=16), default=settings.n_cells, show_default=True
)
@click.option("--out", "-o", type=click.Path(dir_okay=False), help="JSON file (stdout if omitted)")
@click.option(
    "--text", "text_out", type=click.Path(dir_okay=False), help="Also write a text report"
)
@_command("verify")
def verify(
    spec_path: str,
    profile: str,
    seed: int,
    n_cells: int,
    out: Optional[str],
    text_out: Optional[str],
):
    """Run the property battery; exit 1 if any check fails."""
    spec = load_region(spec_path)
    report = verify_all(spec, profile, seed=seed, n_cells=n_cells)
    _emit(json_export.dump(json_export.verification_response(report)), out)
    if text_out:
        renderer = VerificationTextReport()
        renderer.save(renderer.generate(report), text_out)
    _display_verification(report)
    if not report.passed:
        sys.exit(EXIT_FAILURE)


@main.command()
@spec_option
@click.option("--lambda", "lam", type=COMPLEX, help="Query point re,im")
@click.option("--exact", type=EXACT, help="Exact query point num/den,num/den")
@click.option(
    "--K", "K", type=click.FloatRange(min=0, min_open=True), default=1e3, show_default=True
)
@click.option("--budget", type=click.IntRange(min=1), default=settings.witness_budget)
@click.option("--tol", type=float, default=settings.tolerance, show_default=True)
@operator_options
@click.option("--out", "-o", type=click.Path(dir_okay=False), help="JSON file (stdout if omitted)")
@_command("certificate")
def certificate(
    spec_path: str,
    lam: Optional[complex],
    exact: Optional[ExactComplex],
    K: float,
    budget: int,
    tol: float,
    truncation: int,
    n_cells: int,
    p: str,
    sum_norm: str,
    rational_order: str,
    out: Optional[str],
):
    """Approximate eigenvector, classification and unboundedness witnesses for one point."""
    query = _query_point(lam, exact)
    operator = _build_operator(
        load_region(spec_path), truncation, n_cells, p, sum_norm, rational_order
    )
    report = operator.classify(query, tol)
    approximate = None
    if operator.m_part is not None:
        vector, residual = operator.m_part.approx_eigenvector(query)
        approximate = (vector.indices[0], residual)
    witnesses = operator.unboundedness_witnesses(K, budget)
    response = json_export.certificate_response(
        json_export.classification_response(report, operator.N, n_cells, int(p), exact),
        approximate,
        witnesses,
        K,
    )
    _emit(json_export.dump(response), out)
    ratios = ", ".join(f"{w.block}: {w.ratio:.4g}" for w in witnesses.witnesses)
    console.print(f"[bold]{report.kind.value}[/bold]; witnesses above K={K:g}: {ratios}")


# ─── Display helpers ─────────────────────────────────────────────


def _display_counts(title: str, counts: dict[str, int]) -> None:
    table = Table(title=title)
    table.add_column("Class", style="cyan")
    table.add_column("Nodes", justify="right")
    for kind, count in counts.items():
        table.add_row(kind, str(count))
    console.print(table)


def _display_verification(report) -> None:
    table = Table(title=f"Verification ({report.profile}) - {report.region}")
    table.add_column("Module", style="cyan")
    table.add_column("Check")
    table.add_column("Status")
    table.add_column("Detail")
    colors = {CheckStatus.PASS: "green", CheckStatus.FAIL: "red", CheckStatus.SKIP: "yellow"}
    for check in report.checks:
        color = colors[check.status]
        table.add_row(
            check.module,
            check.name,
            f"[{color}]{check.status.value}[/{color}]",
            escape(check.detail),
        )
    console.print(table)
    verdict = "[green]PASS[/green]" if report.passed else "[red]FAIL[/red]"
    console.print(f"Overall: {verdict}")


if __name__ == "__main__":
    main()
