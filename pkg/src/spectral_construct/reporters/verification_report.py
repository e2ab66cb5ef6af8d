"""Text and file output for verification reports."""

import os
import tempfile
from itertools import groupby
from pathlib import Path
from typing import Optional, Union

from jinja2 import Environment, FileSystemLoader, select_autoescape

from spectral_construct.analyzers.verification import VerificationReport

TEMPLATE_NAME = "verification.txt.jinja2"


def write_atomic(path: Union[str, Path], content: str) -> Path:
    """Write through a temporary file in the target directory, then rename over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


class VerificationTextReport:
    """Renders a VerificationReport as plain text."""

    def __init__(self, template_dir: Optional[Path] = None):
        """Initialize the renderer.

        Args:
            template_dir: Optional custom template directory
        """
        if template_dir is None:
            template_dir = Path(__file__).parent.parent / "templates"
        self.template_dir = template_dir
        self._setup_jinja()

    def _setup_jinja(self):
        if (self.template_dir / TEMPLATE_NAME).exists():
            self.env = Environment(
                loader=FileSystemLoader(str(self.template_dir)),
                autoescape=select_autoescape(["html", "xml"]),
                trim_blocks=True,
                lstrip_blocks=True,
                keep_trailing_newline=True,
            )
        else:
            self.env = None

    @staticmethod
    def _groups(report: VerificationReport):
        return [
            (module, list(checks))
            for module, checks in groupby(report.checks, key=lambda check: check.module)
        ]

    def generate(self, report: VerificationReport) -> str:
        groups = self._groups(report)
        counts = report.counts()
        if self.env is not None:
            template = self.env.get_template(TEMPLATE_NAME)
            return template.render(report=report, groups=groups, counts=counts)
        return self._generate_plain(report, groups, counts)

    def _generate_plain(self, report, groups, counts) -> str:
        lines = ["=" * 70, f"VERIFICATION REPORT - {report.region} ({report.profile} profile)"]
        lines += ["=" * 70, ""]
        for module, checks in groups:
            lines += [module, "-" * len(module)]
            lines += [f"  [{c.status.value}] {c.name}: {c.detail}" for c in checks]
            lines.append("")
        lines.append("=" * 70)
        verdict = "PASS" if report.passed else "FAIL"
        lines.append(
            f"{counts['PASS']} passed, {counts['FAIL']} failed, {counts['SKIP']} skipped: {verdict}"
        )
        return "\n".join(lines) + "\n"

    def save(self, content: str, output_path: Union[str, Path]) -> Path:
        output_path = Path(output_path)
        if not output_path.suffix:
            output_path = output_path.with_suffix(".txt")
        return write_atomic(output_path, content)
