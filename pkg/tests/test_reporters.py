"""Tests for CSV, JSON and text outputs."""

import io
import json
import logging
import math

import pytest

from spectral_construct.analyzers.pseudospec import SweepConfig, sweep
from spectral_construct.analyzers.verification import CheckResult, CheckStatus, VerificationReport
from spectral_construct.core.logging import (
    ContextFilter,
    JSONFormatter,
    current_context,
    log_context,
    setup_logging,
)
from spectral_construct.errors import NonConvergence
from spectral_construct.geometry.region import Disk, Point, RegionSpec, Segment
from spectral_construct.models import Window
from spectral_construct.operators.direct_sum import DirectSumOperator
from spectral_construct.operators.multipliers import MultiplierSequence
from spectral_construct.operators.volterra_op import resolvent_norm_estimate
from spectral_construct.reporters import json_export
from spectral_construct.reporters.csv_export import multipliers_to_csv, spectrum_report_to_csv
from spectral_construct.reporters.verification_report import VerificationTextReport, write_atomic


def _make_report(*statuses: CheckStatus) -> VerificationReport:
    modules = ["multipliers", "multipliers", "volterra_op", "pseudospec"]
    return VerificationReport(
        profile="quick",
        region="disk",
        checks=[
            CheckResult(f"check_{i}", modules[i % len(modules)], status, f"detail {i}")
            for i, status in enumerate(statuses)
        ],
    )


class TestCsvExport:
    def test_multipliers(self):
        values = MultiplierSequence(RegionSpec.of(Segment(0, 1))).exact_prefix(3)
        lines = multipliers_to_csv(values).splitlines()
        assert lines == [
            "n,re,im,exact_num_re,exact_den_re,exact_num_im,exact_den_im",
            "1,0,0,0,1,0,1",
            "2,1,0,1,1,0,1",
            "3,0.5,0,1,2,0,1",
        ]

    def test_spectrum_report(self):
        operator = DirectSumOperator(RegionSpec.of(Point(0)), N=8, n_cells=32)
        report = operator.spectrum_report(Window(-1, 1, -1, 1), 3, 3)
        lines = spectrum_report_to_csv(report).splitlines()
        assert lines[0] == "re,im,class,dist,inv_norm_truncated,inv_norm_exact"
        assert len(lines) == 10
        center = lines[5].split(",")
        assert center[:4] == ["0", "0", "point", "0"]
        assert center[4:] == ["0", "0"]

    def test_floats_round_trip(self):
        values = MultiplierSequence(RegionSpec.of(Segment(0, 1))).exact_prefix(4)
        row = multipliers_to_csv(values).splitlines()[4].split(",")
        assert float(row[1]) == 1 / 3


class TestJsonExport:
    """Tests for the pydantic response models."""

    def test_classification_uses_public_names(self):
        operator = DirectSumOperator(RegionSpec.of(Disk(0, 1)), N=64, n_cells=32)
        report = operator.classify(2.0)
        response = json_export.classification_response(report, 64, 32, 2)
        payload = json.loads(json_export.dump(response))
        assert payload["class"] == "resolvent_set"
        assert payload["lambda"] == [2.0, 0.0]
        assert payload["dist"] == pytest.approx(1.0)
        assert payload["certificate"] is None

    def test_infinite_norm_serializes(self):
        operator = DirectSumOperator(RegionSpec.of(Point(0)), N=4, n_cells=32)
        report = operator.classify(0.0)
        text = json_export.dump(json_export.classification_response(report, 4, 32, 2))
        payload = json.loads(text)
        assert payload["class"] == "point"
        assert payload["resolvent_norm"] == math.inf
        assert payload["certificate"] == {"index": 1, "residual": 0.0}

    def test_estimate(self):
        estimate = resolvent_norm_estimate(0.0, 32, 1)
        payload = json.loads(json_export.dump(json_export.estimate_response(estimate)))
        assert payload["method"] == "column-sum"
        assert payload["lambda"] == [0.0, 0.0]

    def test_verification(self):
        report = _make_report(CheckStatus.PASS, CheckStatus.SKIP, CheckStatus.FAIL)
        payload = json.loads(json_export.dump(json_export.verification_response(report)))
        assert payload["passed"] is False
        assert payload["counts"] == {"PASS": 1, "FAIL": 1, "SKIP": 1}
        assert [c["status"] for c in payload["checks"]] == ["PASS", "SKIP", "FAIL"]


class TestVerificationTextReport:
    def test_template_rendering(self):
        text = VerificationTextReport().generate(_make_report(CheckStatus.PASS, CheckStatus.FAIL))
        assert "VERIFICATION REPORT - disk (quick profile)" in text
        assert "  [FAIL] check_1: detail 1" in text
        assert text.rstrip().endswith("1 passed, 1 failed, 0 skipped: FAIL")

    def test_plain_fallback_matches_template(self, tmp_path):
        report = _make_report(CheckStatus.PASS, CheckStatus.PASS, CheckStatus.SKIP)
        plain = VerificationTextReport(template_dir=tmp_path).generate(report)
        templated = VerificationTextReport().generate(report)
        assert plain.split() == templated.split()

    def test_save_adds_suffix(self, tmp_path):
        path = VerificationTextReport().save("content\n", tmp_path / "report")
        assert path.suffix == ".txt"
        assert path.read_text() == "content\n"


class TestWriteAtomic:
    def test_writes_and_leaves_no_temporaries(self, tmp_path):
        target = tmp_path / "out" / "data.csv"
        write_atomic(target, "a,b\n1,2\n")
        assert target.read_text() == "a,b\n1,2\n"
        assert [p.name for p in target.parent.iterdir()] == ["data.csv"]

    def test_replaces_existing(self, tmp_path):
        target = tmp_path / "data.json"
        target.write_text("old")
        write_atomic(target, "new")
        assert target.read_text() == "new"


class TestLogging:
    def test_json_formatter(self):
        record = logging.LogRecord("spectral", logging.WARNING, __file__, 1, "x=%d", (3,), None)
        record.command = "classify"
        payload = json.loads(JSONFormatter().format(record))
        assert payload["message"] == "x=3"
        assert payload["level"] == "WARNING"
        assert payload["command"] == "classify"

    def test_setup_installs_single_handler(self):
        setup_logging(json_format=True, level="info")
        root = logging.getLogger()
        assert len(root.handlers) == 1
        assert isinstance(root.handlers[0].formatter, JSONFormatter)
        assert root.level == logging.INFO
        setup_logging()

    def test_context_fields_reach_json(self):
        with log_context(command="pseudospectrum", window=[-1.0, 1.0, 0.0, 2.0]):
            record = logging.LogRecord("spectral", logging.WARNING, __file__, 1, "m", (), None)
            record.node = 4
            record.lam = 0.5 - 2j
            assert ContextFilter().filter(record)
        payload = json.loads(JSONFormatter().format(record))
        assert payload["command"] == "pseudospectrum"
        assert payload["window"] == [-1.0, 1.0, 0.0, 2.0]
        assert payload["node"] == 4
        assert payload["lam"] == [0.5, -2.0]

    def test_context_scopes_nest_and_reset(self):
        with log_context(command="verify"):
            with log_context(check="volterra_op.linearity"):
                assert current_context() == {
                    "command": "verify",
                    "check": "volterra_op.linearity",
                }
            assert current_context() == {"command": "verify"}
        assert current_context() == {}
        record = logging.LogRecord("spectral", logging.INFO, __file__, 1, "m", (), None)
        ContextFilter().filter(record)
        assert "command" not in json.loads(JSONFormatter().format(record))

    def test_explicit_extra_wins_over_scope(self):
        with log_context(node=1):
            record = logging.LogRecord("spectral", logging.INFO, __file__, 1, "m", (), None)
            record.node = 9
            ContextFilter().filter(record)
        assert record.node == 9

    @pytest.mark.parametrize("workers", [1, 3])
    def test_sweep_node_failures_carry_context(self, monkeypatch, workers):
        operator = DirectSumOperator(RegionSpec.of(Disk(0, 0.5)), N=64, n_cells=32)
        classify = operator.classify

        def failing_right_half(lam, tol=None):
            if lam.real > 0:
                raise NonConvergence(1, 1.0)
            return classify(lam, tol)

        monkeypatch.setattr(operator, "classify", failing_right_half)
        stream = io.StringIO()
        handler = logging.StreamHandler(stream)
        handler.setFormatter(JSONFormatter())
        handler.addFilter(ContextFilter())
        package = logging.getLogger("spectral_construct")
        previous = package.level
        package.addHandler(handler)
        package.setLevel(logging.WARNING)
        try:
            with log_context(command="pseudospectrum"):
                config = SweepConfig(window=Window(-1, 1, -1, 1), nx=3, ny=3, workers=workers)
                sweep(operator, config)
        finally:
            package.removeHandler(handler)
            package.setLevel(previous)

        records = [json.loads(line) for line in stream.getvalue().splitlines()]
        failures = [r for r in records if "node" in r]
        assert sorted(r["node"] for r in failures) == [2, 5, 8]
        for r in failures:
            assert r["command"] == "pseudospectrum"
            assert r["window"] == [-1, 1, -1, 1]
            assert r["lam"][0] == 1.0
