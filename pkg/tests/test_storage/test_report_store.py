"""Tests for src/gaq_toolkit/storage/report_store.py."""
from __future__ import annotations

import json

import pytest

from gaq_toolkit.models.report import CheckEntry, Report, Section, Table
from gaq_toolkit.storage.report_store import REPORT_DIR_ENV, ReportStore, dumps


@pytest.fixture
def report() -> Report:
    return Report(
        command="check",
        source="/somewhere/galilei.toml",
        sections=[
            Section(
                title="group axioms",
                checks=[CheckEntry(name="associativity", passed=True)],
                values={"dimension": "3"},
                tables=[Table(title="t", columns=["a"], rows=[["x"]])],
            )
        ],
    ).seal()


class TestDumps:
    def test_sorted_and_terminated(self, report):
        text = dumps(report)
        assert text.endswith("}\n")
        data = json.loads(text)
        assert list(data) == sorted(data)

    def test_deterministic(self, report):
        assert dumps(report) == dumps(report.model_copy(deep=True))

    def test_indent(self, report):
        assert "\n    \"command\"" in dumps(report, indent=4)


class TestReportStore:
    def test_save_and_load(self, report, tmp_path):
        store = ReportStore(tmp_path)
        path = store.save(report)
        assert path == tmp_path / "check-galilei.json"
        assert store.load(path) == report

    def test_explicit_directory(self, report, tmp_path):
        store = ReportStore(tmp_path / "default")
        path = store.save(report, tmp_path / "elsewhere")
        assert path.parent == tmp_path / "elsewhere"
        assert not (tmp_path / "default").exists()

    def test_environment_overrides_directory(self, report, tmp_path, monkeypatch):
        monkeypatch.setenv(REPORT_DIR_ENV, str(tmp_path / "env"))
        store = ReportStore("reports")
        assert store.save(report).parent == tmp_path / "env"

    def test_options_source(self, tmp_path):
        report = Report(command="virasoro", source="<options>").seal()
        assert ReportStore(tmp_path).path_for(report).name == "virasoro-options.json"
