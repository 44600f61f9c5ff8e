"""Tests for src/gaq_toolkit/reports/renderer.py."""
from __future__ import annotations

import pytest

from gaq_toolkit.models.report import CheckEntry, Report, Section, Table
from gaq_toolkit.reports.renderer import ReportRenderer


@pytest.fixture
def renderer() -> ReportRenderer:
    return ReportRenderer()


def test_header_and_marks(renderer):
    report = Report(
        command="polarize",
        source="hw.toml",
        sections=[
            Section(
                title="declared polarizations",
                checks=[
                    CheckEntry(name="P_q is a polarization", passed=True),
                    CheckEntry(name="P_x is a polarization", passed=False, residuals=["not closed"]),
                ],
                values={"found": "2"},
                notes=["P_c becomes horizontal"],
            )
        ],
    ).seal()
    text = renderer.render(report)
    assert text.startswith("gaq polarize hw.toml: FAIL")
    assert "== declared polarizations ==" in text
    assert "[PASS] P_q is a polarization" in text
    assert "[FAIL] P_x is a polarization" in text
    assert "not closed" in text
    assert "found: 2" in text
    assert "note: P_c becomes horizontal" in text


def test_empty_tables_are_skipped(renderer):
    report = Report(
        command="analyze",
        source="galilei.toml",
        sections=[
            Section(
                title="characteristic subalgebra",
                tables=[
                    Table(title="basis", columns=["element"], rows=[["B"]]),
                    Table(title="gauge generators", columns=["element"], rows=[]),
                ],
            )
        ],
    ).seal()
    text = renderer.render(report)
    assert "basis" in text
    assert "gauge generators" not in text
    assert text.startswith("gaq analyze galilei.toml: PASS")
