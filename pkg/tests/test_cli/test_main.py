"""Tests for src/gaq_toolkit/cli/main.py."""
from __future__ import annotations

import json

import pytest
from typer.testing import CliRunner

from gaq_toolkit.cli.main import app

runner = CliRunner()

NON_ASSOCIATIVE = """
id = "bent"
name = "bent line"
coordinates = ["q"]

[composition]
q = "qp + q + qp*q^2"

[identity]
q = 0
"""


class TestExitCodes:
    def test_pass(self):
        result = runner.invoke(app, ["check", "galilei", "--json"])
        assert result.exit_code == 0, result.output
        data = json.loads(result.stdout)
        assert data["command"] == "check"
        assert data["passed"] is True

    def test_failed_check(self, tmp_path):
        path = tmp_path / "bent.toml"
        path.write_text(NON_ASSOCIATIVE)
        result = runner.invoke(app, ["check", str(path), "--json"])
        assert result.exit_code == 1
        assert json.loads(result.stdout)["passed"] is False

    @pytest.mark.parametrize(
        "args",
        [
            ["check", "lorentz"],
            ["represent", "hw", "--cutoff", "3"],
            ["represent", "su2", "--lambda", "-1"],
            ["represent", "galilei"],
            ["virasoro", "--c", "1", "--modes", "1"],
        ],
    )
    def test_input_errors(self, args):
        assert runner.invoke(app, args).exit_code == 2


class TestOutput:
    def test_text(self):
        result = runner.invoke(app, ["check", "hw", "--text"])
        assert result.exit_code == 0
        assert result.stdout.startswith("gaq check")

    def test_tables(self):
        result = runner.invoke(app, ["analyze", "galilei"])
        assert result.exit_code == 0
        assert "characteristic subalgebra" in result.stdout

    def test_out_writes_report(self, tmp_path):
        result = runner.invoke(app, ["virasoro", "--c", "1", "--r", "2", "--level", "2", "--json", "--out", str(tmp_path)])
        assert result.exit_code == 0
        saved = tmp_path / "virasoro-options.json"
        assert saved.read_text() == result.stdout

    def test_spin(self):
        result = runner.invoke(app, ["represent", "su2", "-l", "2", "--json"])
        assert result.exit_code == 0
        sections = {s["title"]: s for s in json.loads(result.stdout)["sections"]}
        assert sections["spin representation"]["values"]["Casimir"] == "2"


def test_list():
    result = runner.invoke(app, ["list"])
    assert result.exit_code == 0
    for name in ("galilei", "schrodinger", "virasoro"):
        assert name in result.stdout


def test_schema():
    result = runner.invoke(app, ["schema"])
    assert result.exit_code == 0
    assert "CheckEntry" in json.loads(result.stdout)["$defs"]
