"""Tests for src/gaq_toolkit/content/loader.py."""
from __future__ import annotations

import json

import pytest

from gaq_toolkit.content.loader import (
    GROUPS_DIR,
    SCHEMA_FILE,
    load_all_groups,
    load_group_spec,
    load_toml,
    parse_group_spec,
    resolve_fixture,
)
from gaq_toolkit.errors import SpecFileError
from gaq_toolkit.models.report import Report

SHIPPED = ["anomaly_template", "galilei", "hw", "rk", "schrodinger", "su2", "virasoro"]


class TestShippedFixtures:
    def test_all_present(self):
        assert sorted(load_all_groups()) == SHIPPED

    @pytest.mark.parametrize("name", SHIPPED)
    def test_each_validates(self, name):
        spec = load_group_spec(name)
        assert spec.id == name
        assert spec.description

    def test_kinds(self):
        assert load_group_spec("virasoro").kind == "virasoro"
        assert load_group_spec("su2").representation.kind == "su2"
        assert load_group_spec("schrodinger").representation.kind == "metaplectic"


class TestResolve:
    def test_name(self):
        assert resolve_fixture("hw") == GROUPS_DIR / "hw.toml"

    def test_path(self, tmp_path):
        path = tmp_path / "hw.toml"
        path.write_text((GROUPS_DIR / "hw.toml").read_text())
        assert resolve_fixture(str(path)) == path
        assert load_group_spec(str(path)).id == "hw"

    def test_unknown(self):
        with pytest.raises(SpecFileError, match="neither a shipped fixture"):
            resolve_fixture("lorentz")


class TestErrors:
    def test_bad_toml(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text("id = \n")
        with pytest.raises(SpecFileError, match="bad.toml"):
            load_toml(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(SpecFileError, match="No such group definition"):
            load_toml(tmp_path / "absent.toml")

    def test_validation_error_names_the_field(self):
        with pytest.raises(SpecFileError, match="mine.toml: polarizations"):
            parse_group_spec(
                {
                    "id": "x",
                    "name": "x",
                    "coordinates": ["q"],
                    "composition": {"q": "qp + q"},
                    "identity": {"q": 0},
                    "polarizations": "P",
                },
                "mine.toml",
            )


def test_shipped_schema_matches_report_model():
    shipped = json.loads(SCHEMA_FILE.read_text())
    generated = Report.model_json_schema()
    assert set(shipped["properties"]) == set(generated["properties"])
    assert set(shipped["$defs"]) == set(generated["$defs"])
    for name, definition in generated["$defs"].items():
        assert set(shipped["$defs"][name]["properties"]) == set(definition["properties"])
