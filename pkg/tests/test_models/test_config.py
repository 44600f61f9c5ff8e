"""Tests for src/gaq_toolkit/models/config.py."""
from __future__ import annotations

import pytest
from pydantic import ValidationError

from gaq_toolkit.app import _load_config
from gaq_toolkit.errors import SpecInputError
from gaq_toolkit.models.config import ToolkitConfig


class TestToolkitConfig:
    def test_defaults(self):
        config = ToolkitConfig()
        assert config.analysis.jet_order == 6
        assert config.representation.cutoff == 12
        assert config.virasoro.variant == "virasoro"
        assert config.log.level == "WARNING"

    def test_logging_alias(self):
        config = ToolkitConfig.model_validate({"logging": {"level": "DEBUG"}})
        assert config.log.level == "DEBUG"

    def test_integer_expressions_become_text(self):
        config = ToolkitConfig.model_validate({"virasoro": {"oscillator_scale": 2}})
        assert config.virasoro.oscillator_scale == "2"

    @pytest.mark.parametrize(
        "data",
        [
            {"representation": {"cutoff": 3}},
            {"analysis": {"anomaly_max_quotient_dim": 1}},
            {"virasoro": {"variant": "superstring"}},
            {"logging": {"level": "LOUD"}},
        ],
    )
    def test_rejects(self, data):
        with pytest.raises(ValidationError):
            ToolkitConfig.model_validate(data)


class TestLoadConfig:
    def test_missing_file_gives_defaults(self, tmp_path):
        assert _load_config(tmp_path / "absent.toml") == ToolkitConfig()

    def test_reads_file(self, tmp_path):
        path = tmp_path / "config.toml"
        path.write_text("[representation]\ncutoff = 8\n")
        assert _load_config(path).representation.cutoff == 8

    def test_invalid_value(self, tmp_path):
        path = tmp_path / "config.toml"
        path.write_text("[representation]\ncutoff = 2\n")
        with pytest.raises(SpecInputError, match="representation.cutoff"):
            _load_config(path)

    def test_invalid_toml(self, tmp_path):
        path = tmp_path / "config.toml"
        path.write_text("[representation\n")
        with pytest.raises(SpecInputError):
            _load_config(path)

    def test_shipped_config(self):
        config = _load_config()
        assert config.report.schema_version == "1"
