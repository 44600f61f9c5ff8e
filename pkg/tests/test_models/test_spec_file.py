"""Tests for src/gaq_toolkit/models/spec_file.py."""
from __future__ import annotations

import pytest
from pydantic import ValidationError

from gaq_toolkit.models.spec_file import GroupSpecFile

BASE = {
    "id": "line",
    "name": "translations of the line",
    "coordinates": ["x"],
    "composition": {"x": "xp + x"},
    "identity": {"x": 0},
}


def _spec(**changes) -> GroupSpecFile:
    return GroupSpecFile.model_validate({**BASE, **changes})


class TestGroupSpecFile:
    def test_minimal(self):
        spec = _spec()
        assert spec.kind == "group"
        assert spec.identity == {"x": "0"}
        assert spec.extension is None

    def test_virasoro_kind(self):
        spec = GroupSpecFile.model_validate({"id": "vir", "name": "vir", "virasoro": {"r": 2}})
        assert spec.kind == "virasoro"
        assert spec.virasoro.modes == 4

    @pytest.mark.parametrize(
        "changes, message",
        [
            ({"composition": {"y": "yp + y"}}, "composition must define"),
            ({"identity": {}}, "identity must define"),
            ({"inverse": {"x": "-x", "y": "0"}}, "inverse must define"),
            ({"algebra": {"generators": ["X"]}}, "exactly one of"),
            ({"polarizations": [{"label": "P", "basis": ["x"], "subgroup": "sub"}]}, "unknown subgroup"),
            (
                {"charts": [{"label": "c", "polarization": "P", "prefactor": "0", "reduced": {"y": "x"}}]},
                "unknown polarization",
            ),
        ],
    )
    def test_inconsistent(self, changes, message):
        with pytest.raises(ValidationError, match=message):
            _spec(**changes)

    def test_extra_keys_are_rejected(self):
        with pytest.raises(ValidationError):
            _spec(colour="red")

    def test_empty_polarization(self):
        with pytest.raises(ValidationError):
            _spec(polarizations=[{"label": "P", "basis": []}])

    def test_resonance_must_be_positive(self):
        with pytest.raises(ValidationError):
            GroupSpecFile.model_validate({"id": "vir", "name": "vir", "virasoro": {"r": 0}})
