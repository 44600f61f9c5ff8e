"""Shared fixtures for the gaq-toolkit test suite."""
from __future__ import annotations

from functools import lru_cache

import pytest
from hypothesis import HealthCheck, settings

from gaq_toolkit.content.loader import load_group_spec, resolve_fixture
from gaq_toolkit.engine.spec_builder import BuiltGroup
from gaq_toolkit.mechanics.symbolic import Parameter, SymbolTable
from gaq_toolkit.models.config import ToolkitConfig

settings.register_profile(
    "symbolic",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("symbolic")


@lru_cache(maxsize=None)
def built(name: str) -> BuiltGroup:
    """Shipped fixtures are immutable; share the derived structures across tests."""
    return BuiltGroup(load_group_spec(name), str(resolve_fixture(name)))


@pytest.fixture
def galilei() -> BuiltGroup:
    return built("galilei")


@pytest.fixture
def hw() -> BuiltGroup:
    return built("hw")


@pytest.fixture
def su2() -> BuiltGroup:
    return built("su2")


@pytest.fixture
def schrodinger() -> BuiltGroup:
    return built("schrodinger")


@pytest.fixture
def template() -> BuiltGroup:
    return built("anomaly_template")


@pytest.fixture
def config() -> ToolkitConfig:
    return ToolkitConfig()


@pytest.fixture
def qvt_table() -> SymbolTable:
    return SymbolTable(coordinates=("q", "v", "t"), parameters=(Parameter("m", positive=True),))


@pytest.fixture
def load():
    """Factory for shipped fixtures by name."""
    return built
