"""Application bootstrap: configuration, fixture loading and the command runners."""
from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from gaq_toolkit.errors import SpecInputError
from gaq_toolkit.models.config import ToolkitConfig
from gaq_toolkit.models.report import Report

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger(__name__)

CONFIG_PATH = Path(__file__).parent.parent.parent / "config.toml"


def _load_config(path: Path = CONFIG_PATH) -> ToolkitConfig:
    """Load config.toml from the project root; a missing file gives the defaults."""
    data: dict[str, Any] = {}
    if path.exists():
        try:
            with open(path, "rb") as f:
                data = tomllib.load(f)
        except tomllib.TOMLDecodeError as exc:
            raise SpecInputError(f"{path}: {exc}") from None
    try:
        return ToolkitConfig.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise SpecInputError(f"{path}: {where}: {first['msg']}") from None


class Toolkit:
    """Runs one command per call; components are created on first use."""

    def __init__(self, config: ToolkitConfig | None = None):
        self.config = config or _load_config()
        self._store = None
        self._renderer = None

    @property
    def store(self):
        if self._store is None:
            from gaq_toolkit.storage.report_store import ReportStore

            self._store = ReportStore(self.config.report.directory, self.config.report.indent)
        return self._store

    @property
    def renderer(self):
        if self._renderer is None:
            from gaq_toolkit.reports.renderer import ReportRenderer

            self._renderer = ReportRenderer()
        return self._renderer

    def load(self, name_or_path: str):
        from gaq_toolkit.content.loader import load_group_spec, resolve_fixture
        from gaq_toolkit.engine.spec_builder import BuiltGroup

        spec = load_group_spec(name_or_path)
        return BuiltGroup(spec, str(resolve_fixture(name_or_path)), self.config.analysis.jet_order)

    def check(self, name_or_path: str) -> Report:
        from gaq_toolkit.engine.pipeline import run_check

        return run_check(self.load(name_or_path), self.config)

    def analyze(self, name_or_path: str) -> Report:
        from gaq_toolkit.engine.pipeline import run_analyze

        return run_analyze(self.load(name_or_path), self.config)

    def polarize(self, name_or_path: str) -> Report:
        from gaq_toolkit.engine.pipeline import run_polarize

        return run_polarize(self.load(name_or_path), self.config)

    def represent(self, name_or_path: str, lam: int | None = None, cutoff: int | None = None, ho: str | None = None) -> Report:
        from gaq_toolkit.engine.pipeline import run_represent

        return run_represent(self.load(name_or_path), self.config, lam=lam, cutoff=cutoff, ho=ho)

    def virasoro(
        self,
        name_or_path: str | None = None,
        c: str | None = None,
        cp: str | None = None,
        r: int | None = None,
        modes: int | None = None,
        level: int | None = None,
        dimension: int | None = None,
        variant: str | None = None,
        standard: bool = False,
    ) -> Report:
        from gaq_toolkit.engine.pipeline import run_virasoro, virasoro_spec

        group = self.load(name_or_path) if name_or_path else None
        spec = virasoro_spec(self.config, group, c=c, cp=cp, r=r, modes=modes, variant=variant)
        source = group.source if group is not None else "<options>"
        return run_virasoro(spec, self.config, level=level, dimension=dimension, standard=standard, source=source)

    def fixtures(self) -> list[tuple[str, str, str]]:
        """(id, kind, description) of every shipped fixture."""
        from gaq_toolkit.content.loader import load_all_groups, parse_group_spec

        out = []
        for key, data in load_all_groups().items():
            spec = parse_group_spec(data, key)
            out.append((spec.id, spec.kind, spec.description))
        return out
