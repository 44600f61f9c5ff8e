"""Shipped group fixtures and lookup of user-supplied definition files."""
from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from gaq_toolkit.errors import SpecFileError
from gaq_toolkit.models.spec_file import GroupSpecFile

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger(__name__)

CONTENT_DIR = Path(__file__).parent
GROUPS_DIR = CONTENT_DIR / "groups"
SCHEMA_FILE = CONTENT_DIR / "report.schema.json"


def load_toml(filepath: Path) -> dict[str, Any]:
    try:
        with open(filepath, "rb") as f:
            return tomllib.load(f)
    except FileNotFoundError:
        raise SpecFileError(f"No such group definition file: {filepath}") from None
    except tomllib.TOMLDecodeError as exc:
        raise SpecFileError(f"{filepath}: {exc}") from None


def load_all_groups() -> dict[str, dict[str, Any]]:
    groups = {}
    for f in sorted(GROUPS_DIR.glob("*.toml")):
        data = load_toml(f)
        groups[data.get("id", f.stem)] = data
    return groups


def resolve_fixture(name_or_path: str) -> Path:
    """A bare fixture name resolves to the shipped file; anything else is a path."""
    shipped = GROUPS_DIR / f"{name_or_path}.toml"
    if "/" not in name_or_path and not name_or_path.endswith(".toml") and shipped.exists():
        return shipped
    path = Path(name_or_path)
    if not path.exists():
        known = ", ".join(sorted(f.stem for f in GROUPS_DIR.glob("*.toml")))
        raise SpecFileError(f"'{name_or_path}' is neither a shipped fixture ({known}) nor an existing file")
    return path


def parse_group_spec(data: dict[str, Any], source: str = "<memory>") -> GroupSpecFile:
    try:
        return GroupSpecFile.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first["loc"]) or "<root>"
        raise SpecFileError(f"{source}: {where}: {first['msg']}") from None


def load_group_spec(name_or_path: str) -> GroupSpecFile:
    path = resolve_fixture(name_or_path)
    logger.debug("loading group definition %s", path)
    return parse_group_spec(load_toml(path), str(path))
