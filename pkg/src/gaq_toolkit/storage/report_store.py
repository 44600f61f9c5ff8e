"""Report files on disk, one deterministic JSON document per run."""
from __future__ import annotations

import json
import logging
import os
from pathlib import Path

from gaq_toolkit.models.report import Report

logger = logging.getLogger(__name__)

REPORT_DIR_ENV = "GAQ_REPORT_DIR"


def dumps(report: Report, indent: int = 2) -> str:
    """Sorted keys, fixed indent and a trailing newline: identical reports give identical bytes."""
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=indent, ensure_ascii=False) + "\n"


class ReportStore:
    def __init__(self, directory: str | Path, indent: int = 2) -> None:
        self.directory = Path(os.environ.get(REPORT_DIR_ENV) or directory)
        self.indent = indent

    def path_for(self, report: Report) -> Path:
        stem = Path(report.source).stem.strip("<>") or "options"
        return self.directory / f"{report.command}-{stem}.json"

    def save(self, report: Report, directory: str | Path | None = None) -> Path:
        target_dir = Path(directory) if directory is not None else self.directory
        target_dir.mkdir(parents=True, exist_ok=True)
        path = target_dir / self.path_for(report).name
        path.write_text(dumps(report, self.indent), encoding="utf-8")
        logger.info("report written to %s", path)
        return path

    def load(self, path: str | Path) -> Report:
        return Report.model_validate_json(Path(path).read_text(encoding="utf-8"))
