"""Plain-text rendering of reports through Jinja2 templates."""
from __future__ import annotations

from pathlib import Path

from jinja2 import Environment, FileSystemLoader

from gaq_toolkit.models.report import Report

TEMPLATES_DIR = Path(__file__).parent / "templates"


class ReportRenderer:
    def __init__(self, templates_dir: Path = TEMPLATES_DIR):
        self.templates_dir = templates_dir
        self._jinja_env: Environment | None = None

    @property
    def jinja_env(self) -> Environment:
        if self._jinja_env is None:
            self._jinja_env = Environment(
                loader=FileSystemLoader(str(self.templates_dir)),
                autoescape=False,
                trim_blocks=True,
                lstrip_blocks=True,
            )
            self._jinja_env.filters["mark"] = lambda passed: "PASS" if passed else "FAIL"
        return self._jinja_env

    def render(self, report: Report, template: str = "report.txt.j2") -> str:
        return self.jinja_env.get_template(template).render(report=report)
