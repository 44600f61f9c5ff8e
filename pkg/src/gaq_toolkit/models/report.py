"""Report envelope shared by every command.

Expressions are stored as canonical text in the expression grammar, so a
report is plain data and serializes deterministically.
"""
from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field


class CheckEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    passed: bool
    residuals: list[str] = Field(default_factory=list)


class Table(BaseModel):
    title: str = ""
    columns: list[str]
    rows: list[list[str]] = Field(default_factory=list)


class Section(BaseModel):
    title: str
    checks: list[CheckEntry] = Field(default_factory=list)
    values: dict[str, str] = Field(default_factory=dict)
    tables: list[Table] = Field(default_factory=list)
    notes: list[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


class Report(BaseModel):
    schema_version: str = "1"
    command: str
    source: str
    passed: bool = True
    sections: list[Section] = Field(default_factory=list)

    def seal(self) -> Report:
        """Set ``passed`` from the section checks."""
        self.passed = all(s.passed for s in self.sections)
        return self

    def section(self, title: str) -> Section:
        for s in self.sections:
            if s.title == title:
                return s
        raise KeyError(title)
