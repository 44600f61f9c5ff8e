"""Rich terminal view of reports."""
from __future__ import annotations

from rich import box
from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from gaq_toolkit.models.report import Report, Section

console = Console()
err_console = Console(stderr=True)

MAX_RESIDUALS = 3


def _mark(passed: bool) -> Text:
    return Text("PASS", style="bold green") if passed else Text("FAIL", style="bold red")


class Display:
    def __init__(self, out: Console = console):
        self.console = out

    def show_report(self, report: Report) -> None:
        title = Text(f"gaq {report.command}  ", style="bold cyan")
        title.append(report.source, style="dim")
        title.append("  ")
        title.append_text(_mark(report.passed))
        self.console.print(Panel(title, border_style="cyan", box=box.DOUBLE))
        for section in report.sections:
            self.show_section(section)

    def show_section(self, section: Section) -> None:
        self.console.print()
        self.console.rule(f"[bold]{section.title}[/bold]")
        if section.values:
            values = Table(show_header=False, box=box.SIMPLE)
            values.add_column(style="cyan")
            values.add_column()
            for key, value in section.values.items():
                values.add_row(key, value)
            self.console.print(values)
        if section.checks:
            checks = Table(box=box.ROUNDED)
            checks.add_column("Check")
            checks.add_column("Result", justify="center")
            checks.add_column("Residuals", style="dim")
            for check in section.checks:
                shown = check.residuals[:MAX_RESIDUALS]
                if len(check.residuals) > MAX_RESIDUALS:
                    shown.append(f"... {len(check.residuals) - MAX_RESIDUALS} more")
                checks.add_row(check.name, _mark(check.passed), "\n".join(shown))
            self.console.print(checks)
        for t in section.tables:
            if not t.rows:
                continue
            table = Table(title=t.title, box=box.SIMPLE_HEAD)
            for column in t.columns:
                table.add_column(column)
            for row in t.rows:
                table.add_row(*row)
            self.console.print(table)
        for note in section.notes:
            self.console.print(f"  [dim]{note}[/dim]")

    def show_fixtures(self, fixtures: list[tuple[str, str, str]]) -> None:
        table = Table(title="Shipped group definitions", box=box.ROUNDED)
        table.add_column("Name", style="bold cyan")
        table.add_column("Kind")
        table.add_column("Description")
        for name, kind, description in fixtures:
            table.add_row(name, kind, description)
        self.console.print(table)

    def show_error(self, kind: str, message: str) -> None:
        err_console.print(f"[bold red]{kind}:[/bold red] {message}")
