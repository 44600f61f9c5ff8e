"""Typer CLI application."""
from __future__ import annotations

import json
import logging
from collections.abc import Callable
from pathlib import Path
from typing import Optional

import typer

app = typer.Typer(
    name="gaq",
    help="Exact symbolic toolkit for group-approach quantization",
    no_args_is_help=True,
)

JsonOption = typer.Option(False, "--json", help="Print the JSON report instead of tables")
TextOption = typer.Option(False, "--text", help="Print the plain-text report")
OutOption = typer.Option(None, "--out", "-o", help="Write the JSON report to this directory")
VerboseOption = typer.Option(False, "--verbose", "-v", help="Log at DEBUG level")


def _setup_logging(level: str, verbose: bool) -> None:
    from rich.logging import RichHandler

    from gaq_toolkit.cli.display import err_console

    logger = logging.getLogger("gaq_toolkit")
    logger.setLevel(logging.DEBUG if verbose else level)
    if not any(isinstance(h, RichHandler) for h in logger.handlers):
        logger.addHandler(RichHandler(console=err_console, show_path=False))


def _run(make_report: Callable, as_json: bool, as_text: bool, out: Optional[Path], verbose: bool) -> None:
    """Run one command and map the outcome to the exit code: 0 pass, 1 verification failure, 2 input error."""
    from gaq_toolkit.app import Toolkit
    from gaq_toolkit.cli.display import Display
    from gaq_toolkit.errors import SpecInputError, VerificationError
    from gaq_toolkit.storage.report_store import dumps

    display = Display()
    try:
        toolkit = Toolkit()
        _setup_logging(toolkit.config.log.level, verbose)
        report = make_report(toolkit)
    except SpecInputError as exc:
        display.show_error("input error", str(exc))
        raise typer.Exit(2) from None
    except OSError as exc:
        display.show_error("input error", str(exc))
        raise typer.Exit(2) from None
    except VerificationError as exc:
        display.show_error("verification failed", str(exc))
        raise typer.Exit(1) from None

    if as_json:
        typer.echo(dumps(report, toolkit.config.report.indent), nl=False)
    elif as_text:
        typer.echo(toolkit.renderer.render(report))
    else:
        display.show_report(report)
    if out is not None:
        toolkit.store.save(report, out)
    raise typer.Exit(0 if report.passed else 1)


@app.command()
def check(
    file: str = typer.Argument(..., help="Shipped fixture name or path to a group definition"),
    as_json: bool = JsonOption,
    as_text: bool = TextOption,
    out: Optional[Path] = OutOption,
    verbose: bool = VerboseOption,
) -> None:
    """Verify the group axioms, the cocycle identity and subgroup closure."""
    _run(lambda t: t.check(file), as_json, as_text, out, verbose)


@app.command()
def analyze(
    file: str = typer.Argument(..., help="Shipped fixture name or path to a group definition"),
    as_json: bool = JsonOption,
    as_text: bool = TextOption,
    out: Optional[Path] = OutOption,
    verbose: bool = VerboseOption,
) -> None:
    """Invariant fields, commutators, quantization form, characteristic subalgebra and Noether invariants."""
    _run(lambda t: t.analyze(file), as_json, as_text, out, verbose)


@app.command()
def polarize(
    file: str = typer.Argument(..., help="Shipped fixture name or path to a group definition"),
    as_json: bool = JsonOption,
    as_text: bool = TextOption,
    out: Optional[Path] = OutOption,
    verbose: bool = VerboseOption,
) -> None:
    """Classify and search polarizations, decide the anomaly and check higher-order polarizations."""
    _run(lambda t: t.polarize(file), as_json, as_text, out, verbose)


@app.command()
def represent(
    file: str = typer.Argument(..., help="Shipped fixture name or path to a group definition"),
    lam: Optional[int] = typer.Option(None, "--lambda", "-l", help="Representation label for SU(2)"),
    cutoff: Optional[int] = typer.Option(None, "--cutoff", "-n", help="Highest monomial degree kept"),
    ho: Optional[str] = typer.Option(None, "--ho", help="Higher-order polarization label, e.g. v"),
    as_json: bool = JsonOption,
    as_text: bool = TextOption,
    out: Optional[Path] = OutOption,
    verbose: bool = VerboseOption,
) -> None:
    """Right operators on a polarized space: charts, spin representations or the metaplectic one."""
    _run(lambda t: t.represent(file, lam=lam, cutoff=cutoff, ho=ho), as_json, as_text, out, verbose)


@app.command()
def virasoro(
    file: Optional[str] = typer.Argument(None, help="Optional definition file with a [virasoro] section"),
    c: Optional[str] = typer.Option(None, "--c", help="Central charge c"),
    cp: Optional[str] = typer.Option(None, "--cp", help="Coefficient c' of the linear central term"),
    r: Optional[int] = typer.Option(None, "--r", help="Resonance: c' = c r^2"),
    modes: Optional[int] = typer.Option(None, "--modes", help="Mode cutoff N"),
    level: Optional[int] = typer.Option(None, "--level", help="Fock level cutoff L"),
    dimension: Optional[int] = typer.Option(None, "--dimension", "-d", help="Number of oscillator towers"),
    variant: Optional[str] = typer.Option(None, "--variant", help="virasoro or string"),
    standard: bool = typer.Option(False, "--standard", help="Use the textbook Kac formula"),
    as_json: bool = JsonOption,
    as_text: bool = TextOption,
    out: Optional[Path] = OutOption,
    verbose: bool = VerboseOption,
) -> None:
    """Truncated Virasoro algebra, anomaly values and the Sugawara construction."""
    _run(
        lambda t: t.virasoro(file, c=c, cp=cp, r=r, modes=modes, level=level, dimension=dimension, variant=variant, standard=standard),
        as_json,
        as_text,
        out,
        verbose,
    )


@app.command(name="list")
def list_fixtures() -> None:
    """List the shipped group definitions."""
    from gaq_toolkit.app import Toolkit
    from gaq_toolkit.cli.display import Display

    Display().show_fixtures(Toolkit().fixtures())


@app.command()
def schema() -> None:
    """Print the JSON schema of the report envelope."""
    from gaq_toolkit.models.report import Report

    typer.echo(json.dumps(Report.model_json_schema(), indent=2, sort_keys=True))


if __name__ == "__main__":
    app()
