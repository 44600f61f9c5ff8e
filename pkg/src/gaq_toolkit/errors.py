"""Exception hierarchy for the toolkit.

Input problems subclass ``SpecInputError`` (and ``ValueError``); failed
mathematical checks that stop an operation subclass ``VerificationError``.
The CLI maps the first family to exit code 2 and the second to exit code 1.
"""
from __future__ import annotations


class GaqError(Exception):
    """Base class for every toolkit error."""


class SpecInputError(GaqError, ValueError):
    """The user supplied something the toolkit cannot interpret."""


class ExpressionSyntaxError(SpecInputError):
    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        pointer = " " * position + "^"
        super().__init__(f"{message} at position {position}\n  {text}\n  {pointer}")


class UndeclaredSymbolError(SpecInputError):
    def __init__(self, name: str, position: int | None = None):
        self.name = name
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"Undeclared symbol '{name}'{where}")


class SpecFileError(SpecInputError):
    """A group definition file is missing, malformed or inconsistent."""


class RepresentationInputError(SpecInputError):
    """Invalid parameters for a representation request."""


class VerificationError(GaqError):
    """A mathematical check failed and the operation cannot continue."""


class ZeroDenominatorError(VerificationError, ZeroDivisionError):
    pass


class NonClosureError(VerificationError):
    def __init__(self, message: str, residual: str | None = None):
        self.residual = residual
        detail = f" (residual: {residual})" if residual else ""
        super().__init__(f"{message}{detail}")


class CocycleError(VerificationError):
    pass


class SingularFrameError(VerificationError):
    pass


class PolarizationDefect(VerificationError):
    pass


class SpaceNotPreservedError(VerificationError):
    """A right-invariant generator leaves the polarized function space."""

    def __init__(self, generator: str, detail: str):
        self.generator = generator
        super().__init__(f"Generator {generator} does not preserve the polarized space: {detail}")
