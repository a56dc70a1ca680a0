"""Exception types shared across the package."""

from __future__ import annotations

from dataclasses import dataclass


class InapplicableError(ValueError):
    """An analysis was requested whose hypotheses the input does not meet."""


class NumericFailure(RuntimeError):
    """A numerical routine could not produce a trustworthy answer."""


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}: {self.message}"


class NetworkParseError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))
