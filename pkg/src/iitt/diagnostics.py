from __future__ import annotations

import enum
from dataclasses import dataclass


class Code(str, enum.Enum):
    """Stable diagnostic codes."""

    PARSE = "PARSE"  # malformed source text
    SCOPE = "SCOPE"  # unknown or misused identifier
    TYPE = "TYPE"  # a typing rule failed
    EQ = "EQ"  # an #eq item was rejected
    FUEL = "FUEL"  # step budget exhausted
    DUMMY = "DUMMY"  # `irr` outside an irrelevant position, or not allowed


@dataclass(frozen=True, slots=True, order=True)
class Span:
    """1-based source position."""

    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


@dataclass(frozen=True, slots=True)
class Diagnostic:
    code: Code
    message: str
    span: Span | None = None
    severity: str = "error"

    def __str__(self) -> str:
        where = f"{self.span}: " if self.span else ""
        return f"{where}{self.severity}[{self.code.value}]: {self.message}"

    def at(self, span: Span | None) -> Diagnostic:
        """The same diagnostic, positioned at ``span`` unless it already has one."""
        if self.span is not None or span is None:
            return self
        return Diagnostic(self.code, self.message, span, self.severity)

    def to_json(self) -> dict:
        return {
            "severity": self.severity,
            "code": self.code.value,
            "message": self.message,
            "span": None if self.span is None else {"line": self.span.line, "col": self.span.col},
        }


class IITTError(Exception):
    """Base class for errors that carry a diagnostic."""

    def __init__(self, diagnostic: Diagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic
