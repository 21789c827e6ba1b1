from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from syntax.ast import Span


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"
    NOTE = "note"


# Parse diagnostic codes
SYNTAX = "P0001"
NON_ANF = "P0002"
DUPLICATE_TYPE = "P0003"
LOC_LITERAL = "P0004"
MISSING_MAIN = "P0005"
DUPLICATE_MEMBER = "P0006"
ASSERT_VARIABLE = "P0007"
UNKNOWN_TYPE = "P0008"


@dataclass(frozen=True)
class Diagnostic:
    """A located message for the user. Parse, separation, type and runtime stages all report these."""
    code: str
    message: str
    span: Optional[Span] = None
    severity: Severity = Severity.ERROR
    file: str = "<input>"
    expected: Optional[str] = None
    actual: Optional[str] = None
    notes: tuple[str, ...] = field(default=())

    def render(self) -> str:
        line = self.span.line if self.span else 1
        column = self.span.column if self.span else 1
        return f"{self.file}:{line}:{column}: {self.severity.value}[{self.code}]: {self.message}"

    def to_json(self) -> dict:
        return {
            "file": self.file,
            "line": self.span.line if self.span else 1,
            "column": self.span.column if self.span else 1,
            "length": self.span.length if self.span else 1,
            "severity": self.severity.value,
            "code": self.code,
            "message": self.message,
            "expected": self.expected,
            "actual": self.actual,
        }


ParseDiagnostic = Diagnostic


@dataclass(frozen=True)
class SourceFile:
    path: str
    text: str

    @classmethod
    def read(cls, path: str) -> "SourceFile":
        with open(path, encoding="utf-8") as handle:
            return cls(path, handle.read())
