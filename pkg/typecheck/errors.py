"""Type errors reported by term typing, validity and declaration checks."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from subtyping.engine import DerivationTrace
from syntax.ast import Span, Type


class TypeErrorKind(Enum):
    UNBOUND_PATH = "UnboundPath"
    NO_SUCH_MEMBER = "NoSuchMember"
    SUBTYPE_FAILURE = "SubtypeFailure"
    INVALID_TYPE = "InvalidType"
    BAD_SUBTYPE_DECL = "BadSubtypeDecl"
    AVOID_FAILURE = "AvoidFailure"
    DUPLICATE_NAME = "DuplicateName"

    @property
    def code(self) -> str:
        return f"E{list(TypeErrorKind).index(self) + 1:04d}"


@dataclass(frozen=True)
class TypeCheckError:
    kind: TypeErrorKind
    message: str
    span: Optional[Span] = None
    expected: Optional[Type] = None
    actual: Optional[Type] = None
    trace: Optional[DerivationTrace] = None


class TypeCheckFailure(Exception):
    def __init__(self, error: TypeCheckError):
        self.error = error
        super().__init__(f"{error.kind.value}: {error.message}")
