"""
Abstract syntax for Nominal Wyvern programs.

All nodes are frozen dataclasses so they can be hashed, memoized and shared freely.
Source spans are attached to declarations and expressions but never take part in
equality, so a reprinted and reparsed program compares equal to the original.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional, Union


class ShapeMark(Enum):
    MATERIAL = "material"
    SHAPE = "shape"


class Bound(Enum):
    LE = "<="
    GE = ">="
    EQ = "="


@dataclass(frozen=True)
class Span:
    line: int
    column: int
    length: int = 1

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


def _span() -> Optional[Span]:
    return field(default=None, compare=False, repr=False)


# --- Paths and types ---

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Loc:
    id: int

    def __str__(self) -> str:
        return f"#{self.id}"


Path = Union[Var, Loc]


@dataclass(frozen=True)
class Named:
    name: str


@dataclass(frozen=True)
class PathSel:
    path: Path
    label: str


BaseType = Union[Named, PathSel]


@dataclass(frozen=True)
class RefinementMember:
    label: str
    bound: Bound
    ty: "Type"


@dataclass(frozen=True)
class Refinement:
    members: tuple[RefinementMember, ...] = ()

    def get(self, label: str) -> Optional[RefinementMember]:
        for member in self.members:
            if member.label == label:
                return member
        return None

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(m.label for m in self.members)

    def __bool__(self) -> bool:
        return bool(self.members)

    def __iter__(self) -> Iterator[RefinementMember]:
        return iter(self.members)


EMPTY = Refinement()


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Refined:
    base: BaseType
    refinement: Refinement = EMPTY


Type = Union[Top, Bottom, Refined]

TOP = Top()
BOTTOM = Bottom()


def named(name: str, refinement: Refinement = EMPTY) -> Refined:
    return Refined(Named(name), refinement)


def path_type(path: Path, label: str, refinement: Refinement = EMPTY) -> Refined:
    return Refined(PathSel(path, label), refinement)


# --- Member declarations (named type bodies, signatures) ---

@dataclass(frozen=True)
class TypeMemberDecl:
    label: str
    bound: Bound
    ty: Type
    mark: ShapeMark = ShapeMark.MATERIAL
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class FieldDecl:
    label: str
    ty: Type
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class MethodDecl:
    label: str
    param: str
    param_ty: Type
    result_ty: Type
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Param:
    name: str
    ty: Type


@dataclass(frozen=True)
class MultiMethodDecl:
    """Surface method declaration with zero or several parameters; removed by desugaring."""
    label: str
    params: tuple[Param, ...]
    result_ty: Type
    span: Optional[Span] = _span()


MemberDecl = Union[TypeMemberDecl, FieldDecl, MethodDecl, MultiMethodDecl]


# --- Expressions ---

@dataclass(frozen=True)
class Compound:
    """A non-path expression written where a path is required; only produced by the parser."""
    expr: "Expr"
    span: Optional[Span] = _span()


Operand = Union[Var, Loc, Compound]


@dataclass(frozen=True)
class PathE:
    path: Path
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class FieldSel:
    target: Operand
    label: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class MethodApp:
    target: Operand
    method: str
    arg: Operand
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class MultiMethodApp:
    """Surface call with zero or several arguments; removed by desugaring."""
    target: Operand
    method: str
    args: tuple[Operand, ...]
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class New:
    ty: Type
    self_var: str
    defs: tuple["ObjMemberDefn", ...]
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Let:
    var: str
    ascription: Optional[Type]
    bound: "Expr"
    body: "Expr"
    span: Optional[Span] = _span()


Expr = Union[PathE, FieldSel, MethodApp, MultiMethodApp, New, Let]


# --- Object member definitions ---

@dataclass(frozen=True)
class TypeMemberDefn:
    label: str
    ty: Type
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class FieldDefn:
    label: str
    ty: Type
    value: Operand
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class MethodDefn:
    label: str
    param: str
    param_ty: Type
    result_ty: Type
    body: Expr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class MultiMethodDefn:
    label: str
    params: tuple[Param, ...]
    result_ty: Type
    body: Expr
    span: Optional[Span] = _span()


ObjMemberDefn = Union[TypeMemberDefn, FieldDefn, MethodDefn, MultiMethodDefn]


# --- Top level ---

@dataclass(frozen=True)
class NamedTypeDecl:
    mark: ShapeMark
    name: str
    self_var: str
    members: tuple[MemberDecl, ...]
    span: Optional[Span] = _span()

    def member(self, label: str) -> Optional[MemberDecl]:
        for m in self.members:
            if m.label == label:
                return m
        return None

    @property
    def is_shape(self) -> bool:
        return self.mark is ShapeMark.SHAPE


@dataclass(frozen=True)
class SubtypeDecl:
    lhs_name: str
    lhs_refinement: Refinement
    rhs_name: str
    span: Optional[Span] = _span()


TopDecl = Union[NamedTypeDecl, SubtypeDecl]


@dataclass(frozen=True)
class AssertDirective:
    lhs: Type
    rhs: Type
    expected: bool = True
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Program:
    decls: tuple[TopDecl, ...]
    main: Expr

    @property
    def named_decls(self) -> tuple[NamedTypeDecl, ...]:
        return tuple(d for d in self.decls if isinstance(d, NamedTypeDecl))

    @property
    def subtype_decls(self) -> tuple[SubtypeDecl, ...]:
        return tuple(d for d in self.decls if isinstance(d, SubtypeDecl))


# --- Contexts ---

@dataclass(frozen=True)
class NameDef:
    self_var: str
    members: tuple[MemberDecl, ...]
    mark: ShapeMark

    def member(self, label: str) -> Optional[MemberDecl]:
        for m in self.members:
            if m.label == label:
                return m
        return None


# Δ: TypeName -> definition; Σ: ordered declared subtype edges
DefTable = dict[str, NameDef]
SubtypeTable = tuple[SubtypeDecl, ...]


@dataclass(frozen=True)
class VarEnv:
    """Γ: ordered variable typing; later entries may mention earlier variables only."""
    entries: tuple[tuple[str, Type], ...] = ()

    def lookup(self, name: str) -> Optional[Type]:
        for var, ty in reversed(self.entries):
            if var == name:
                return ty
        return None

    def push(self, name: str, ty: Type) -> "VarEnv":
        return VarEnv(self.entries + ((name, ty),))

    def names(self) -> tuple[str, ...]:
        return tuple(var for var, _ in self.entries)

    def __contains__(self, name: str) -> bool:
        return any(var == name for var, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class StoreEnv:
    """S: heap location typing."""
    entries: tuple[tuple[int, Type], ...] = ()

    def lookup(self, loc: int) -> Optional[Type]:
        for key, ty in self.entries:
            if key == loc:
                return ty
        return None

    def extend(self, loc: int, ty: Type) -> "StoreEnv":
        return StoreEnv(self.entries + ((loc, ty),))

    def domain(self) -> tuple[int, ...]:
        return tuple(key for key, _ in self.entries)
