"""
Material/shape separation.

The syntactic check walks every declaration and the main expression; the validity
check removes shape-labeled edges from the subtype dependency graph and looks for
remaining cycles, partition by partition.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import networkx as nx

from graphs.sdg import (
    SdgNode, SubtypeDependencyGraph, is_shape_base, is_shape_labeled, partition_sdg,
)
from syntax.ast import (
    Bound, DefTable, FieldDecl, FieldDefn, Let, MethodDecl, MethodDefn, MultiMethodDecl, MultiMethodDefn,
    Named, NamedTypeDecl, New, Program, Refined, Refinement, ShapeMark, Span, SubtypeDecl, SubtypeTable,
    Type, TypeMemberDecl, TypeMemberDefn,
)

logger = logging.getLogger(__name__)


class ViolationKind(Enum):
    SHAPE_IN_LOWER_BOUND = "ShapeInLowerBound"
    SHAPE_UPPER_NOT_SHAPE = "ShapeUpperNotShape"
    SHAPE_REFINED_IN_REFINEMENT = "ShapeRefinedInRefinement"
    UNGUARDED_CYCLE = "UnguardedCycle"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    location: str
    message: str
    cycle: Optional[tuple[SdgNode, ...]] = None
    span: Optional[Span] = None


@dataclass
class SeparationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def extend(self, other: "SeparationReport") -> "SeparationReport":
        return SeparationReport(self.violations + other.violations)


class _SyntacticWalk:
    def __init__(self, delta: DefTable):
        self.delta = delta
        self.violations: list[Violation] = []

    def report(self, kind: ViolationKind, location: str, message: str, span: Optional[Span]) -> None:
        self.violations.append(Violation(kind, location, message, span=span))

    def shape_bases(self, ty: Type, owner: Optional[str]) -> list[str]:
        """Rendered shape bases occurring anywhere in a type."""
        if not isinstance(ty, Refined):
            return []
        found = []
        if is_shape_base(self.delta, owner, ty.base):
            found.append(ty.base.name if isinstance(ty.base, Named) else f"{ty.base.path}.{ty.base.label}")
        for member in ty.refinement:
            found.extend(self.shape_bases(member.ty, owner))
        return found

    def refinement(self, refinement: Refinement, owner: Optional[str], location: str, span) -> None:
        for member in refinement:
            self.bounded(member.bound, member.ty, owner, f"{location}::{member.label}", span)
            ty = member.ty
            if isinstance(ty, Refined) and ty.refinement and is_shape_base(self.delta, owner, ty.base):
                self.report(ViolationKind.SHAPE_REFINED_IN_REFINEMENT, location,
                            f"shape type refined inside the refinement of '{member.label}'", span)

    def bounded(self, bound: Bound, ty: Type, owner: Optional[str], location: str, span) -> None:
        if bound in (Bound.GE, Bound.EQ):
            for shape in self.shape_bases(ty, owner):
                self.report(ViolationKind.SHAPE_IN_LOWER_BOUND, location,
                            f"shape '{shape}' used after '{bound.value}'", span)
        if isinstance(ty, Refined):
            self.refinement(ty.refinement, owner, location, span)

    def type_use(self, ty: Optional[Type], owner: Optional[str], location: str, span) -> None:
        if isinstance(ty, Refined):
            self.refinement(ty.refinement, owner, location, span)

    def named_decl(self, decl: NamedTypeDecl) -> None:
        for member in decl.members:
            location = f"{decl.name}::{member.label}"
            if isinstance(member, TypeMemberDecl):
                self.bounded(member.bound, member.ty, decl.name, location, member.span)
                if member.mark is ShapeMark.SHAPE and member.bound is Bound.LE:
                    if isinstance(member.ty, Refined) and not is_shape_base(self.delta, decl.name, member.ty.base):
                        self.report(ViolationKind.SHAPE_UPPER_NOT_SHAPE, location,
                                    "the upper bound of a shape member must be a shape", member.span)
            elif isinstance(member, FieldDecl):
                self.type_use(member.ty, decl.name, location, member.span)
            elif isinstance(member, MethodDecl):
                self.type_use(member.param_ty, decl.name, location, member.span)
                self.type_use(member.result_ty, decl.name, location, member.span)
            elif isinstance(member, MultiMethodDecl):
                for param in member.params:
                    self.type_use(param.ty, decl.name, location, member.span)
                self.type_use(member.result_ty, decl.name, location, member.span)

    def subtype_decl(self, decl: SubtypeDecl) -> None:
        location = f"subtype {decl.lhs_name} <: {decl.rhs_name}"
        self.refinement(decl.lhs_refinement, None, location, decl.span)
        lhs, rhs = self.delta.get(decl.lhs_name), self.delta.get(decl.rhs_name)
        if lhs is not None and rhs is not None and lhs.mark is ShapeMark.SHAPE and rhs.mark is not ShapeMark.SHAPE:
            self.report(ViolationKind.SHAPE_UPPER_NOT_SHAPE, location,
                        f"shape '{decl.lhs_name}' cannot subtype material '{decl.rhs_name}'", decl.span)

    def expr(self, expr) -> None:
        if isinstance(expr, Let):
            self.type_use(expr.ascription, None, "main", expr.span)
            self.expr(expr.bound)
            self.expr(expr.body)
        elif isinstance(expr, New):
            self.type_use(expr.ty, None, "main", expr.span)
            for d in expr.defs:
                if isinstance(d, TypeMemberDefn):
                    self.bounded(Bound.EQ, d.ty, None, f"main::{d.label}", d.span)
                elif isinstance(d, FieldDefn):
                    self.type_use(d.ty, None, "main", d.span)
                elif isinstance(d, MethodDefn):
                    self.type_use(d.param_ty, None, "main", d.span)
                    self.type_use(d.result_ty, None, "main", d.span)
                    self.expr(d.body)
                elif isinstance(d, MultiMethodDefn):
                    for param in d.params:
                        self.type_use(param.ty, None, "main", d.span)
                    self.type_use(d.result_ty, None, "main", d.span)
                    self.expr(d.body)


def check_syntactic_separation(program: Program, delta: DefTable, sigma: SubtypeTable) -> SeparationReport:
    walk = _SyntacticWalk(delta)
    for decl in program.named_decls:
        walk.named_decl(decl)
    for decl in sigma:
        walk.subtype_decl(decl)
    walk.expr(program.main)
    return SeparationReport(walk.violations)


def _shortest_cycle(graph: nx.MultiDiGraph, component: set) -> list:
    """Smallest cycle inside a strongly connected component, ties broken by rendered node names."""
    best: Optional[list] = None
    for node in sorted(component, key=str):
        if graph.has_edge(node, node):
            return [node]
        paths = nx.single_source_shortest_path(graph.subgraph(component), node)
        for pred in sorted(graph.predecessors(node), key=str):
            if pred in component and pred in paths:
                cycle = paths[pred]
                if best is None or len(cycle) < len(best):
                    best = cycle
    return best or []


def find_unguarded_cycles(graph: SubtypeDependencyGraph, delta: DefTable) -> list[Violation]:
    kept = tuple(e for e in graph.edges if not is_shape_labeled(delta, e))
    nx_graph = graph.to_networkx(kept)
    violations = []
    components = sorted(nx.strongly_connected_components(nx_graph), key=lambda c: sorted(map(str, c)))
    for component in components:
        if len(component) == 1:
            (only,) = component
            if not nx_graph.has_edge(only, only):
                continue
        cycle = _shortest_cycle(nx_graph, component)
        rendered = " -> ".join(str(n) for n in cycle + cycle[:1])
        violations.append(Violation(ViolationKind.UNGUARDED_CYCLE, graph.name,
                                    f"dependency cycle not guarded by a shape: {rendered}", tuple(cycle)))
    return violations


def check_shape_validity(graph: SubtypeDependencyGraph, delta: DefTable) -> SeparationReport:
    violations: list[Violation] = []
    for partition in partition_sdg(graph):
        violations.extend(find_unguarded_cycles(partition, delta))
    if violations:
        logger.info(f"Shape validity found {len(violations)} unguarded cycle(s)")
    return SeparationReport(violations)
