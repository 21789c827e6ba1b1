"""
M, A and E measures over a separated program.

E(n) is one plus the energy of every declared subtype of n and of every name inside
those declarations' refinement conditions. M(n::t) and A(n::t) follow the type
members of n that t reaches through non-shape edges of t's own variance.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from graphs.sdg import (
    BotNode, NameNode, PseudoNode, SdgNode, SubtypeDependencyGraph, TopNode, is_shape_labeled,
    refinement_root_names,
)
from syntax.ast import DefTable, PathSel, Refined, SubtypeTable, Type, TypeMemberDecl, Var
from syntax.subst import type_names

logger = logging.getLogger(__name__)


class DivergentMeasure(Exception):
    def __init__(self, node):
        self.node = node
        super().__init__(f"measure of '{node}' depends on itself; the program is not shape-valid")


@dataclass
class MeasureTable:
    m: dict[PseudoNode, int] = field(default_factory=dict)
    a: dict[PseudoNode, int] = field(default_factory=dict)
    e: dict[SdgNode, int] = field(default_factory=dict)

    def rows(self) -> list[tuple[str, str, int]]:
        out = [("E", str(node), value) for node, value in self.e.items()]
        out.extend(("M", str(node), value) for node, value in self.m.items())
        out.extend(("A", str(node), value) for node, value in self.a.items())
        return out


def _self_members(ty: Type, self_var: str) -> list[str]:
    """Labels of `self.t'` occurrences anywhere in a type, first occurrence first."""
    out: list[str] = []
    if isinstance(ty, Refined):
        if isinstance(ty.base, PathSel) and ty.base.path == Var(self_var):
            out.append(ty.base.label)
        for member in ty.refinement:
            out.extend(_self_members(member.ty, self_var))
    return list(dict.fromkeys(out))


class _Measures:
    def __init__(self, delta: DefTable, sigma: SubtypeTable, graph: SubtypeDependencyGraph):
        self.delta = delta
        self.sigma = sigma
        self.table = MeasureTable()
        self.active: set = set()
        self.sibling_edges: dict[PseudoNode, list] = {}
        for edge in graph.edges:
            if (isinstance(edge.source, PseudoNode) and isinstance(edge.target, PseudoNode)
                    and edge.source.owner == edge.target.owner and not is_shape_labeled(delta, edge)):
                self.sibling_edges.setdefault(edge.source, []).append(edge)

    def _enter(self, key) -> None:
        if key in self.active:
            raise DivergentMeasure(key[1])
        self.active.add(key)

    def energy(self, name: str) -> int:
        node = NameNode(name)
        if node in self.table.e:
            return self.table.e[node]
        self._enter(("E", node))
        dependents: list[str] = []
        for decl in self.sigma:
            if decl.rhs_name == name:
                dependents.append(decl.lhs_name)
                dependents.extend(refinement_root_names(decl.lhs_refinement))
        total = 1 + sum(self.energy(n) for n in dict.fromkeys(dependents) if n in self.delta)
        self.active.discard(("E", node))
        self.table.e[node] = total
        return total

    def reachable(self, start: PseudoNode, variance) -> set[PseudoNode]:
        """Pseudotypes of the same name reachable by a non-empty path of `variance` edges."""
        seen: set[PseudoNode] = set()
        frontier = [start]
        while frontier:
            node = frontier.pop()
            for edge in self.sibling_edges.get(node, ()):
                if edge.variance is variance and edge.target not in seen:
                    seen.add(edge.target)
                    frontier.append(edge.target)
        return seen

    def dependencies(self, node: PseudoNode) -> tuple[TypeMemberDecl, list[PseudoNode]]:
        definition = self.delta[node.owner]
        member = definition.member(node.label)
        reach = self.reachable(node, member.bound)
        deps = [PseudoNode(node.owner, label) for label in _self_members(member.ty, definition.self_var)]
        return member, [d for d in deps if d in reach]

    def multiplier(self, node: PseudoNode) -> int:
        if node in self.table.m:
            return self.table.m[node]
        self._enter(("M", node))
        _, deps = self.dependencies(node)
        total = 1 + sum(self.multiplier(d) for d in deps)
        self.active.discard(("M", node))
        self.table.m[node] = total
        return total

    def adder(self, node: PseudoNode) -> int:
        if node in self.table.a:
            return self.table.a[node]
        self._enter(("A", node))
        member, deps = self.dependencies(node)
        names = [n for n in dict.fromkeys(type_names(member.ty)) if n in self.delta]
        total = 1 + sum(self.adder(d) for d in deps) + sum(self.energy(n) for n in names)
        self.active.discard(("A", node))
        self.table.a[node] = total
        return total


def compute_measures(delta: DefTable, sigma: SubtypeTable, graph: SubtypeDependencyGraph) -> MeasureTable:
    """Raises DivergentMeasure when a recursion is not guarded by a shape."""
    measures = _Measures(delta, sigma, graph)
    measures.table.e[TopNode()] = 0
    measures.table.e[BotNode()] = 0
    for name, definition in delta.items():
        measures.energy(name)
        for member in definition.members:
            if isinstance(member, TypeMemberDecl):
                node = PseudoNode(name, member.label)
                measures.multiplier(node)
                measures.adder(node)
    logger.info(f"Computed measures for {len(delta)} name(s)")
    return measures.table
