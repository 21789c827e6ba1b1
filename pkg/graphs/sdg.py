"""
The subtype dependency graph.

Nodes are ⊤, ⊥, every declared name and every declared type member of a name (a
pseudotype, written `N::t`). An edge β → β' says that a subtype derivation reaching
β may later reach β'. Edges generated from a type member carry the base types
accumulated on the way down its refinements, plus the member's bound as variance;
edges generated from subtype declarations are unlabeled.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Union

import networkx as nx

from syntax.ast import (
    BaseType, Bound, DefTable, Named, PathSel, Refined, Refinement, ShapeMark, SubtypeTable, Type,
    TypeMemberDecl, Var,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NameNode:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class PseudoNode:
    owner: str
    label: str

    def __str__(self) -> str:
        return f"{self.owner}::{self.label}"


@dataclass(frozen=True)
class TopNode:
    def __str__(self) -> str:
        return "Top"


@dataclass(frozen=True)
class BotNode:
    def __str__(self) -> str:
        return "Bot"


SdgNode = Union[NameNode, PseudoNode, TopNode, BotNode]


@dataclass(frozen=True)
class SdgEdge:
    source: SdgNode
    target: SdgNode
    label: tuple[BaseType, ...] = ()
    variance: Optional[Bound] = None


@dataclass(frozen=True)
class SubtypeDependencyGraph:
    nodes: tuple[SdgNode, ...]
    edges: tuple[SdgEdge, ...]
    name: str = "sdg"

    def to_networkx(self, edges: Optional[tuple[SdgEdge, ...]] = None) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.nodes)
        for edge in self.edges if edges is None else edges:
            graph.add_edge(edge.source, edge.target, label=edge.label, variance=edge.variance)
        return graph


def _base_node(delta: DefTable, owner: str, self_var: str, base: BaseType) -> Optional[SdgNode]:
    if isinstance(base, Named):
        return NameNode(base.name) if base.name in delta else None
    if isinstance(base, PathSel) and base.path == Var(self_var):
        member = delta[owner].member(base.label)
        if isinstance(member, TypeMemberDecl):
            return PseudoNode(owner, base.label)
    return None


def _gen_edges(delta: DefTable, owner: str, self_var: str, ty: Type, root: PseudoNode,
               acc: tuple[BaseType, ...], variance: Bound, out: list[SdgEdge]) -> None:
    # ⊤ and ⊥ are not base types, so they contribute no edges.
    if not isinstance(ty, Refined):
        return
    target = _base_node(delta, owner, self_var, ty.base)
    if target is not None:
        out.append(SdgEdge(root, target, acc, variance))
    # The accumulator grows by the outer base, not the refined member's base.
    inner = acc + (ty.base,)
    for member in ty.refinement:
        _gen_edges(delta, owner, self_var, member.ty, root, inner, variance, out)


def refinement_root_names(refinement: Refinement) -> list[str]:
    """Names heading any refinement member type, at any nesting depth, in source order."""
    out: list[str] = []
    for member in refinement:
        if isinstance(member.ty, Refined):
            if isinstance(member.ty.base, Named):
                out.append(member.ty.base.name)
            out.extend(refinement_root_names(member.ty.refinement))
    return out


def build_sdg(delta: DefTable, sigma: SubtypeTable) -> SubtypeDependencyGraph:
    nodes: list[SdgNode] = [TopNode(), BotNode()]
    edges: list[SdgEdge] = []
    for name, definition in delta.items():
        nodes.append(NameNode(name))
        for member in definition.members:
            if isinstance(member, TypeMemberDecl):
                root = PseudoNode(name, member.label)
                nodes.append(root)
                _gen_edges(delta, name, definition.self_var, member.ty, root, (), member.bound, edges)

    for decl in sigma:
        edges.append(SdgEdge(NameNode(decl.rhs_name), NameNode(decl.lhs_name)))
        for root_name in refinement_root_names(decl.lhs_refinement):
            if root_name in delta:
                edges.append(SdgEdge(NameNode(decl.rhs_name), NameNode(root_name)))

    logger.info(f"Built subtype dependency graph: {len(nodes)} node(s), {len(edges)} edge(s)")
    return SubtypeDependencyGraph(tuple(nodes), tuple(edges))


def is_shape_base(delta: DefTable, owner: Optional[str], base: BaseType) -> bool:
    """A base type is a shape when it names a shape, or selects a shape-marked member of its owner."""
    if isinstance(base, Named):
        definition = delta.get(base.name)
        return definition is not None and definition.mark is ShapeMark.SHAPE
    if isinstance(base, PathSel) and owner is not None and owner in delta:
        definition = delta[owner]
        if base.path != Var(definition.self_var):
            return False
        member = definition.member(base.label)
        return isinstance(member, TypeMemberDecl) and member.mark is ShapeMark.SHAPE
    return False


def is_shape_labeled(delta: DefTable, edge: SdgEdge) -> bool:
    owner = edge.source.owner if isinstance(edge.source, PseudoNode) else None
    return any(is_shape_base(delta, owner, base) for base in edge.label)


def partition_sdg(graph: SubtypeDependencyGraph) -> list[SubtypeDependencyGraph]:
    """
    One subgraph per named type holding the edges that leave its pseudotypes, then a
    final subgraph holding every name-to-name edge. Pseudotype-to-name edges stay
    with the owning name as terminal edges.
    """
    names = [n for n in graph.nodes if isinstance(n, NameNode)]
    partitions = []
    for name_node in names:
        members = [n for n in graph.nodes if isinstance(n, PseudoNode) and n.owner == name_node.name]
        edges = tuple(e for e in graph.edges if isinstance(e.source, PseudoNode) and e.source.owner == name_node.name)
        terminals = [e.target for e in edges if not isinstance(e.target, PseudoNode)]
        nodes = tuple(dict.fromkeys(members + terminals))
        partitions.append(SubtypeDependencyGraph(nodes, edges, name=name_node.name))
    name_edges = tuple(e for e in graph.edges if isinstance(e.source, NameNode))
    partitions.append(SubtypeDependencyGraph(tuple(names), name_edges, name="names"))
    return partitions
