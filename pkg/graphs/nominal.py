from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from syntax.ast import DefTable, Refinement, SubtypeTable


@dataclass(frozen=True)
class NominalEdge:
    source: str
    target: str
    condition: Refinement


@dataclass(frozen=True)
class NominalGraph:
    """Declared subtype edges between named types, each labeled with its refinement condition."""
    vertices: tuple[str, ...]
    edges: tuple[NominalEdge, ...]

    def to_networkx(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.vertices)
        for edge in self.edges:
            graph.add_edge(edge.source, edge.target, condition=edge.condition)
        return graph


def build_nominal_graph(delta: DefTable, sigma: SubtypeTable) -> NominalGraph:
    edges = tuple(NominalEdge(d.lhs_name, d.rhs_name, d.lhs_refinement) for d in sigma)
    return NominalGraph(tuple(delta), edges)
