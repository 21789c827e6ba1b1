"""Graphviz DOT text for the nominal subtyping graph and the subtype dependency graph."""
from __future__ import annotations

from typing import Optional

from graphs.nominal import NominalGraph
from graphs.sdg import NameNode, PseudoNode, SdgEdge, SubtypeDependencyGraph, is_shape_labeled, partition_sdg
from syntax.ast import DefTable
from syntax.printer import show_base, show_refinement

INDENT = "  "


def _quote(text: str) -> str:
    return '"' + text.replace('"', '\\"') + '"'


def _node_line(node) -> str:
    if isinstance(node, PseudoNode):
        attrs = "shape=box"
    elif isinstance(node, NameNode):
        attrs = 'shape=box, style="rounded"'
    else:
        attrs = "shape=plaintext"
    return f"{_quote(str(node))} [{attrs}];"


def _edge_line(edge: SdgEdge, delta: Optional[DefTable]) -> str:
    attrs = []
    if edge.label:
        attrs.append(f"label={_quote(', '.join(show_base(b) for b in edge.label))}")
    if delta is not None and is_shape_labeled(delta, edge):
        attrs.append("style=dashed")
    suffix = f" [{', '.join(attrs)}]" if attrs else ""
    return f"{_quote(str(edge.source))} -> {_quote(str(edge.target))}{suffix};"


def _used_nodes(graph: SubtypeDependencyGraph) -> list:
    """⊤ and ⊥ are only drawn when an edge touches them."""
    touched = {e.source for e in graph.edges} | {e.target for e in graph.edges}
    return [n for n in graph.nodes if isinstance(n, (NameNode, PseudoNode)) or n in touched]


def sdg_to_dot(graph: SubtypeDependencyGraph, delta: Optional[DefTable] = None,
               partition: bool = False, name: str = "sdg") -> str:
    lines = [f"digraph {name} {{", f"{INDENT}rankdir=LR;"]
    if partition:
        for index, part in enumerate(partition_sdg(graph)):
            lines.append(f"{INDENT}subgraph cluster_{index} {{")
            lines.append(f"{INDENT * 2}label={_quote(part.name)};")
            owned = [n for n in part.nodes if isinstance(n, PseudoNode)] if part.name != "names" else list(part.nodes)
            lines.extend(f"{INDENT * 2}{_node_line(n)}" for n in owned)
            lines.extend(f"{INDENT * 2}{_edge_line(e, delta)}" for e in part.edges)
            lines.append(f"{INDENT}}}")
    else:
        lines.extend(f"{INDENT}{_node_line(n)}" for n in _used_nodes(graph))
        lines.extend(f"{INDENT}{_edge_line(e, delta)}" for e in graph.edges)
    lines.append("}")
    return "\n".join(lines) + "\n"


def nominal_to_dot(graph: NominalGraph, name: str = "nominal") -> str:
    lines = [f"digraph {name} {{", f"{INDENT}rankdir=BT;"]
    lines.extend(f'{INDENT}{_quote(v)} [shape=box, style="rounded"];' for v in graph.vertices)
    for edge in graph.edges:
        label = f" [label={_quote(show_refinement(edge.condition))}]" if edge.condition else ""
        lines.append(f"{INDENT}{_quote(edge.source)} -> {_quote(edge.target)}{label};")
    lines.append("}")
    return "\n".join(lines) + "\n"
