"""Energy of base types and types, read off a MeasureTable. Diagnostic only."""
from __future__ import annotations

from graphs.measures import MeasureTable
from graphs.sdg import NameNode, PseudoNode
from normalize.context import Ctx, type_path
from normalize.errors import NoSuchMember
from normalize.exposure import expose
from syntax.ast import BaseType, Named, PathSel, Refined, Type
from syntax.printer import show_type


def path_energy(ctx: Ctx, measures: MeasureTable, base: BaseType) -> int:
    """E(n) for a name; E(n r) * M(n::t) + A(n::t) for p.t where p exposes to n r."""
    if isinstance(base, Named):
        node = NameNode(base.name)
        if node not in measures.e:
            raise NoSuchMember(base.name, "energy")
        return measures.e[node]

    assert isinstance(base, PathSel)
    owner = expose(ctx, type_path(ctx, base.path))
    if not isinstance(owner, Refined) or not isinstance(owner.base, Named):
        raise NoSuchMember(show_type(owner), base.label)
    pseudo = PseudoNode(owner.base.name, base.label)
    if pseudo not in measures.m:
        raise NoSuchMember(owner.base.name, base.label)
    return type_energy(ctx, measures, owner) * measures.m[pseudo] + measures.a[pseudo]


def type_energy(ctx: Ctx, measures: MeasureTable, ty: Type) -> int:
    if not isinstance(ty, Refined):
        return 0
    return path_energy(ctx, measures, ty.base) + sum(type_energy(ctx, measures, m.ty) for m in ty.refinement)


def mentioned_nodes(ctx: Ctx, ty: Type) -> list:
    """Names and pseudotypes a type mentions, in order, with paths resolved through exposure."""
    out: list = []
    if not isinstance(ty, Refined):
        return out
    if isinstance(ty.base, Named):
        out.append(NameNode(ty.base.name))
    else:
        owner = expose(ctx, type_path(ctx, ty.base.path))
        if isinstance(owner, Refined) and isinstance(owner.base, Named):
            out.extend([NameNode(owner.base.name), PseudoNode(owner.base.name, ty.base.label)])
    for member in ty.refinement:
        out.extend(mentioned_nodes(ctx, member.ty))
    return list(dict.fromkeys(out))
