"""Declaration lookup: find the declaration of a member on a refined type."""
from __future__ import annotations

from normalize.context import Ctx
from normalize.errors import LookupOnPathBase, NoSuchMember
from syntax.ast import (
    MemberDecl, Named, Path, PathSel, Refined, Type, TypeMemberDecl, Var,
)
from syntax.printer import show_type
from syntax.subst import subst_path


def lookup_decl(ctx: Ctx, ty: Type, path: Path, label: str) -> MemberDecl:
    """
    Look-Refine: a type member overridden in the refinement is returned as written.
    Look-Name: otherwise the member comes from the named definition with its self
    variable replaced by `path`. Fields and methods always take the second route.
    """
    if not isinstance(ty, Refined):
        raise NoSuchMember(show_type(ty), label)

    refined = ty.refinement.get(label)
    if refined is not None:
        return TypeMemberDecl(refined.label, refined.bound, refined.ty)

    if isinstance(ty.base, PathSel):
        raise LookupOnPathBase(show_type(ty), label)

    assert isinstance(ty.base, Named)
    definition = ctx.definition(ty.base.name)
    if definition is None:
        raise NoSuchMember(ty.base.name, label)
    member = definition.member(label)
    if member is None:
        raise NoSuchMember(ty.base.name, label)
    return subst_path(member, definition.self_var, path)


def members_of(ctx: Ctx, name: str, path: Path) -> tuple[MemberDecl, ...]:
    """Every declaration of a named type, instantiated at `path`."""
    definition = ctx.definition(name)
    if definition is None:
        raise NoSuchMember(name, "*")
    if isinstance(path, Var) and path.name == definition.self_var:
        return definition.members
    return tuple(subst_path(m, definition.self_var, path) for m in definition.members)
