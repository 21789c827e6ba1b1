from __future__ import annotations

from syntax.ast import (
    Bottom, Bound, FieldDecl, FieldDefn, MemberDecl, MethodDecl, MethodDefn, MultiMethodDecl,
    MultiMethodDefn, ObjMemberDefn, Refined, Refinement, RefinementMember, Top, Type,
    TypeMemberDecl, TypeMemberDefn,
)


def merge_refinements(left: Refinement, right: Refinement) -> Refinement:
    """+r: right-hand members win on equal labels; left survivors keep their order, then right."""
    if not right:
        return left
    overridden = set(right.labels)
    survivors = tuple(m for m in left.members if m.label not in overridden)
    return Refinement(survivors + right.members)


def merge_members(left: tuple[MemberDecl, ...], right: tuple[MemberDecl, ...]) -> tuple[MemberDecl, ...]:
    """+σ: same override rule as merge_refinements, over every member kind."""
    if not right:
        return tuple(left)
    overridden = {m.label for m in right}
    return tuple(m for m in left if m.label not in overridden) + tuple(right)


def merge_type(ty: Type, refinement: Refinement) -> Type:
    """τ +r r. ⊤ and ⊥ absorb refinements."""
    if isinstance(ty, (Top, Bottom)):
        return ty
    return Refined(ty.base, merge_refinements(ty.refinement, refinement))


def refinement_as_decls(refinement: Refinement) -> tuple[TypeMemberDecl, ...]:
    return tuple(TypeMemberDecl(m.label, m.bound, m.ty) for m in refinement)


def sig_of(defs: tuple[ObjMemberDefn, ...]) -> tuple[MemberDecl, ...]:
    """Signature of an object body: type definitions become exact type members, bodies are dropped."""
    sig: list[MemberDecl] = []
    for d in defs:
        if isinstance(d, TypeMemberDefn):
            sig.append(TypeMemberDecl(d.label, Bound.EQ, d.ty, span=d.span))
        elif isinstance(d, FieldDefn):
            sig.append(FieldDecl(d.label, d.ty, span=d.span))
        elif isinstance(d, MethodDefn):
            sig.append(MethodDecl(d.label, d.param, d.param_ty, d.result_ty, span=d.span))
        elif isinstance(d, MultiMethodDefn):
            sig.append(MultiMethodDecl(d.label, d.params, d.result_ty, span=d.span))
    return tuple(sig)


def type_defs_refinement(defs: tuple[ObjMemberDefn, ...]) -> Refinement:
    """The exact refinements contributed by the type-member definitions of an object body."""
    return Refinement(tuple(
        RefinementMember(d.label, Bound.EQ, d.ty) for d in defs if isinstance(d, TypeMemberDefn)
    ))

