"""
Expansion: unfold the type members of named types to a common refinement depth
before a subtype check, so that `IntList <: List { type T = Int }` can see IntList's
own definition of T.
"""
from __future__ import annotations

import logging

from normalize.avoidance import avoid
from normalize.bounds import EQ
from normalize.context import Ctx
from normalize.errors import NormalizeError
from normalize.lookup import lookup_decl
from subtyping.engine import DerivationTrace, SubtypeEngine
from syntax.ast import BaseType, Named, Refined, Refinement, RefinementMember, Type, TypeMemberDecl, Var
from syntax.merge import merge_type
from syntax.subst import fresh_name

logger = logging.getLogger(__name__)


def depth(ty: Type) -> int:
    if not isinstance(ty, Refined) or not ty.refinement:
        return 0
    return max(1 + depth(m.ty) for m in ty.refinement)


def expand1(ctx: Ctx, base: BaseType) -> Type:
    """
    A name gains every type member of its definition, seen through a placeholder self
    `z: n` and with z avoided exactly. Members that still mention z are left out.
    """
    if not isinstance(base, Named) or ctx.definition(base.name) is None:
        return Refined(base)
    key = ("expand1", ctx.gamma, ctx.store, base)
    if key in ctx.memo:
        return ctx.memo[key]

    z = fresh_name("z", ctx.bound_names())
    inner = ctx.push(z, Refined(base))
    members = []
    for member in ctx.definition(base.name).members:
        if not isinstance(member, TypeMemberDecl):
            continue
        try:
            decl = lookup_decl(inner, Refined(base), Var(z), member.label)
            result = avoid(inner, decl.ty, z, EQ)
        except NormalizeError as e:
            logger.info(f"Expansion left {base.name}::{member.label} unexpanded: {e}")
            continue
        members.append(RefinementMember(member.label, decl.bound, result.ty))
    expanded = Refined(base, Refinement(tuple(members)))
    ctx.memo[key] = expanded
    return expanded


def expand(ctx: Ctx, ty: Type, d: int) -> Type:
    if d <= 0 or not isinstance(ty, Refined):
        return ty
    inner = Refinement(tuple(
        RefinementMember(m.label, m.bound, expand(ctx, m.ty, d - 1)) for m in ty.refinement
    ))
    return merge_type(expand1(ctx, ty.base), inner)


def check(ctx: Ctx, lhs: Type, rhs: Type, use_expansion: bool = True,
          trace: bool = False) -> tuple[bool, DerivationTrace]:
    """The subtype check used by term typing: both sides expanded to the deeper of their depths."""
    if use_expansion:
        d = max(depth(lhs), depth(rhs))
        lhs, rhs = expand(ctx, lhs, d), expand(ctx, rhs, d)
    engine = SubtypeEngine(record=trace)
    return engine.subtype(ctx, lhs, rhs), engine.trace


def checker(use_expansion: bool = True):
    """`check` as a plain relation, for member-list comparisons."""
    def relate(ctx: Ctx, lhs: Type, rhs: Type) -> bool:
        return check(ctx, lhs, rhs, use_expansion)[0]
    return relate
