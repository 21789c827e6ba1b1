"""
Exposure, upcasting and downcasting of path-dependent types.

`expose` is computed eagerly: the environment is exposed entry by entry
(`expose_env`), and a type is then exposed against the already-exposed environment
(`expose1`). Results are memoized per (Γ, S, type) in the context's memo table.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from normalize.context import Ctx, type_path
from normalize.errors import NormalizeError
from normalize.lookup import lookup_decl
from syntax.ast import Bottom, Bound, PathSel, Refined, Top, Type, TypeMemberDecl, Var, VarEnv
from syntax.merge import merge_type
from syntax.printer import show_type

logger = logging.getLogger(__name__)

UPPER = (Bound.LE, Bound.EQ)
LOWER = (Bound.GE, Bound.EQ)


@dataclass
class _Walk:
    """Per-query state for expose1: recursion guard and a step counter."""
    active: set = field(default_factory=set)
    steps: int = 0


def _path_member(ctx: Ctx, owner: Type, path, label: str, bounds) -> Type | None:
    try:
        member = lookup_decl(ctx, owner, path, label)
    except NormalizeError:
        return None
    if isinstance(member, TypeMemberDecl) and member.bound in bounds:
        return member.ty
    return None


def expose_env(ctx: Ctx, gamma: VarEnv | None = None) -> VarEnv:
    """Exposes every entry left to right; each entry sees only the exposed entries before it."""
    gamma = ctx.gamma if gamma is None else gamma
    key = ("env", gamma, ctx.store)
    if key in ctx.memo:
        return ctx.memo[key]
    if not gamma.entries:
        exposed = VarEnv()
    else:
        prefix = expose_env(ctx, VarEnv(gamma.entries[:-1]))
        name, ty = gamma.entries[-1]
        exposed = prefix.push(name, expose1(ctx, prefix, ty))
    ctx.memo[key] = exposed
    return exposed


def expose1(ctx: Ctx, exposed: VarEnv, ty: Type, walk: _Walk | None = None) -> Type:
    walk = walk if walk is not None else _Walk()
    walk.steps += 1
    if isinstance(ty, (Top, Bottom)) or not isinstance(ty.base, PathSel):
        return ty

    path, label = ty.base.path, ty.base.label
    if isinstance(path, Var):
        owner = exposed.lookup(path.name)
    else:
        stored = ctx.store.lookup(path.id)
        owner = None if stored is None else expose1(ctx, exposed, stored, walk)
    if owner is None:
        return ty

    guard = (path, label)
    if guard in walk.active:
        logger.warning(f"Exposure revisited {show_type(ty)}; returning it unexposed")
        return ty
    bound_ty = _path_member(ctx, owner, path, label, UPPER)
    if bound_ty is None:
        return ty
    walk.active.add(guard)
    try:
        return merge_type(expose1(ctx, exposed, bound_ty, walk), ty.refinement)
    finally:
        walk.active.discard(guard)


def expose(ctx: Ctx, ty: Type) -> Type:
    """Normalizes to a supertype whose head is ⊤, ⊥, a name, or a path with no upper bound."""
    if not isinstance(ty, Refined) or not isinstance(ty.base, PathSel):
        return ty
    key = ("expose", ctx.gamma, ctx.store, ty)
    if key not in ctx.memo:
        ctx.memo[key], _ = expose_with_steps(ctx, ty)
    return ctx.memo[key]


def expose_with_steps(ctx: Ctx, ty: Type) -> tuple[Type, int]:
    """Uncached exposure that also reports how many expose1 steps the final query took."""
    walk = _Walk()
    result = expose1(ctx, expose_env(ctx), ty, walk)
    return result, walk.steps


def _cast(ctx: Ctx, ty: Type, bounds) -> Type:
    if not isinstance(ty, Refined) or not isinstance(ty.base, PathSel):
        return ty
    path = ty.base.path
    try:
        owner = expose(ctx, type_path(ctx, path))
    except NormalizeError:
        return ty
    bound_ty = _path_member(ctx, owner, path, ty.base.label, bounds)
    if bound_ty is None:
        return ty
    return merge_type(bound_ty, ty.refinement)


def upcast(ctx: Ctx, ty: Type) -> Type:
    """One unfolding step through an upper or exact bound; anything else is returned as-is."""
    return _cast(ctx, ty, UPPER)


def downcast(ctx: Ctx, ty: Type) -> Type:
    """One unfolding step through a lower or exact bound; anything else is returned as-is."""
    return _cast(ctx, ty, LOWER)

