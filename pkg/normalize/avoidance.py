"""
Avoidance: rewrite a type so it no longer mentions a local binding.

`want` is the relation the caller can accept between the input and the result:
LE for a supertype, GE for a subtype, EQ for an equivalent type. Every unfolding of
`x.t` spends one unit of fuel.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

from config import Config
from normalize.bounds import EQ, bound_join, bound_product, satisfies
from normalize.context import Ctx
from normalize.errors import AvoidFailed, FuelExhausted, IncompatibleBounds, NormalizeError
from normalize.exposure import expose
from normalize.lookup import lookup_decl
from syntax.ast import Bound, PathSel, Refined, Refinement, RefinementMember, Type, TypeMemberDecl, Var
from syntax.merge import merge_type
from syntax.printer import show_type

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AvoidResult:
    ty: Type
    achieved: Bound


def _avoid_base(ctx: Ctx, ty: Refined, x: str, want: Bound, fuel: int) -> AvoidResult:
    base = ty.base
    if not isinstance(base, PathSel) or base.path != Var(x):
        return AvoidResult(Refined(base), EQ)

    if fuel <= 0:
        raise FuelExhausted(x, show_type(ty))
    bound_ty = ctx.gamma.lookup(x)
    if bound_ty is None:
        raise AvoidFailed(x, show_type(ty), f"'{x}' is not bound")
    try:
        member = lookup_decl(ctx, expose(ctx, bound_ty), Var(x), base.label)
    except NormalizeError as e:
        raise AvoidFailed(x, show_type(ty), str(e)) from e
    if not isinstance(member, TypeMemberDecl):
        raise AvoidFailed(x, show_type(ty), f"'{base.label}' is not a type member")
    if not satisfies(member.bound, want):
        raise AvoidFailed(x, show_type(ty), f"member bound '{member.bound.value}' cannot give '{want.value}'")

    inner = avoid(ctx, member.ty, x, want, fuel - 1)
    try:
        achieved = bound_join(member.bound, inner.achieved)
    except IncompatibleBounds as e:
        raise AvoidFailed(x, show_type(ty), str(e)) from e
    return AvoidResult(inner.ty, achieved)


def avoid(ctx: Ctx, ty: Type, x: str, want: Bound = Bound.LE, fuel: int | None = None) -> AvoidResult:
    """
    Returns an x-free type related to `ty` by `want` (or by equality).

    Raises FuelExhausted when unfolding does not terminate within `fuel` steps and
    AvoidFailed when no rule applies.
    """
    fuel = Config.AVOID_FUEL if fuel is None else fuel
    if not isinstance(ty, Refined):
        return AvoidResult(ty, EQ)

    head = _avoid_base(ctx, ty, x, want, fuel)
    achieved = head.achieved
    members = []
    for member in ty.refinement:
        result = avoid(ctx, member.ty, x, bound_product(member.bound, want), fuel)
        # A member result inside a bound flips or keeps the direction of the whole type.
        effect = EQ if result.achieved is EQ else bound_product(member.bound, result.achieved)
        try:
            achieved = bound_join(achieved, effect)
        except IncompatibleBounds as e:
            raise AvoidFailed(x, show_type(ty), str(e)) from e
        members.append(RefinementMember(member.label, member.bound, result.ty))

    if not satisfies(achieved, want):
        raise AvoidFailed(x, show_type(ty), f"result is only related by '{achieved.value}'")
    return AvoidResult(merge_type(head.ty, Refinement(tuple(members))), achieved)
