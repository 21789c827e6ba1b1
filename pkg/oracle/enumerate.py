"""
Brute-force subtype search used to cross-check the engine.

Every rule whose conclusion matches is tried, with every declared edge as a separate
alternative, down to a depth bound. Nothing is cached across depths and no cycle is
cut: a goal that only recurs is simply reported as unknown.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from config import Config
from normalize.bounds import EQ, GE, LE
from normalize.context import Ctx
from normalize.exposure import downcast, upcast
from syntax.ast import Bottom, Named, PathSel, Refined, Refinement, Top, Type, named

logger = logging.getLogger(__name__)


class _Tri(Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Holds:
    depth: int
    holds = True


@dataclass(frozen=True)
class Refuted:
    depth: int
    holds = False


@dataclass(frozen=True)
class Unknown:
    budget: int
    holds = None


OracleVerdict = Union[Holds, Refuted, Unknown]

Goal = tuple[Type, Type]


def _refinement_goals(left: Refinement, right: Refinement) -> Optional[list[Goal]]:
    """Premises of S-R-Cons for every wanted member, or None when a member has no matching rule."""
    goals: list[Goal] = []
    for wanted in right:
        found = left.get(wanted.label)
        if found is None:
            return None
        if wanted.bound is EQ:
            if found.bound is not EQ:
                return None
            goals += [(found.ty, wanted.ty), (wanted.ty, found.ty)]
        elif wanted.bound is LE:
            if found.bound not in (LE, EQ):
                return None
            goals.append((found.ty, wanted.ty))
        elif wanted.bound is GE:
            if found.bound not in (GE, EQ):
                return None
            goals.append((wanted.ty, found.ty))
    return goals


def _alternatives(ctx: Ctx, lhs: Type, rhs: Type) -> list[list[Goal]]:
    """Each alternative is the premise list of one applicable rule; an empty list is an axiom."""
    out: list[list[Goal]] = []
    if isinstance(rhs, Top) or isinstance(lhs, Bottom):
        out.append([])
    if isinstance(lhs, Refined) and isinstance(rhs, Refined):
        if lhs.base == rhs.base:
            goals = _refinement_goals(lhs.refinement, rhs.refinement)
            if goals is not None:
                out.append(goals)
        if isinstance(lhs.base, Named) and isinstance(rhs.base, Named):
            for decl in ctx.sigma:
                if decl.lhs_name != lhs.base.name:
                    continue
                goals = _refinement_goals(lhs.refinement, decl.lhs_refinement)
                if goals is not None:
                    out.append(goals + [(named(decl.rhs_name, lhs.refinement), rhs)])
    if isinstance(lhs, Refined) and isinstance(lhs.base, PathSel):
        raised = upcast(ctx, lhs)
        if raised != lhs:
            out.append([(raised, rhs)])
    if isinstance(rhs, Refined) and isinstance(rhs.base, PathSel):
        lowered = downcast(ctx, rhs)
        if lowered != rhs:
            out.append([(lhs, lowered)])
    return out


class _Search:
    def __init__(self, ctx: Ctx):
        self.ctx = ctx
        self.seen: dict[tuple[Type, Type, int], _Tri] = {}

    def derivable(self, lhs: Type, rhs: Type, depth: int) -> _Tri:
        if depth <= 0:
            return _Tri.UNKNOWN
        key = (lhs, rhs, depth)
        if key in self.seen:
            return self.seen[key]
        verdict = _Tri.NO
        for premises in _alternatives(self.ctx, lhs, rhs):
            result = self._all(premises, depth - 1)
            if result is _Tri.YES:
                verdict = _Tri.YES
                break
            if result is _Tri.UNKNOWN:
                verdict = _Tri.UNKNOWN
        self.seen[key] = verdict
        return verdict

    def _all(self, premises: list[Goal], depth: int) -> _Tri:
        outcome = _Tri.YES
        for lhs, rhs in premises:
            result = self.derivable(lhs, rhs, depth)
            if result is _Tri.NO:
                return _Tri.NO
            if result is _Tri.UNKNOWN:
                outcome = _Tri.UNKNOWN
        return outcome


def enumerate_subtype(ctx: Ctx, lhs: Type, rhs: Type, max_depth: Optional[int] = None) -> OracleVerdict:
    """Iterative deepening up to `max_depth` derivation levels."""
    max_depth = Config.ORACLE_DEPTH if max_depth is None else max_depth
    search = _Search(ctx)
    for depth in range(1, max_depth + 1):
        result = search.derivable(lhs, rhs, depth)
        if result is _Tri.YES:
            return Holds(depth)
        if result is _Tri.NO:
            return Refuted(depth)
    return Unknown(max_depth)
