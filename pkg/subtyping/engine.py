"""
The algorithmic subtype relation.

Rules are tried in a fixed order: S-Top, S-Bot, S-Refine, S-NameUp (declared edges in
declaration order), S-Lower (upcast the left path) and S-Upper (downcast the right
path). Every judgment visited counts as one step of the derivation.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from config import Config
from normalize.bounds import EQ, GE, LE
from normalize.context import Ctx
from normalize.exposure import downcast, upcast
from syntax.ast import (
    Bottom, FieldDecl, MemberDecl, MethodDecl, Named, PathSel, Refined, Refinement, Top, Type,
    TypeMemberDecl, named,
)
from syntax.printer import show_type
from syntax.subst import free_vars, fresh_name, rename_var

logger = logging.getLogger(__name__)

Relate = Callable[[Ctx, Type, Type], bool]


class StepCeilingExceeded(Exception):
    def __init__(self, steps: int, lhs: Type, rhs: Type):
        self.steps = steps
        super().__init__(f"subtype query {show_type(lhs)} <: {show_type(rhs)} passed {steps} steps")


@dataclass
class TraceNode:
    rule: str
    lhs: str
    rhs: str
    children: list["TraceNode"] = field(default_factory=list)
    result: bool = False


@dataclass
class DerivationTrace:
    steps: int = 0
    roots: list[TraceNode] = field(default_factory=list)

    def render(self) -> str:
        lines: list[str] = []

        def walk(node: TraceNode, level: int) -> None:
            status = "ok" if node.result else "fail"
            lines.append(f"{'  ' * level}{node.rule}  {node.lhs} <: {node.rhs}  [{status}]")
            for child in node.children:
                walk(child, level + 1)

        for root in self.roots:
            walk(root, 0)
        return "\n".join(lines)


class SubtypeEngine:
    """
    One engine per query. Judgments currently being derived are kept on a stack so a
    repeated goal is cut instead of looping; failed goals are cached unless their
    failure depended on such a cut. Caching is off when a tree is recorded.
    """

    def __init__(self, record: bool = False, ceiling: Optional[int] = None):
        self.record = record
        self.ceiling = Config.STEP_CEILING if ceiling is None else ceiling
        self.trace = DerivationTrace()
        self.active: set = set()
        self.failed: set = set()
        self.cuts = 0
        self._stack: list[TraceNode] = []

    # --- bookkeeping ---

    def _open(self, rule: str, lhs: Type, rhs: Type) -> Optional[TraceNode]:
        self.trace.steps += 1
        if self.trace.steps > self.ceiling:
            raise StepCeilingExceeded(self.trace.steps, lhs, rhs)
        if not self.record:
            return None
        node = TraceNode(rule, show_type(lhs), show_type(rhs))
        if self._stack:
            self._stack[-1].children.append(node)
        else:
            self.trace.roots.append(node)
        return node

    # --- type subtyping ---

    def subtype(self, ctx: Ctx, lhs: Type, rhs: Type) -> bool:
        key = (ctx.gamma, ctx.store, lhs, rhs)
        if key in self.failed:
            return False
        if key in self.active:
            self.cuts += 1
            self._open("cycle", lhs, rhs)
            return False

        node = self._open("-", lhs, rhs)
        if node is not None:
            self._stack.append(node)
        self.active.add(key)
        cuts_before = self.cuts
        try:
            rule = self._rules(ctx, lhs, rhs)
        finally:
            self.active.discard(key)
            if node is not None:
                self._stack.pop()

        if node is not None:
            node.result = rule is not None
            node.rule = rule or "-"
        if rule is None and not self.record and self.cuts == cuts_before:
            self.failed.add(key)
        return rule is not None

    def _rules(self, ctx: Ctx, lhs: Type, rhs: Type) -> Optional[str]:
        if isinstance(rhs, Top):
            return "S-Top"
        if isinstance(lhs, Bottom):
            return "S-Bot"
        if isinstance(lhs, Refined) and isinstance(rhs, Refined):
            if lhs.base == rhs.base and self.refinement_subtype(ctx, lhs.refinement, rhs.refinement):
                return "S-Refine"
            if isinstance(lhs.base, Named) and isinstance(rhs.base, Named) and self._name_up(ctx, lhs, rhs):
                return "S-NameUp"
        if isinstance(lhs, Refined) and isinstance(lhs.base, PathSel):
            raised = upcast(ctx, lhs)
            if raised != lhs and self.subtype(ctx, raised, rhs):
                return "S-Lower"
        if isinstance(rhs, Refined) and isinstance(rhs.base, PathSel):
            lowered = downcast(ctx, rhs)
            if lowered != rhs and self.subtype(ctx, lhs, lowered):
                return "S-Upper"
        return None

    def _name_up(self, ctx: Ctx, lhs: Refined, rhs: Refined) -> bool:
        # The left refinement is carried onto the supertype, not the edge's condition.
        for decl in ctx.sigma:
            if decl.lhs_name != lhs.base.name:
                continue
            if not self.refinement_subtype(ctx, lhs.refinement, decl.lhs_refinement):
                continue
            if self.subtype(ctx, named(decl.rhs_name, lhs.refinement), rhs):
                return True
        return False

    # --- members and refinements ---

    def member_subtype(self, ctx: Ctx, left, right, relate: Optional[Relate] = None) -> bool:
        """Both arguments carry `bound` and `ty`; refinement members and type-member declarations mix freely."""
        relate = relate or self.subtype
        if right.bound is EQ:
            return left.bound is EQ and relate(ctx, left.ty, right.ty) and relate(ctx, right.ty, left.ty)
        if right.bound is LE:
            return left.bound in (LE, EQ) and relate(ctx, left.ty, right.ty)
        if right.bound is GE:
            return left.bound in (GE, EQ) and relate(ctx, right.ty, left.ty)
        return False

    def refinement_subtype(self, ctx: Ctx, left: Refinement, right: Refinement,
                           relate: Optional[Relate] = None) -> bool:
        for wanted in right:
            found = left.get(wanted.label)
            if found is None or not self.member_subtype(ctx, found, wanted, relate):
                return False
        return True

    def decl_list_subtype(self, ctx: Ctx, left: Sequence[MemberDecl], right: Sequence[MemberDecl],
                          relate: Optional[Relate] = None) -> Optional[str]:
        """Returns the label of the first member of `right` that `left` fails to provide, or None."""
        relate = relate or self.subtype
        by_label = {d.label: d for d in left}
        for wanted in right:
            found = by_label.get(wanted.label)
            if found is None or not self._decl_subtype(ctx, found, wanted, relate):
                return wanted.label
        return None

    def _decl_subtype(self, ctx: Ctx, found: MemberDecl, wanted: MemberDecl, relate: Relate) -> bool:
        if isinstance(wanted, TypeMemberDecl):
            return isinstance(found, TypeMemberDecl) and self.member_subtype(ctx, found, wanted, relate)
        if isinstance(wanted, FieldDecl):
            return isinstance(found, FieldDecl) and relate(ctx, found.ty, wanted.ty)
        if isinstance(wanted, MethodDecl):
            if not isinstance(found, MethodDecl):
                return False
            taken = ctx.bound_names() | free_vars(found) | free_vars(wanted)
            param = fresh_name(wanted.param, taken)
            found_result = rename_var(found.result_ty, found.param, param)
            wanted_result = rename_var(wanted.result_ty, wanted.param, param)
            if not relate(ctx, wanted.param_ty, found.param_ty):
                return False
            return relate(ctx.push(param, wanted.param_ty), found_result, wanted_result)
        # Multi-parameter declarations only exist before desugaring.
        return found == wanted


def is_subtype(ctx: Ctx, lhs: Type, rhs: Type, trace: bool = False) -> tuple[bool, DerivationTrace]:
    engine = SubtypeEngine(record=trace)
    result = engine.subtype(ctx, lhs, rhs)
    return result, engine.trace


def member_subtype(ctx: Ctx, left, right) -> bool:
    return SubtypeEngine().member_subtype(ctx, left, right)


def refinement_subtype(ctx: Ctx, left: Refinement, right: Refinement) -> bool:
    return SubtypeEngine().refinement_subtype(ctx, left, right)


def decl_list_subtype(ctx: Ctx, left: Sequence[MemberDecl], right: Sequence[MemberDecl],
                      relate: Optional[Relate] = None) -> Optional[str]:
    return SubtypeEngine().decl_list_subtype(ctx, left, right, relate)
