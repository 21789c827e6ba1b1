"""
Big-step evaluation, with and without fuel.

Expressions are closed up to heap locations: a let binding or method call substitutes
the resulting location for the bound variable before evaluating further.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Union

from interpreter.heap import Heap, HeapEntry
from normalize.context import Ctx
from syntax.ast import (
    Compound, DefTable, Expr, FieldDefn, FieldSel, Let, Loc, MethodApp, MethodDefn, New, Operand, PathE,
    StoreEnv, SubtypeTable,
)
from syntax.subst import subst_path
from typecheck.checker import TypeChecker
from typecheck.errors import TypeCheckFailure

logger = logging.getLogger(__name__)


class EvalError(Exception):
    """Raised only on ill-typed input."""


class MissingMember(EvalError):
    def __init__(self, loc: Loc, label: str):
        self.loc = loc
        self.label = label
        super().__init__(f"object at {loc} has no member '{label}'")


class UnboundLoc(EvalError):
    def __init__(self, subject):
        self.subject = subject
        super().__init__(f"'{subject}' does not name an allocated object")


class _Stuck:
    def __repr__(self) -> str:
        return "STUCK"


STUCK = _Stuck()


@dataclass(frozen=True)
class EvalOutcome:
    heap: Heap
    result: Union[Loc, _Stuck]

    @property
    def stuck(self) -> bool:
        return self.result is STUCK


def _loc(heap: Heap, operand: Operand) -> Loc:
    if not isinstance(operand, Loc):
        raise UnboundLoc(operand.expr if isinstance(operand, Compound) else operand)
    if heap.get(operand) is None:
        raise UnboundLoc(operand)
    return operand


def _member(heap: Heap, loc: Loc, label: str, kind) -> tuple[HeapEntry, object]:
    entry = heap.get(loc)
    member = entry.member(label)
    if not isinstance(member, kind):
        raise MissingMember(loc, label)
    return entry, member


class _Evaluator:
    """`fuel=None` evaluates without a bound; otherwise every rule spends one unit of depth."""

    def run(self, heap: Heap, expr: Expr, fuel: Optional[int]) -> EvalOutcome:
        if fuel is not None and fuel <= 0:
            return EvalOutcome(heap, STUCK)
        rest = None if fuel is None else fuel - 1

        if isinstance(expr, PathE):
            return EvalOutcome(heap, _loc(heap, expr.path))

        if isinstance(expr, FieldSel):
            target = _loc(heap, expr.target)
            entry, field = _member(heap, target, expr.label, FieldDefn)
            value = subst_path(field.value, entry.self_var, target)
            return EvalOutcome(heap, _loc(heap, value))

        if isinstance(expr, MethodApp):
            target = _loc(heap, expr.target)
            arg = _loc(heap, expr.arg)
            entry, method = _member(heap, target, expr.method, MethodDefn)
            body = subst_path(subst_path(method.body, entry.self_var, target), method.param, arg)
            return self.run(heap, body, rest)

        if isinstance(expr, New):
            grown, loc = heap.alloc(HeapEntry(expr.self_var, expr.defs, expr.ty))
            return EvalOutcome(grown, loc)

        if isinstance(expr, Let):
            bound = self.run(heap, expr.bound, rest)
            if bound.stuck:
                return bound
            return self.run(bound.heap, subst_path(expr.body, expr.var, bound.result), rest)

        raise EvalError(f"cannot evaluate {type(expr).__name__}")


def eval_big(heap: Heap, expr: Expr) -> tuple[Heap, Loc]:
    outcome = _Evaluator().run(heap, expr, None)
    return outcome.heap, outcome.result


def eval_fuel(heap: Heap, expr: Expr, fuel: int) -> EvalOutcome:
    outcome = _Evaluator().run(heap, expr, fuel)
    if outcome.stuck:
        logger.info(f"Evaluation ran out of fuel ({fuel}) after {len(outcome.heap)} allocation(s)")
    return outcome


def heap_well_typed(delta: DefTable, sigma: SubtypeTable, store: StoreEnv, heap: Heap,
                    use_expansion: bool = True) -> bool:
    """Every stored object definition types against the location's recorded type."""
    if store.domain() != tuple(range(len(heap))):
        return False
    ctx = Ctx(delta, sigma, store=store)
    checker = TypeChecker(use_expansion)
    for loc, entry in heap:
        try:
            checker.type_obj_defn(ctx, entry.self_var, entry.defs, store.lookup(loc.id))
        except TypeCheckFailure as e:
            logger.warning(f"Heap entry {loc} does not type at its store type: {e}")
            return False
    return True
