from __future__ import annotations

from frontend import diagnostics as codes
from frontend.diagnostics import Diagnostic
from syntax.ast import (
    Compound, FieldDefn, FieldSel, Let, MethodApp, MethodDefn, MultiMethodApp, MultiMethodDefn, New, Program,
)


def _check_operand(operand, role: str, span, path: str, out: list[Diagnostic]) -> None:
    if isinstance(operand, Compound):
        out.append(Diagnostic(codes.NON_ANF, f"{role} must be a path", operand.span or span, file=path))
        _walk(operand.expr, path, out)


def _walk(expr, path: str, out: list[Diagnostic]) -> None:
    if isinstance(expr, FieldSel):
        _check_operand(expr.target, "field selection target", expr.span, path, out)
    elif isinstance(expr, MethodApp):
        _check_operand(expr.target, "method target", expr.span, path, out)
        _check_operand(expr.arg, "argument", expr.span, path, out)
    elif isinstance(expr, MultiMethodApp):
        _check_operand(expr.target, "method target", expr.span, path, out)
        for arg in expr.args:
            _check_operand(arg, "argument", expr.span, path, out)
    elif isinstance(expr, Let):
        _walk(expr.bound, path, out)
        _walk(expr.body, path, out)
    elif isinstance(expr, New):
        for d in expr.defs:
            if isinstance(d, FieldDefn):
                _check_operand(d.value, "field value", d.span, path, out)
            elif isinstance(d, (MethodDefn, MultiMethodDefn)):
                _walk(d.body, path, out)


def validate_anf(program: Program, path: str = "<input>") -> list[Diagnostic]:
    """Every method target, argument and field value must be a single-element path."""
    out: list[Diagnostic] = []
    _walk(program.main, path, out)
    return out
