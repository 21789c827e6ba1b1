"""
Rewrites methods with zero or several parameters into unary methods over generated record types.

`def Insert(s: ISet, n: Int): ISet` becomes `def Insert($args: Tup$Insert$2$<hash>): ISet`,
where the generated material type has one field per original parameter. Definitions rebind
each parameter from the record at the top of the body, and every call site packs its
arguments into a let-bound `new` of the record type. Call sites are resolved by method
label and arity; the first declared signature for a (label, arity) pair wins.
"""
from __future__ import annotations

import hashlib
import itertools
import logging
from dataclasses import dataclass

from syntax.ast import (
    TOP, FieldDecl, FieldDefn, FieldSel, Let, MethodApp, MethodDecl, MethodDefn, MultiMethodApp,
    MultiMethodDecl, MultiMethodDefn, NamedTypeDecl, New, Param, Program, ShapeMark, Var, named,
)
from syntax.printer import show_type

logger = logging.getLogger(__name__)

TUPLE_PREFIX = "Tup$"
ARGS_VAR = "$args"
TUPLE_SELF = "$t"


@dataclass(frozen=True)
class TupleSignature:
    label: str
    params: tuple[Param, ...]

    @property
    def type_name(self) -> str:
        key = self.label + "|" + ";".join(f"{p.name}:{show_type(p.ty)}" for p in self.params)
        digest = hashlib.sha1(key.encode("utf-8")).hexdigest()[:8]
        return f"{TUPLE_PREFIX}{self.label}${len(self.params)}${digest}"

    def record_decl(self) -> NamedTypeDecl:
        fields = tuple(FieldDecl(p.name, p.ty) for p in self.params)
        return NamedTypeDecl(ShapeMark.MATERIAL, self.type_name, TUPLE_SELF, fields)


class _Desugarer:
    def __init__(self, program: Program):
        self.program = program
        self.by_arity: dict[tuple[str, int], TupleSignature] = {}
        self.generated: dict[str, NamedTypeDecl] = {}
        self.counter = itertools.count()

    def register(self, label: str, params: tuple[Param, ...]) -> TupleSignature:
        sig = TupleSignature(label, params)
        self.by_arity.setdefault((label, len(params)), sig)
        self.generated.setdefault(sig.type_name, sig.record_decl())
        return sig

    def collect_defns(self, expr) -> None:
        if isinstance(expr, Let):
            self.collect_defns(expr.bound)
            self.collect_defns(expr.body)
        elif isinstance(expr, New):
            for d in expr.defs:
                if isinstance(d, MultiMethodDefn):
                    self.register(d.label, d.params)
                if isinstance(d, (MethodDefn, MultiMethodDefn)):
                    self.collect_defns(d.body)

    def run(self) -> Program:
        for decl in self.program.named_decls:
            for m in decl.members:
                if isinstance(m, MultiMethodDecl):
                    self.register(m.label, m.params)
        self.collect_defns(self.program.main)
        if not self.generated and not self._has_calls(self.program.main):
            return self.program

        decls = []
        for decl in self.program.decls:
            if isinstance(decl, NamedTypeDecl):
                decl = NamedTypeDecl(decl.mark, decl.name, decl.self_var,
                                     tuple(self.member(m) for m in decl.members), span=decl.span)
            decls.append(decl)
        main = self.expr(self.program.main)
        existing = {d.name for d in self.program.named_decls}
        decls.extend(d for name, d in self.generated.items() if name not in existing)
        logger.info(f"Desugared multi-parameter methods into {len(self.generated)} record type(s)")
        return Program(tuple(decls), main)

    def _has_calls(self, expr) -> bool:
        if isinstance(expr, MultiMethodApp):
            return True
        if isinstance(expr, Let):
            return self._has_calls(expr.bound) or self._has_calls(expr.body)
        if isinstance(expr, New):
            return any(isinstance(d, (MethodDefn, MultiMethodDefn)) and self._has_calls(d.body) for d in expr.defs)
        return False

    def member(self, m):
        if isinstance(m, MultiMethodDecl):
            sig = TupleSignature(m.label, m.params)
            return MethodDecl(m.label, ARGS_VAR, named(sig.type_name), m.result_ty, span=m.span)
        return m

    def defn(self, d):
        if isinstance(d, MultiMethodDefn):
            sig = TupleSignature(d.label, d.params)
            body = self.expr(d.body)
            for p in reversed(d.params):
                body = Let(p.name, None, FieldSel(Var(ARGS_VAR), p.name, span=d.span), body, span=d.span)
            return MethodDefn(d.label, ARGS_VAR, named(sig.type_name), d.result_ty, body, span=d.span)
        if isinstance(d, MethodDefn):
            return MethodDefn(d.label, d.param, d.param_ty, d.result_ty, self.expr(d.body), span=d.span)
        return d

    def expr(self, e):
        if isinstance(e, Let):
            return Let(e.var, e.ascription, self.expr(e.bound), self.expr(e.body), span=e.span)
        if isinstance(e, New):
            return New(e.ty, e.self_var, tuple(self.defn(d) for d in e.defs), span=e.span)
        if isinstance(e, MultiMethodApp):
            return self.call(e)
        return e

    def call(self, e: MultiMethodApp):
        sig = self.by_arity.get((e.method, len(e.args)))
        if sig is None:
            # No declaration to follow; typechecking will report the unknown method.
            sig = self.register(e.method, tuple(Param(f"arg{i}", TOP) for i in range(len(e.args))))
        packed = f"$a{next(self.counter)}"
        fields = tuple(FieldDefn(p.name, p.ty, a, span=e.span) for p, a in zip(sig.params, e.args))
        record = New(named(sig.type_name), TUPLE_SELF, fields, span=e.span)
        return Let(packed, None, record, MethodApp(e.target, e.method, Var(packed), span=e.span), span=e.span)


def desugar_multi_params(program: Program) -> Program:
    """Idempotent: a program without multi-parameter methods or calls is returned unchanged."""
    return _Desugarer(program).run()

