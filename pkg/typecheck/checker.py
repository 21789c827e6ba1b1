"""
Term typing, type validity, object definitions and whole-program checks.

Typing is syntax-directed: every expression has exactly one type and there is no
subsumption on terms. Subtype obligations go through `subtyping.expansion.check`,
so they see named types unfolded to a common refinement depth unless expansion is
switched off.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

from config import Config
from normalize.avoidance import avoid
from normalize.context import Ctx, type_path
from normalize.errors import AvoidFailed, IncompatibleBounds, LookupOnPathBase, NoSuchMember, NormalizeError, UnboundPath
from normalize.exposure import expose
from normalize.lookup import lookup_decl, members_of
from subtyping.engine import SubtypeEngine
from subtyping.expansion import check, checker
from syntax.ast import (
    Bottom, Bound, Compound, DefTable, Expr, FieldDecl, FieldDefn, FieldSel, Let, MethodApp, MethodDecl,
    MethodDefn, MultiMethodApp, Named, NameDef, New, ObjMemberDefn, Operand, Path, PathE, PathSel, Program, Refined, Span,
    StoreEnv, SubtypeDecl, SubtypeTable, Top, Type, TypeMemberDecl, TypeMemberDefn, Var,
)
from syntax.merge import merge_members, merge_type, refinement_as_decls, sig_of, type_defs_refinement
from syntax.printer import show_type
from syntax.subst import fresh_name, rename_var, subst_path
from typecheck.errors import TypeCheckError, TypeCheckFailure, TypeErrorKind

logger = logging.getLogger(__name__)


def _fail(kind: TypeErrorKind, message: str, span: Optional[Span] = None, **extra) -> TypeCheckFailure:
    return TypeCheckFailure(TypeCheckError(kind, message, span, **extra))


def _from_normalize(error: NormalizeError, span: Optional[Span]) -> TypeCheckFailure:
    if isinstance(error, UnboundPath):
        return _fail(TypeErrorKind.UNBOUND_PATH, str(error), span)
    if isinstance(error, (NoSuchMember, LookupOnPathBase)):
        return _fail(TypeErrorKind.NO_SUCH_MEMBER, str(error), span)
    if isinstance(error, (AvoidFailed, IncompatibleBounds)):
        return _fail(TypeErrorKind.AVOID_FAILURE, str(error), span)
    return _fail(TypeErrorKind.INVALID_TYPE, str(error), span)


def build_contexts(program: Program) -> tuple[DefTable, SubtypeTable]:
    """Δ maps each name to its body verbatim; Σ lists the subtype declarations in order."""
    delta: DefTable = {}
    for decl in program.named_decls:
        if decl.name in delta:
            raise _fail(TypeErrorKind.DUPLICATE_NAME, f"type '{decl.name}' is declared more than once", decl.span)
        delta[decl.name] = NameDef(decl.self_var, decl.members, decl.mark)
    return delta, program.subtype_decls


@dataclass
class CheckedProgram:
    program: Program
    delta: DefTable
    sigma: SubtypeTable
    main_type: Optional[Type] = None
    errors: list[TypeCheckError] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors and self.main_type is not None

    def context(self, store: StoreEnv = StoreEnv()) -> Ctx:
        return Ctx(self.delta, self.sigma, store=store)


class TypeChecker:
    def __init__(self, use_expansion: bool = True, avoid_fuel: Optional[int] = None, record_traces: bool = False):
        self.use_expansion = use_expansion
        self.avoid_fuel = Config.AVOID_FUEL if avoid_fuel is None else avoid_fuel
        self.record_traces = record_traces
        self.relate = checker(use_expansion)

    # --- subtype obligations ---

    def require_subtype(self, ctx: Ctx, actual: Type, expected: Type, what: str, span: Optional[Span]) -> None:
        ok, trace = check(ctx, actual, expected, self.use_expansion)
        if ok:
            return
        if self.record_traces:
            _, trace = check(ctx, actual, expected, self.use_expansion, trace=True)
        raise _fail(TypeErrorKind.SUBTYPE_FAILURE,
                    f"{what}: found {show_type(actual)}, required {show_type(expected)}",
                    span, expected=expected, actual=actual, trace=trace)

    # --- declarations ---

    def check_subtype_decl(self, ctx: Ctx, decl: SubtypeDecl) -> None:
        """Unfolds both names at a shared self variable and compares their member lists."""
        lhs_def, rhs_def = ctx.definition(decl.lhs_name), ctx.definition(decl.rhs_name)
        for name, definition in ((decl.lhs_name, lhs_def), (decl.rhs_name, rhs_def)):
            if definition is None:
                raise _fail(TypeErrorKind.BAD_SUBTYPE_DECL, f"unknown type '{name}'", decl.span)
        x = fresh_name("x", {lhs_def.self_var, rhs_def.self_var})
        inner = ctx.push(x, Refined(Named(decl.lhs_name), decl.lhs_refinement))
        provided = merge_members(members_of(inner, decl.lhs_name, Var(x)), refinement_as_decls(decl.lhs_refinement))
        required = members_of(inner, decl.rhs_name, Var(x))
        failing = SubtypeEngine().decl_list_subtype(inner, provided, required, self.relate)
        if failing is not None:
            raise _fail(TypeErrorKind.BAD_SUBTYPE_DECL,
                        f"'{decl.lhs_name}' does not provide member '{failing}' of '{decl.rhs_name}'", decl.span)

    # --- types ---

    def type_valid(self, ctx: Ctx, ty: Type, span: Optional[Span] = None) -> None:
        if isinstance(ty, (Top, Bottom)):
            return
        base = ty.base
        if isinstance(base, Named) and ctx.definition(base.name) is None:
            raise _fail(TypeErrorKind.INVALID_TYPE, f"unknown type '{base.name}'", span)
        try:
            if isinstance(base, PathSel):
                self._selected_member(ctx, base, span)
            unrefined = expose(ctx, Refined(base))
        except NormalizeError as e:
            raise _from_normalize(e, span) from e
        if not ty.refinement:
            return
        if not isinstance(unrefined, Refined) or not isinstance(unrefined.base, Named):
            raise _fail(TypeErrorKind.INVALID_TYPE,
                        f"'{show_type(Refined(base))}' has no type members to refine", span)

        x = fresh_name("x", ctx.bound_names())
        inner = ctx.push(x, ty)
        engine = SubtypeEngine()
        for member in ty.refinement:
            try:
                declared = lookup_decl(inner, unrefined, Var(x), member.label)
            except NormalizeError as e:
                raise _fail(TypeErrorKind.INVALID_TYPE, str(e), span) from e
            if not isinstance(declared, TypeMemberDecl):
                raise _fail(TypeErrorKind.INVALID_TYPE, f"'{member.label}' is not a type member", span)
            if not engine.member_subtype(inner, member, declared, self.relate):
                raise _fail(TypeErrorKind.INVALID_TYPE,
                            f"refinement of '{member.label}' in {show_type(ty)} does not fit its declaration",
                            span, expected=declared.ty, actual=member.ty)
            self.type_valid(ctx, member.ty, span)

    def _selected_member(self, ctx: Ctx, base: PathSel, span: Optional[Span]) -> None:
        """p.t must name a type member of p's exposed type. ⊥ and abstract owners are not checked."""
        owner = expose(ctx, type_path(ctx, base.path))
        if isinstance(owner, Bottom):
            return
        try:
            declared = lookup_decl(ctx, owner, base.path, base.label)
        except LookupOnPathBase:
            return
        except NoSuchMember as e:
            raise _fail(TypeErrorKind.INVALID_TYPE, str(e), span) from e
        if not isinstance(declared, TypeMemberDecl):
            raise _fail(TypeErrorKind.INVALID_TYPE, f"'{base.label}' is not a type member", span)

    # --- expressions ---

    def _path(self, operand: Operand, span: Optional[Span]) -> Path:
        if isinstance(operand, Compound):
            raise _fail(TypeErrorKind.INVALID_TYPE, "operand is not a path; the program is not in A-normal form", span)
        return operand

    def _type_path(self, ctx: Ctx, path: Path, span: Optional[Span]) -> Type:
        try:
            return type_path(ctx, path)
        except NormalizeError as e:
            raise _from_normalize(e, span) from e

    def _member(self, ctx: Ctx, target: Path, label: str, span: Optional[Span]):
        """Exposes the target's type and looks the member up with self replaced by the target path."""
        try:
            exposed = expose(ctx, type_path(ctx, target))
            if not isinstance(exposed, Refined) or not isinstance(exposed.base, Named):
                raise NoSuchMember(show_type(exposed), label)
            return lookup_decl(ctx, exposed, target, label)
        except NormalizeError as e:
            raise _from_normalize(e, span) from e

    def type_expr(self, ctx: Ctx, expr: Expr) -> Type:
        if isinstance(expr, PathE):
            return self._type_path(ctx, expr.path, expr.span)

        if isinstance(expr, FieldSel):
            target = self._path(expr.target, expr.span)
            member = self._member(ctx, target, expr.label, expr.span)
            if not isinstance(member, FieldDecl):
                raise _fail(TypeErrorKind.NO_SUCH_MEMBER, f"'{expr.label}' is not a field", expr.span)
            return member.ty

        if isinstance(expr, MethodApp):
            target = self._path(expr.target, expr.span)
            arg = self._path(expr.arg, expr.span)
            member = self._member(ctx, target, expr.method, expr.span)
            if not isinstance(member, MethodDecl):
                raise _fail(TypeErrorKind.NO_SUCH_MEMBER, f"'{expr.method}' is not a method", expr.span)
            arg_ty = self._type_path(ctx, arg, expr.span)
            self.require_subtype(ctx, arg_ty, member.param_ty, f"argument of '{expr.method}'", expr.span)
            return subst_path(member.result_ty, member.param, arg)

        if isinstance(expr, New):
            self.type_valid(ctx, expr.ty, expr.span)
            self.type_obj_defn(ctx, expr.self_var, expr.defs, expr.ty, expr.span)
            return expr.ty

        if isinstance(expr, Let):
            bound_ty = self.type_expr(ctx, expr.bound)
            if expr.ascription is not None:
                self.type_valid(ctx, expr.ascription, expr.span)
                self.require_subtype(ctx, bound_ty, expr.ascription, f"binding of '{expr.var}'", expr.span)
                bound_ty = expr.ascription
            var, body = expr.var, expr.body
            if var in ctx.gamma:
                var = fresh_name(var, ctx.bound_names())
                body = rename_var(body, expr.var, var)
            body_ty = self.type_expr(ctx.push(var, bound_ty), body)
            try:
                return avoid(ctx.push(var, bound_ty), body_ty, var, Bound.LE, self.avoid_fuel).ty
            except NormalizeError as e:
                raise _from_normalize(e, expr.span) from e

        if isinstance(expr, MultiMethodApp):
            raise _fail(TypeErrorKind.NO_SUCH_MEMBER, f"call of '{expr.method}' was not desugared", expr.span)
        raise _fail(TypeErrorKind.INVALID_TYPE, f"cannot type {type(expr).__name__}")

    def type_obj_defn(self, ctx: Ctx, self_var: str, defs: tuple[ObjMemberDefn, ...], ascribed: Type,
                      span: Optional[Span] = None) -> None:
        if not isinstance(ascribed, Top) and not (isinstance(ascribed, Refined) and isinstance(ascribed.base, Named)):
            raise _fail(TypeErrorKind.INVALID_TYPE,
                        f"objects can only be created at a named type or Top, not {show_type(ascribed)}", span)
        if self_var in ctx.gamma:
            fresh = fresh_name(self_var, ctx.bound_names())
            defs = tuple(rename_var(d, self_var, fresh) for d in defs)
            self_var = fresh

        self_ty = merge_type(ascribed, type_defs_refinement(defs))
        inner = ctx.push(self_var, self_ty)
        self.require_subtype(inner, self_ty, ascribed, "object type", span)

        if isinstance(ascribed, Refined):
            required = merge_members(members_of(inner, ascribed.base.name, Var(self_var)),
                                     refinement_as_decls(ascribed.refinement))
        else:
            required = ()
        provided = sig_of(defs)
        failing = SubtypeEngine().decl_list_subtype(inner, provided, required, self.relate)
        if failing is not None:
            if all(d.label != failing for d in provided):
                raise _fail(TypeErrorKind.NO_SUCH_MEMBER,
                            f"object of type {show_type(ascribed)} does not define '{failing}'", span)
            raise _fail(TypeErrorKind.SUBTYPE_FAILURE,
                        f"definition of '{failing}' does not match its declaration in {show_type(ascribed)}", span)

        for d in defs:
            if isinstance(d, TypeMemberDefn):
                self.type_valid(inner, d.ty, d.span)
            elif isinstance(d, FieldDefn):
                value_ty = self._type_path(inner, self._path(d.value, d.span), d.span)
                self.require_subtype(inner, value_ty, d.ty, f"field '{d.label}'", d.span)
            elif isinstance(d, MethodDefn):
                param, body, result_ty = d.param, d.body, d.result_ty
                if param in inner.gamma:
                    param = fresh_name(param, inner.bound_names())
                    body = rename_var(body, d.param, param)
                    result_ty = rename_var(result_ty, d.param, param)
                method_ctx = inner.push(param, d.param_ty)
                body_ty = self.type_expr(method_ctx, body)
                self.require_subtype(method_ctx, body_ty, result_ty, f"body of '{d.label}'", d.span)

    # --- programs ---

    def check_program(self, program: Program) -> CheckedProgram:
        """Every declared subtype edge is validated, then main is typed under empty Γ and S."""
        try:
            delta, sigma = build_contexts(program)
        except TypeCheckFailure as e:
            return CheckedProgram(program, {}, (), errors=[e.error])
        result = CheckedProgram(program, delta, sigma)
        ctx = result.context()
        for decl in sigma:
            try:
                self.check_subtype_decl(ctx, decl)
            except TypeCheckFailure as e:
                result.errors.append(e.error)
        try:
            result.main_type = self.type_expr(ctx, program.main)
        except TypeCheckFailure as e:
            result.errors.append(e.error)
        logger.info(f"Typechecked program: {len(sigma)} subtype declaration(s), {len(result.errors)} error(s)")
        return result


def check_program(program: Program, use_expansion: bool = True, avoid_fuel: Optional[int] = None,
                  record_traces: bool = False) -> CheckedProgram:
    return TypeChecker(use_expansion, avoid_fuel, record_traces).check_program(program)
