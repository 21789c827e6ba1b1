"""Pretty-printing in the concrete surface syntax accepted by frontend.parser."""
from __future__ import annotations

from syntax.ast import (
    AssertDirective, Bottom, Compound, FieldDecl, FieldDefn, FieldSel, Let, Loc, MethodApp,
    MethodDecl, MethodDefn, MultiMethodApp, MultiMethodDecl, MultiMethodDefn, NamedTypeDecl, New,
    Param, PathE, PathSel, Program, Refined, Refinement, RefinementMember, ShapeMark, SubtypeDecl,
    Top, TypeMemberDecl, TypeMemberDefn, Var, Named,
)

INDENT = "  "


def show_path(path) -> str:
    if isinstance(path, (Var, Loc)):
        return str(path)
    if isinstance(path, Compound):
        return f"({show_expr(path.expr)})"
    raise ValueError(f"not a path: {path!r}")


def show_base(base) -> str:
    if isinstance(base, Named):
        return base.name
    if isinstance(base, PathSel):
        return f"{show_path(base.path)}.{base.label}"
    raise ValueError(f"not a base type: {base!r}")


def show_refinement_member(member: RefinementMember) -> str:
    return f"type {member.label} {member.bound.value} {show_type(member.ty)}"


def show_refinement(refinement: Refinement) -> str:
    if not refinement:
        return "{ }"
    return "{ " + ", ".join(show_refinement_member(m) for m in refinement) + " }"


def show_type(ty) -> str:
    if isinstance(ty, Top):
        return "Top"
    if isinstance(ty, Bottom):
        return "Bot"
    if isinstance(ty, Refined):
        if not ty.refinement:
            return show_base(ty.base)
        return f"{show_base(ty.base)} {show_refinement(ty.refinement)}"
    raise ValueError(f"not a type: {ty!r}")


def _params(params: tuple[Param, ...]) -> str:
    return ", ".join(f"{p.name}: {show_type(p.ty)}" for p in params)


def show_member(member) -> str:
    if isinstance(member, TypeMemberDecl):
        prefix = "@shape " if member.mark is ShapeMark.SHAPE else ""
        return f"{prefix}type {member.label} {member.bound.value} {show_type(member.ty)}"
    if isinstance(member, FieldDecl):
        return f"val {member.label}: {show_type(member.ty)}"
    if isinstance(member, MethodDecl):
        return f"def {member.label}({member.param}: {show_type(member.param_ty)}): {show_type(member.result_ty)}"
    if isinstance(member, MultiMethodDecl):
        return f"def {member.label}({_params(member.params)}): {show_type(member.result_ty)}"
    raise ValueError(f"not a member declaration: {member!r}")


def show_defn(defn, level: int = 0) -> str:
    if isinstance(defn, TypeMemberDefn):
        return f"type {defn.label} = {show_type(defn.ty)}"
    if isinstance(defn, FieldDefn):
        return f"val {defn.label}: {show_type(defn.ty)} = {show_path(defn.value)}"
    if isinstance(defn, MethodDefn):
        head = f"def {defn.label}({defn.param}: {show_type(defn.param_ty)}): {show_type(defn.result_ty)}"
        return f"{head} =\n{INDENT * (level + 1)}{show_expr(defn.body, level + 1)}"
    if isinstance(defn, MultiMethodDefn):
        head = f"def {defn.label}({_params(defn.params)}): {show_type(defn.result_ty)}"
        return f"{head} =\n{INDENT * (level + 1)}{show_expr(defn.body, level + 1)}"
    raise ValueError(f"not an object definition: {defn!r}")


def show_expr(expr, level: int = 0) -> str:
    pad = INDENT * level
    if isinstance(expr, PathE):
        return show_path(expr.path)
    if isinstance(expr, FieldSel):
        return f"{show_path(expr.target)}.{expr.label}"
    if isinstance(expr, MethodApp):
        return f"{show_path(expr.target)}.{expr.method}({show_path(expr.arg)})"
    if isinstance(expr, MultiMethodApp):
        args = ", ".join(show_path(a) for a in expr.args)
        return f"{show_path(expr.target)}.{expr.method}({args})"
    if isinstance(expr, New):
        if isinstance(expr.ty, Refined) and expr.ty.refinement:
            head = f"new {show_base(expr.ty.base)} {show_refinement(expr.ty.refinement)}"
        else:
            head = f"new {show_type(expr.ty)}"
        if not expr.defs:
            return f"{head} {{ {expr.self_var} => }}"
        body = "\n".join(f"{pad}{INDENT}{show_defn(d, level + 1)}" for d in expr.defs)
        return f"{head} {{ {expr.self_var} =>\n{body}\n{pad}}}"
    if isinstance(expr, Let):
        ascription = "" if expr.ascription is None else f": {show_type(expr.ascription)}"
        bound = show_expr(expr.bound, level + 1)
        return f"let {expr.var}{ascription} = {bound} in\n{pad}{show_expr(expr.body, level)}"
    raise ValueError(f"not an expression: {expr!r}")


def show_decl(decl) -> str:
    if isinstance(decl, NamedTypeDecl):
        prefix = "@shape " if decl.is_shape else ""
        if not decl.members:
            return f"{prefix}name {decl.name} {{ {decl.self_var} => }}"
        body = "\n".join(f"{INDENT}{show_member(m)}" for m in decl.members)
        return f"{prefix}name {decl.name} {{ {decl.self_var} =>\n{body}\n}}"
    if isinstance(decl, SubtypeDecl):
        refinement = f" {show_refinement(decl.lhs_refinement)}" if decl.lhs_refinement else ""
        return f"subtype {decl.lhs_name}{refinement} <: {decl.rhs_name}"
    if isinstance(decl, AssertDirective):
        op = "<:" if decl.expected else "</:"
        return f"assert {show_type(decl.lhs)} {op} {show_type(decl.rhs)}"
    raise ValueError(f"not a declaration: {decl!r}")


def show_program(program: Program, asserts: tuple[AssertDirective, ...] = ()) -> str:
    parts = [show_decl(d) for d in program.decls]
    parts.extend(show_decl(a) for a in asserts)
    parts.append(show_expr(program.main))
    return "\n\n".join(parts) + "\n"
