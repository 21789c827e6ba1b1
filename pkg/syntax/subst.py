"""
Free variables and capture-avoiding path substitution over every syntax sort.

Binders: a named type's or object's self variable scopes over its members, a method
parameter scopes over the result type and body, and a let variable scopes over the body.
"""
from __future__ import annotations

import itertools
from functools import singledispatch

from syntax.ast import (
    Bottom, Compound, FieldDecl, FieldDefn, FieldSel, Let, Loc, MethodApp,
    MethodDecl, MethodDefn, MultiMethodApp, MultiMethodDecl, MultiMethodDefn, New,
    Param, Path, PathE, PathSel, Refined, Refinement, RefinementMember, Top, Type, TypeMemberDecl,
    TypeMemberDefn, Var, Named,
)


def fresh_name(base: str, avoid: set[str] | frozenset[str]) -> str:
    """Keeps `base` unless it collides; otherwise appends the smallest free numeric suffix."""
    if base not in avoid:
        return base
    for n in itertools.count(1):
        candidate = f"{base}_{n}"
        if candidate not in avoid:
            return candidate


# --- free variables ---

def path_vars(path: Path) -> set[str]:
    return {path.name} if isinstance(path, Var) else set()


@singledispatch
def free_vars(subject) -> set[str]:
    raise TypeError(f"free_vars: unsupported node {type(subject).__name__}")


@free_vars.register
def _(subject: Top) -> set[str]:
    return set()


@free_vars.register
def _(subject: Bottom) -> set[str]:
    return set()


@free_vars.register
def _(subject: Refined) -> set[str]:
    out = path_vars(subject.base.path) if isinstance(subject.base, PathSel) else set()
    return out | free_vars(subject.refinement)


@free_vars.register
def _(subject: Refinement) -> set[str]:
    out: set[str] = set()
    for member in subject.members:
        out |= free_vars(member.ty)
    return out


@free_vars.register
def _(subject: Var) -> set[str]:
    return {subject.name}


@free_vars.register
def _(subject: Loc) -> set[str]:
    return set()


@free_vars.register
def _(subject: TypeMemberDecl) -> set[str]:
    return free_vars(subject.ty)


@free_vars.register
def _(subject: FieldDecl) -> set[str]:
    return free_vars(subject.ty)


@free_vars.register
def _(subject: MethodDecl) -> set[str]:
    return free_vars(subject.param_ty) | (free_vars(subject.result_ty) - {subject.param})


@free_vars.register
def _(subject: MultiMethodDecl) -> set[str]:
    out: set[str] = set()
    for p in subject.params:
        out |= free_vars(p.ty)
    return out | (free_vars(subject.result_ty) - {p.name for p in subject.params})


@free_vars.register
def _(subject: Compound) -> set[str]:
    return free_vars(subject.expr)


@free_vars.register
def _(subject: PathE) -> set[str]:
    return free_vars(subject.path)


@free_vars.register
def _(subject: FieldSel) -> set[str]:
    return free_vars(subject.target)


@free_vars.register
def _(subject: MethodApp) -> set[str]:
    return free_vars(subject.target) | free_vars(subject.arg)


@free_vars.register
def _(subject: MultiMethodApp) -> set[str]:
    out = free_vars(subject.target)
    for a in subject.args:
        out |= free_vars(a)
    return out


@free_vars.register
def _(subject: New) -> set[str]:
    inner: set[str] = set()
    for d in subject.defs:
        inner |= free_vars(d)
    return free_vars(subject.ty) | (inner - {subject.self_var})


@free_vars.register
def _(subject: Let) -> set[str]:
    out = free_vars(subject.bound) | (free_vars(subject.body) - {subject.var})
    if subject.ascription is not None:
        out |= free_vars(subject.ascription)
    return out


@free_vars.register
def _(subject: TypeMemberDefn) -> set[str]:
    return free_vars(subject.ty)


@free_vars.register
def _(subject: FieldDefn) -> set[str]:
    return free_vars(subject.ty) | free_vars(subject.value)


@free_vars.register
def _(subject: MethodDefn) -> set[str]:
    scoped = free_vars(subject.result_ty) | free_vars(subject.body)
    return free_vars(subject.param_ty) | (scoped - {subject.param})


@free_vars.register
def _(subject: MultiMethodDefn) -> set[str]:
    out: set[str] = set()
    for p in subject.params:
        out |= free_vars(p.ty)
    scoped = free_vars(subject.result_ty) | free_vars(subject.body)
    return out | (scoped - {p.name for p in subject.params})


# --- substitution ---

def subst_path_in_path(path: Path, x: str, p: Path) -> Path:
    if isinstance(path, Var) and path.name == x:
        return p
    return path


def _binder(name: str, x: str, p: Path, scoped_vars: set[str]) -> str:
    """Renames a binder that would capture the free variables of `p`."""
    if isinstance(p, Var) and p.name == name:
        return fresh_name(name, scoped_vars | {x, p.name})
    return name


@singledispatch
def subst(subject, x: str, p: Path):
    """subject[x := p] for types, member declarations, expressions and object definitions."""
    raise TypeError(f"subst: unsupported node {type(subject).__name__}")


@subst.register
def _(subject: Top, x: str, p: Path):
    return subject


@subst.register
def _(subject: Bottom, x: str, p: Path):
    return subject


@subst.register
def _(subject: Refined, x: str, p: Path):
    base = subject.base
    if isinstance(base, PathSel):
        base = PathSel(subst_path_in_path(base.path, x, p), base.label)
    return Refined(base, subst(subject.refinement, x, p))


@subst.register
def _(subject: Refinement, x: str, p: Path):
    if not subject.members:
        return subject
    return Refinement(tuple(RefinementMember(m.label, m.bound, subst(m.ty, x, p)) for m in subject.members))


@subst.register
def _(subject: Var, x: str, p: Path):
    return subst_path_in_path(subject, x, p)


@subst.register
def _(subject: Loc, x: str, p: Path):
    return subject


@subst.register
def _(subject: TypeMemberDecl, x: str, p: Path):
    return TypeMemberDecl(subject.label, subject.bound, subst(subject.ty, x, p), subject.mark, span=subject.span)


@subst.register
def _(subject: FieldDecl, x: str, p: Path):
    return FieldDecl(subject.label, subst(subject.ty, x, p), span=subject.span)


@subst.register
def _(subject: MethodDecl, x: str, p: Path):
    param_ty = subst(subject.param_ty, x, p)
    if subject.param == x:
        return MethodDecl(subject.label, subject.param, param_ty, subject.result_ty, span=subject.span)
    param = _binder(subject.param, x, p, free_vars(subject.result_ty))
    result_ty = subject.result_ty
    if param != subject.param:
        result_ty = subst(result_ty, subject.param, Var(param))
    return MethodDecl(subject.label, param, param_ty, subst(result_ty, x, p), span=subject.span)


@subst.register
def _(subject: MultiMethodDecl, x: str, p: Path):
    params, result_ty = _subst_params(subject.params, (subject.result_ty,), x, p)
    return MultiMethodDecl(subject.label, params, result_ty[0], span=subject.span)


def _subst_params(params: tuple[Param, ...], scoped: tuple, x: str, p: Path):
    new_params = [Param(param.name, subst(param.ty, x, p)) for param in params]
    scoped = list(scoped)
    if any(param.name == x for param in params):
        return tuple(new_params), tuple(scoped)
    inner: set[str] = set()
    for s in scoped:
        inner |= free_vars(s)
    renamed = []
    for param in new_params:
        name = _binder(param.name, x, p, inner)
        if name != param.name:
            scoped = [subst(s, param.name, Var(name)) for s in scoped]
        renamed.append(Param(name, param.ty))
    return tuple(renamed), tuple(subst(s, x, p) for s in scoped)


@subst.register
def _(subject: Compound, x: str, p: Path):
    return Compound(subst(subject.expr, x, p), span=subject.span)


@subst.register
def _(subject: PathE, x: str, p: Path):
    return PathE(subst_path_in_path(subject.path, x, p), span=subject.span)


@subst.register
def _(subject: FieldSel, x: str, p: Path):
    return FieldSel(subst(subject.target, x, p), subject.label, span=subject.span)


@subst.register
def _(subject: MethodApp, x: str, p: Path):
    return MethodApp(subst(subject.target, x, p), subject.method, subst(subject.arg, x, p), span=subject.span)


@subst.register
def _(subject: MultiMethodApp, x: str, p: Path):
    return MultiMethodApp(
        subst(subject.target, x, p), subject.method, tuple(subst(a, x, p) for a in subject.args),
        span=subject.span,
    )


@subst.register
def _(subject: New, x: str, p: Path):
    ty = subst(subject.ty, x, p)
    if subject.self_var == x:
        return New(ty, subject.self_var, subject.defs, span=subject.span)
    inner: set[str] = set()
    for d in subject.defs:
        inner |= free_vars(d)
    self_var = _binder(subject.self_var, x, p, inner)
    defs = subject.defs
    if self_var != subject.self_var:
        defs = tuple(subst(d, subject.self_var, Var(self_var)) for d in defs)
    return New(ty, self_var, tuple(subst(d, x, p) for d in defs), span=subject.span)


@subst.register
def _(subject: Let, x: str, p: Path):
    ascription = None if subject.ascription is None else subst(subject.ascription, x, p)
    bound = subst(subject.bound, x, p)
    if subject.var == x:
        return Let(subject.var, ascription, bound, subject.body, span=subject.span)
    var = _binder(subject.var, x, p, free_vars(subject.body))
    body = subject.body
    if var != subject.var:
        body = subst(body, subject.var, Var(var))
    return Let(var, ascription, bound, subst(body, x, p), span=subject.span)


@subst.register
def _(subject: TypeMemberDefn, x: str, p: Path):
    return TypeMemberDefn(subject.label, subst(subject.ty, x, p), span=subject.span)


@subst.register
def _(subject: FieldDefn, x: str, p: Path):
    return FieldDefn(subject.label, subst(subject.ty, x, p), subst(subject.value, x, p), span=subject.span)


@subst.register
def _(subject: MethodDefn, x: str, p: Path):
    param_ty = subst(subject.param_ty, x, p)
    if subject.param == x:
        return MethodDefn(subject.label, subject.param, param_ty, subject.result_ty, subject.body, span=subject.span)
    param = _binder(subject.param, x, p, free_vars(subject.result_ty) | free_vars(subject.body))
    result_ty, body = subject.result_ty, subject.body
    if param != subject.param:
        result_ty = subst(result_ty, subject.param, Var(param))
        body = subst(body, subject.param, Var(param))
    return MethodDefn(subject.label, param, param_ty, subst(result_ty, x, p), subst(body, x, p), span=subject.span)


@subst.register
def _(subject: MultiMethodDefn, x: str, p: Path):
    params, (result_ty, body) = _subst_params(subject.params, (subject.result_ty, subject.body), x, p)
    return MultiMethodDefn(subject.label, params, result_ty, body, span=subject.span)


def subst_path(subject, x: str, p: Path):
    """Replaces free occurrences of `x` as a path root by `p`; the identity when x is not free."""
    if isinstance(p, Var) and p.name == x:
        return subject
    if x not in free_vars(subject):
        return subject
    return subst(subject, x, p)


def rename_var(subject, old: str, new: str):
    return subst_path(subject, old, Var(new))


def type_names(ty: Type) -> list[str]:
    """Every type name mentioned in `ty`, outermost first, at any refinement depth."""
    out: list[str] = []
    if isinstance(ty, Refined):
        if isinstance(ty.base, Named):
            out.append(ty.base.name)
        for m in ty.refinement:
            out.extend(type_names(m.ty))
    return out
