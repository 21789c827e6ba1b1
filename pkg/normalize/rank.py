"""Ranks of variables, paths and types, and environment well-formedness."""
from __future__ import annotations

from normalize.errors import UnboundPath
from syntax.ast import Loc, PathSel, Refined, Type, Var, VarEnv
from syntax.subst import free_vars


def var_rank(gamma: VarEnv, name: str) -> int:
    """1-based position of the variable; the leftmost binding has rank one."""
    for position, bound in enumerate(gamma.names(), start=1):
        if bound == name:
            return position
    raise UnboundPath(Var(name))


def rank(gamma: VarEnv, subject) -> int:
    """Maximum rank over the free variables of a variable, path or type; zero when closed."""
    if isinstance(subject, str):
        return var_rank(gamma, subject)
    if isinstance(subject, Loc):
        return 0
    return max((var_rank(gamma, name) for name in free_vars(subject)), default=0)


def head_rank(gamma: VarEnv, ty: Type) -> int:
    """Rank of the outermost constructor: the path's rank for p.t, zero otherwise."""
    if isinstance(ty, Refined) and isinstance(ty.base, PathSel):
        return rank(gamma, ty.base.path)
    return 0


def env_well_formed(gamma: VarEnv) -> bool:
    """Names are distinct and every entry mentions only the variables before it."""
    names = gamma.names()
    if len(set(names)) != len(names):
        return False
    for position, (_, ty) in enumerate(gamma.entries, start=1):
        try:
            if rank(VarEnv(gamma.entries[:position - 1]), ty) >= position:
                return False
        except UnboundPath:
            return False
    return True
