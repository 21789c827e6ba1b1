"""Exposure read directly off its judgment form: upcast until nothing changes."""
from __future__ import annotations

from normalize.context import Ctx
from normalize.exposure import upcast
from syntax.ast import PathSel, Refined, Type


def expose_judgment(ctx: Ctx, ty: Type, limit: int = 256) -> Type:
    current = ty
    for _ in range(limit):
        if not isinstance(current, Refined) or not isinstance(current.base, PathSel):
            return current
        raised = upcast(ctx, current)
        if raised == current:
            return current
        current = raised
    return current
