"""
The typing context shared by every judgment: named definitions, declared subtype
edges, variable typing and location typing.
"""
from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass, field, replace
from typing import Optional

from config import Config
from normalize.errors import UnboundPath
from syntax.ast import (
    DefTable, Loc, NameDef, Path, ShapeMark, StoreEnv, SubtypeTable, Type, Var, VarEnv,
)


class Memo(OrderedDict):
    """Least-recently-used cache of normalization results, capped at `limit` entries."""

    def __init__(self, limit: int = Config.MEMO_LIMIT):
        super().__init__()
        self.limit = limit

    def __getitem__(self, key):
        value = super().__getitem__(key)
        self.move_to_end(key)
        return value

    def __setitem__(self, key, value):
        super().__setitem__(key, value)
        self.move_to_end(key)
        while len(self) > self.limit:
            self.popitem(last=False)


@dataclass(frozen=True)
class Ctx:
    delta: DefTable
    sigma: SubtypeTable = ()
    gamma: VarEnv = VarEnv()
    store: StoreEnv = StoreEnv()
    # Shared by every context derived from this one; keys include Γ and S.
    memo: Memo = field(default_factory=Memo, compare=False, repr=False)

    def push(self, name: str, ty: Type) -> "Ctx":
        return replace(self, gamma=self.gamma.push(name, ty))

    def with_gamma(self, gamma: VarEnv) -> "Ctx":
        return replace(self, gamma=gamma)

    def definition(self, name: str) -> Optional[NameDef]:
        return self.delta.get(name)

    def is_shape(self, name: str) -> bool:
        definition = self.delta.get(name)
        return definition is not None and definition.mark is ShapeMark.SHAPE

    def bound_names(self) -> set[str]:
        return set(self.gamma.names())


def type_path(ctx: Ctx, path: Path) -> Type:
    """T-Var / T-Loc: the recorded type of a variable or location, verbatim."""
    if isinstance(path, Var):
        ty = ctx.gamma.lookup(path.name)
    elif isinstance(path, Loc):
        ty = ctx.store.lookup(path.id)
    else:
        ty = None
    if ty is None:
        raise UnboundPath(path)
    return ty
