"""The runtime store: an append-only sequence of allocated objects."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from syntax.ast import Loc, ObjMemberDefn, StoreEnv, Type


@dataclass(frozen=True)
class HeapEntry:
    self_var: str
    defs: tuple[ObjMemberDefn, ...]
    ty: Type

    def member(self, label: str) -> Optional[ObjMemberDefn]:
        for d in self.defs:
            if d.label == label:
                return d
        return None

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(d.label for d in self.defs)


@dataclass(frozen=True)
class Heap:
    """Locations are allocated sequentially from zero, so the entry at index i lives at #i."""
    entries: tuple[HeapEntry, ...] = ()

    def alloc(self, entry: HeapEntry) -> tuple["Heap", Loc]:
        return Heap(self.entries + (entry,)), Loc(len(self.entries))

    def get(self, loc: Loc) -> Optional[HeapEntry]:
        if 0 <= loc.id < len(self.entries):
            return self.entries[loc.id]
        return None

    def extends(self, other: "Heap") -> bool:
        """True when `other` is a prefix of this heap."""
        return self.entries[:len(other.entries)] == other.entries

    def store_typing(self) -> StoreEnv:
        """The location typing recorded at allocation time."""
        store = StoreEnv()
        for index, entry in enumerate(self.entries):
            store = store.extend(index, entry.ty)
        return store

    def __iter__(self) -> Iterator[tuple[Loc, HeapEntry]]:
        return ((Loc(i), e) for i, e in enumerate(self.entries))

    def __len__(self) -> int:
        return len(self.entries)


EMPTY_HEAP = Heap()
