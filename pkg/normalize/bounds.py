"""Join and product of type-member bounds."""
from __future__ import annotations

from normalize.errors import IncompatibleBounds
from syntax.ast import Bound

EQ, LE, GE = Bound.EQ, Bound.LE, Bound.GE

# Join is partial: (<=, >=) and (>=, <=) have no entry.
_JOIN = {
    (EQ, EQ): EQ, (EQ, LE): LE, (EQ, GE): GE,
    (LE, EQ): LE, (GE, EQ): GE,
    (LE, LE): LE, (GE, GE): GE,
}

# Equality absorbs from the left and <= is a right identity; >= flips direction.
_PRODUCT = {
    (EQ, EQ): EQ, (EQ, LE): EQ, (EQ, GE): EQ,
    (LE, EQ): LE, (GE, EQ): GE,
    (LE, LE): LE, (GE, GE): LE,
    (LE, GE): GE, (GE, LE): GE,
}


def bound_join(left: Bound, right: Bound) -> Bound:
    try:
        return _JOIN[(left, right)]
    except KeyError:
        raise IncompatibleBounds(left, right) from None


def bound_product(left: Bound, right: Bound) -> Bound:
    return _PRODUCT[(left, right)]


def satisfies(achieved: Bound, wanted: Bound) -> bool:
    """An exact result serves any request; otherwise the direction must match."""
    return achieved is EQ or achieved is wanted
