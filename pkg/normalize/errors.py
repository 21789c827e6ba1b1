"""Failures raised by lookup, exposure, the bound algebra and avoidance."""
from __future__ import annotations


class NormalizeError(Exception):
    """Base class for every normalization failure."""


class UnboundPath(NormalizeError):
    def __init__(self, path):
        self.path = path
        super().__init__(f"unbound path '{path}'")


class NoSuchMember(NormalizeError):
    def __init__(self, owner: str, label: str):
        self.owner = owner
        self.label = label
        super().__init__(f"'{owner}' has no member '{label}'")


class LookupOnPathBase(NormalizeError):
    """Raised when a lookup reaches a p.t base that the caller should have exposed first."""

    def __init__(self, rendered: str, label: str):
        self.rendered = rendered
        self.label = label
        super().__init__(f"cannot look up '{label}' on unexposed type '{rendered}'")


class IncompatibleBounds(NormalizeError):
    def __init__(self, left, right):
        self.left = left
        self.right = right
        super().__init__(f"bounds '{left.value}' and '{right.value}' have no join")


class AvoidFailed(NormalizeError):
    def __init__(self, var: str, rendered: str, reason: str):
        self.var = var
        self.rendered = rendered
        self.reason = reason
        super().__init__(f"cannot avoid '{var}' in '{rendered}': {reason}")


class FuelExhausted(AvoidFailed):
    def __init__(self, var: str, rendered: str):
        super().__init__(var, rendered, "unfolding ran out of fuel")
