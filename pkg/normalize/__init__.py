"""Lookup, exposure, casts, the bound algebra and avoidance over a typing context."""
