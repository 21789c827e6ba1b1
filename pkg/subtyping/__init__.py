"""Algorithmic subtyping, expansion and energy diagnostics."""
