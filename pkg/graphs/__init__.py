"""Nominal subtyping graph, subtype dependency graph, separation checks and measures."""
