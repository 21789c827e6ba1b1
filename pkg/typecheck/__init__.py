"""Term typing and whole-program checks."""
