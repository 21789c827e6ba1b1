"""Abstract syntax, contexts, substitution, merge operators and pretty-printing."""
