"""Big-step evaluation over an append-only heap."""
