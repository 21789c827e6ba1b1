"""Independent checkers and random program generation for the test suites and the fuzz command."""
