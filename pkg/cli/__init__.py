"""Command-line surface of the toolchain."""
from cli.commands import cli

__all__ = ["cli"]
