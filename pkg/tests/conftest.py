import os
import sys

import pytest

# Add the parent directory to the Python path so modules can be imported
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from config import Config
from frontend.diagnostics import SourceFile
from frontend.parser import parse_source
from normalize.context import Ctx
from services.pipeline import Pipeline
from typecheck.checker import build_contexts


@pytest.fixture(scope="module")
def pipeline():
    """One default pipeline (expansion on, no prelude) per test module."""
    return Pipeline()


@pytest.fixture
def corpus():
    """Returns a loader for the bundled example programs."""
    def load(name: str) -> SourceFile:
        return SourceFile.read(os.path.join(Config.CORPUS_DIR, name))
    return load


@pytest.fixture
def program_of():
    """Parses program text that is expected to be well-formed."""
    def parse(text: str):
        parsed = parse_source(text)
        assert parsed.ok, [d.render() for d in parsed.diagnostics]
        return parsed.program
    return parse


@pytest.fixture
def ctx_of(program_of):
    """Builds a typing context from the declarations of a program text."""
    def build(text: str) -> Ctx:
        delta, sigma = build_contexts(program_of(text))
        return Ctx(delta, sigma)
    return build
