import json
import os

import pytest
from click.testing import CliRunner

from cli.commands import cli
from config import Config


@pytest.fixture
def runner():
    return CliRunner()


def corpus_path(name):
    return os.path.join(Config.CORPUS_DIR, name)


def invoke(runner, *args):
    return runner.invoke(cli, list(args), prog_name="nomwyv")


# --- check ---

def test_check_prints_main_type(runner):
    result = invoke(runner, "check", corpus_path("fruit_set.nwyv"))
    assert result.exit_code == 0
    assert "main : Set { type ElemT = Fruit }" in result.stdout


def test_check_reports_asserts(runner):
    result = invoke(runner, "check", corpus_path("int_list.nwyv"))
    assert result.exit_code == 0
    assert "assert IntList <: List { type T = Int } ... ok" in result.stdout


def test_check_without_expansion_fails_the_assert(runner):
    result = invoke(runner, "check", corpus_path("int_list.nwyv"), "--no-expand")
    assert result.exit_code == 5
    assert "FAILED" in result.stdout
    assert "error[A0001]" in result.stdout


def test_check_type_error(runner):
    result = invoke(runner, "check", corpus_path("bank.nwyv"))
    assert result.exit_code == 1
    assert "error[E0003]" in result.stdout
    assert "expected: pnc.Card" in result.stdout


def test_check_separation_error(runner):
    result = invoke(runner, "check", corpus_path("fruit_set_material.nwyv"))
    assert result.exit_code == 2
    assert "error[S0004]" in result.stdout


def test_check_needs_prelude_for_set_objects(runner):
    """The prelude flag takes an optional path, so it goes after the file."""
    without = invoke(runner, "check", corpus_path("set_objects.nwyv"))
    assert without.exit_code == 3
    assert "error[P0008]" in without.stdout

    result = invoke(runner, "check", corpus_path("set_objects.nwyv"), "--prelude")
    assert result.exit_code == 0
    assert "main : ISet" in result.stdout


def test_check_json(runner):
    result = invoke(runner, "check", corpus_path("bank.nwyv"), "--format", "json")
    data = json.loads(result.stdout)
    assert data["exit_code"] == 1
    (diag,) = data["diagnostics"]
    assert diag["code"] == "E0003"
    assert diag["actual"] == "chase.Card"
    assert data["main_type"] is None


def test_check_directory(runner):
    """Each file gets a header; the exit code is the worst over all files."""
    result = invoke(runner, "check", Config.CORPUS_DIR)
    assert result.exit_code == 3
    assert result.stdout.count("== ") == 8


def test_check_directory_json(runner):
    result = invoke(runner, "check", Config.CORPUS_DIR, "--format", "json")
    data = json.loads(result.stdout)
    assert isinstance(data, list)
    assert len(data) == 8
    by_file = {os.path.basename(d["file"]): d["exit_code"] for d in data}
    assert by_file["fruit_set.nwyv"] == 0
    assert by_file["loop.nwyv"] == 1
    assert by_file["prelude.nwyv"] == 3


def test_trace_notes(runner):
    result = invoke(runner, "check", corpus_path("int_list.nwyv"), "--no-expand", "--trace")
    assert result.exit_code == 5
    assert "[fail]" in result.stdout


# --- subtype ---

def test_subtype_holds(runner):
    result = invoke(runner, "subtype", corpus_path("int_list.nwyv"), "--lhs", "IntList", "--rhs", "List")
    assert result.exit_code == 0
    assert "IntList <: List : true" in result.stdout


def test_subtype_does_not_hold(runner):
    result = invoke(runner, "subtype", corpus_path("int_list.nwyv"), "--lhs", "List", "--rhs", "IntList")
    assert result.exit_code == 5
    assert ": false" in result.stdout


def test_subtype_unknown_name(runner):
    result = invoke(runner, "subtype", corpus_path("int_list.nwyv"), "--lhs", "IntList", "--rhs", "Vector")
    assert result.exit_code == 3
    assert "error[P0008]" in result.stdout


def test_subtype_json(runner):
    result = invoke(runner, "subtype", corpus_path("int_list.nwyv"), "--lhs", "IntList",
                    "--rhs", "List { type T = Int }", "--format", "json")
    data = json.loads(result.stdout)
    assert data["query"]["holds"] is True
    assert data["query"]["rhs"] == "List { type T = Int }"


def test_subtype_explain(runner):
    result = invoke(runner, "subtype", corpus_path("fruit_set.nwyv"), "--lhs", "Fruit", "--rhs", "Equatable", "--explain")
    assert result.exit_code == 0
    assert "energy(lhs) = 1" in result.stdout
    assert "E(Equatable) = 2" in result.stdout


# --- run ---

def test_run_requires_a_fuel_choice(runner):
    result = invoke(runner, "run", corpus_path("clone.nwyv"))
    assert result.exit_code == 2
    result = invoke(runner, "run", corpus_path("clone.nwyv"), "--fuel", "5", "--no-fuel")
    assert result.exit_code == 2


def test_run_without_fuel(runner):
    result = invoke(runner, "run", corpus_path("clone.nwyv"), "--no-fuel")
    assert result.exit_code == 0
    assert "result : #1 : String { type t = String }" in result.stdout
    assert "members : t, clone" in result.stdout
    assert "heap : 3 object(s)" in result.stdout


def test_run_out_of_fuel(runner):
    result = invoke(runner, "run", corpus_path("clone.nwyv"), "--fuel", "2")
    assert result.exit_code == 4
    assert "error[R0001]" in result.stdout


def test_run_json(runner):
    result = invoke(runner, "run", corpus_path("clone.nwyv"), "--fuel", "64", "--format", "json")
    data = json.loads(result.stdout)
    assert data["result"] == "#1"
    assert data["heap_size"] == 3
    assert data["members"] == ["t", "clone"]


# --- graph ---

def test_graph_sdg(runner):
    result = invoke(runner, "graph", corpus_path("fruit_set.nwyv"))
    assert result.exit_code == 0
    assert result.stdout.startswith("digraph sdg {")


def test_graph_does_not_need_separation(runner):
    result = invoke(runner, "graph", corpus_path("fruit_set_material.nwyv"), "--partition")
    assert result.exit_code == 0
    assert "subgraph cluster_" in result.stdout


def test_graph_nominal(runner):
    result = invoke(runner, "graph", corpus_path("fruit_set.nwyv"), "--kind", "nominal")
    assert '"Fruit" -> "Equatable";' in result.stdout


def test_graph_parse_error(runner):
    result = invoke(runner, "graph", corpus_path("set_objects.nwyv"))
    assert result.exit_code == 3


# --- fuzz ---

def test_fuzz_summary(runner):
    result = invoke(runner, "fuzz", "--seed", "0", "--cases", "2", "--queries", "2")
    assert "cases: 2  queries: 4" in result.stdout
    assert result.exit_code in (0, 1)
