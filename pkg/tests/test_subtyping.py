import logging

import pytest

from subtyping.engine import StepCeilingExceeded, SubtypeEngine, decl_list_subtype, is_subtype, member_subtype
from subtyping.expansion import check, checker, depth, expand, expand1
from syntax.ast import (
    BOTTOM, TOP, Bound, FieldDecl, MethodDecl, Named, PathSel, Refined, Refinement, RefinementMember, Var, named,
    path_type,
)

UNIT_MAIN = "\nnew Top { u => }\n"
INT = named("Int")
INT_LIST = named("IntList")
LIST_OF_INT = named("List", Refinement((RefinementMember("T", Bound.EQ, INT),)))

EDGES = """
name Int { i => }
name A { a => type T <= Top }
name B { b => type T <= Top }
name C { c => type T <= Top }
subtype A <: B
subtype C { type T = Int } <: B
""" + UNIT_MAIN

# Mutually recursive upper bounds; only useful for exercising cycle cuts.
MUTUAL = """
name Int { i => }
name M { m => type T <= m.U  type U <= m.T }
""" + UNIT_MAIN


@pytest.fixture
def list_ctx(corpus, ctx_of):
    return ctx_of(corpus("int_list.nwyv").text)


def refined(name, label, bound, ty):
    return named(name, Refinement((RefinementMember(label, bound, ty),)))


def trace_size(nodes):
    return sum(1 + trace_size(n.children) for n in nodes)


# --- structural rules ---

def test_top_and_bottom(list_ctx):
    assert is_subtype(list_ctx, BOTTOM, INT)[0]
    assert is_subtype(list_ctx, INT, TOP)[0]
    assert not is_subtype(list_ctx, TOP, INT)[0]
    assert not is_subtype(list_ctx, INT, BOTTOM)[0]


def test_declared_edge(list_ctx):
    assert is_subtype(list_ctx, INT_LIST, named("List"))[0]
    assert not is_subtype(list_ctx, named("List"), INT_LIST)[0]


def test_refinement_members(list_ctx):
    """Exact members need both directions; upper bounds are covariant."""
    assert is_subtype(list_ctx, LIST_OF_INT, refined("List", "T", Bound.LE, TOP))[0]
    assert not is_subtype(list_ctx, refined("List", "T", Bound.LE, INT), LIST_OF_INT)[0]
    assert is_subtype(list_ctx, refined("List", "T", Bound.GE, TOP), refined("List", "T", Bound.GE, INT))[0]


def test_name_up_carries_refinement(ctx_of):
    ctx = ctx_of(EDGES)
    assert is_subtype(ctx, refined("A", "T", Bound.EQ, INT), refined("B", "T", Bound.EQ, INT))[0]
    assert not is_subtype(ctx, named("A"), refined("B", "T", Bound.EQ, INT))[0]


def test_conditional_edge(ctx_of):
    """An edge with a condition only applies when the left refinement meets it."""
    ctx = ctx_of(EDGES)
    assert not is_subtype(ctx, named("C"), named("B"))[0]
    assert is_subtype(ctx, refined("C", "T", Bound.EQ, INT), named("B"))[0]


def test_path_rules(corpus, ctx_of):
    """S-Lower raises the left path, S-Upper lowers the right one."""
    ctx = ctx_of(corpus("fruit_set.nwyv").text)
    exact = ctx.push("x", refined("Set", "ElemT", Bound.EQ, named("Fruit")))
    elem = path_type(Var("x"), "ElemT")
    assert is_subtype(exact, elem, named("Fruit"))[0]
    assert is_subtype(exact, named("Fruit"), elem)[0]

    bounded = ctx.push("x", named("Set"))
    assert is_subtype(bounded, elem, named("Equatable"))[0]
    assert not is_subtype(bounded, named("Fruit"), elem)[0]


def test_trace_records_rules(list_ctx):
    holds, trace = is_subtype(list_ctx, INT_LIST, named("List"), trace=True)
    assert holds
    assert trace.roots[0].rule == "S-NameUp"
    assert trace.roots[0].children[0].rule == "S-Refine"
    assert trace.render().splitlines()[0] == "S-NameUp  IntList <: List  [ok]"
    assert trace_size(trace.roots) == trace.steps


def test_cycles_are_cut(ctx_of):
    """A goal that recurs on its own derivation path fails instead of looping."""
    ctx = ctx_of(MUTUAL).push("x", named("M"))
    engine = SubtypeEngine()
    assert not engine.subtype(ctx, path_type(Var("x"), "T"), INT)
    assert engine.cuts >= 1


def test_step_ceiling(list_ctx):
    engine = SubtypeEngine(ceiling=1)
    with pytest.raises(StepCeilingExceeded):
        engine.subtype(list_ctx, INT_LIST, named("List"))


# --- member lists ---

def test_member_subtype(list_ctx):
    assert member_subtype(list_ctx, RefinementMember("T", Bound.EQ, BOTTOM), RefinementMember("T", Bound.LE, TOP))
    assert not member_subtype(list_ctx, RefinementMember("T", Bound.LE, BOTTOM),
                              RefinementMember("T", Bound.EQ, BOTTOM))


def test_decl_lists(list_ctx):
    """Methods are contravariant in the parameter and covariant in the result."""
    narrow = MethodDecl("m", "a", TOP, INT)
    wide = MethodDecl("m", "b", INT, TOP)
    assert decl_list_subtype(list_ctx, [narrow], [wide]) is None
    assert decl_list_subtype(list_ctx, [wide], [narrow]) == "m"
    assert decl_list_subtype(list_ctx, [FieldDecl("f", INT)], [FieldDecl("f", TOP)]) is None
    assert decl_list_subtype(list_ctx, [], [FieldDecl("f", TOP)]) == "f"


# --- expansion ---

def test_depth():
    assert depth(INT) == 0
    assert depth(LIST_OF_INT) == 1
    assert depth(refined("List", "T", Bound.EQ, LIST_OF_INT)) == 2


def test_expand1_unfolds_definitions(list_ctx):
    assert expand1(list_ctx, Named("IntList")) == refined("IntList", "T", Bound.EQ, INT)
    assert expand1(list_ctx, Named("List")) == refined("List", "T", Bound.LE, TOP)
    base = PathSel(Var("x"), "T")
    assert expand1(list_ctx, base) == Refined(base)


def test_expand_keeps_explicit_refinements(list_ctx):
    assert expand(list_ctx, LIST_OF_INT, 1) == LIST_OF_INT
    assert expand(list_ctx, INT_LIST, 0) == INT_LIST


def test_expansion_sees_through_declared_edges(list_ctx):
    """IntList fixes T = Int, which only shows once IntList is expanded."""
    assert check(list_ctx, INT_LIST, LIST_OF_INT)[0]
    assert not check(list_ctx, INT_LIST, LIST_OF_INT, use_expansion=False)[0]
    assert checker()(list_ctx, INT_LIST, LIST_OF_INT)
    assert not checker(False)(list_ctx, INT_LIST, LIST_OF_INT)


def test_expand1_skips_members_it_cannot_avoid(corpus, ctx_of, caplog):
    ctx = ctx_of(corpus("loop.nwyv").text)
    with caplog.at_level(logging.INFO):
        assert expand1(ctx, Named("Loop")) == named("Loop")
    assert "Loop::T unexpanded" in caplog.text
