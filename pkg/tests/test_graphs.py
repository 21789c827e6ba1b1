import pytest

from frontend.parser import parse_program
from graphs.dot_export import nominal_to_dot, sdg_to_dot
from graphs.measures import DivergentMeasure, compute_measures
from graphs.nominal import build_nominal_graph
from graphs.sdg import NameNode, PseudoNode, build_sdg, is_shape_labeled, partition_sdg
from graphs.separation import ViolationKind, check_shape_validity, check_syntactic_separation
from normalize.context import Ctx
from subtyping.energy import mentioned_nodes, type_energy
from syntax.ast import Bound, Named, Refinement, RefinementMember, Var, named, path_type
from typecheck.checker import build_contexts

UNIT_MAIN = "\nnew Top { u => }\n"


def load(corpus, name):
    program = parse_program(corpus(name)).program
    delta, sigma = build_contexts(program)
    return program, delta, sigma


def edge_pairs(graph):
    return {(str(e.source), str(e.target)) for e in graph.edges}


# --- subtype dependency graph ---

def test_fruit_set_graph_edges(corpus):
    """Only type members and subtype declarations contribute edges."""
    _, delta, sigma = load(corpus, "fruit_set.nwyv")
    graph = build_sdg(delta, sigma)
    assert len(graph.edges) == 4
    assert edge_pairs(graph) == {
        ("Fruit::EqT", "Fruit"),
        ("Set::ElemT", "Equatable"),
        ("Set::ElemT", "Set::ElemT"),
        ("Equatable", "Fruit"),
    }


def test_self_edge_is_labeled_by_the_enclosing_shape(corpus):
    _, delta, sigma = load(corpus, "fruit_set.nwyv")
    graph = build_sdg(delta, sigma)
    loop = next(e for e in graph.edges if e.source == e.target)
    assert loop.label == (Named("Equatable"),)
    assert loop.variance is Bound.LE
    assert is_shape_labeled(delta, loop)

    _, material_delta, _ = load(corpus, "fruit_set_material.nwyv")
    assert not is_shape_labeled(material_delta, loop)


def test_top_and_bot_contribute_no_edges(ctx_of):
    ctx = ctx_of("name A { a => type T <= Top  type U >= Bot }" + UNIT_MAIN)
    graph = build_sdg(ctx.delta, ctx.sigma)
    assert graph.edges == ()
    assert PseudoNode("A", "T") in graph.nodes


def test_subtype_condition_names_get_edges(ctx_of):
    """A declaration's refinement condition makes the supertype depend on the names it mentions."""
    ctx = ctx_of("name C { c => }\nname B { b => type T <= Top }\nname A { a => type T <= Top }\n"
                 "subtype A { type T = C } <: B" + UNIT_MAIN)
    graph = build_sdg(ctx.delta, ctx.sigma)
    assert edge_pairs(graph) == {("B", "A"), ("B", "C")}


def test_partitions(corpus):
    """One partition per name, then the name-to-name partition."""
    _, delta, sigma = load(corpus, "fruit_set.nwyv")
    parts = partition_sdg(build_sdg(delta, sigma))
    assert [p.name for p in parts] == ["Bool", "Int", "Float", "Equatable", "Fruit", "Set", "names"]
    assert edge_pairs(parts[-1]) == {("Equatable", "Fruit")}
    set_part = parts[5]
    assert NameNode("Equatable") in set_part.nodes


# --- separation ---

def test_shape_guarded_program_is_valid(corpus):
    program, delta, sigma = load(corpus, "fruit_set.nwyv")
    assert check_syntactic_separation(program, delta, sigma).ok
    assert check_shape_validity(build_sdg(delta, sigma), delta).ok


def test_material_cycle_is_rejected(corpus):
    _, delta, sigma = load(corpus, "fruit_set_material.nwyv")
    report = check_shape_validity(build_sdg(delta, sigma), delta)
    (violation,) = report.violations
    assert violation.kind is ViolationKind.UNGUARDED_CYCLE
    assert violation.location == "Set"
    assert "Set::ElemT -> Set::ElemT" in violation.message
    assert violation.cycle == (PseudoNode("Set", "ElemT"),)


def syntactic_kinds(ctx_of, program_of, text):
    program = program_of(text)
    ctx = ctx_of(text)
    return [v.kind for v in check_syntactic_separation(program, ctx.delta, ctx.sigma).violations]


def test_shape_in_lower_bound(ctx_of, program_of):
    text = "@shape name S { s => }\nname A { a => type T >= S }" + UNIT_MAIN
    assert syntactic_kinds(ctx_of, program_of, text) == [ViolationKind.SHAPE_IN_LOWER_BOUND]


def test_shape_cannot_subtype_material(ctx_of, program_of):
    text = "@shape name S { s => }\nname M { m => }\nsubtype S <: M" + UNIT_MAIN
    assert syntactic_kinds(ctx_of, program_of, text) == [ViolationKind.SHAPE_UPPER_NOT_SHAPE]


def test_shape_member_needs_shape_upper_bound(ctx_of, program_of):
    text = "name M { m => }\nname A { a => @shape type T <= M }" + UNIT_MAIN
    assert syntactic_kinds(ctx_of, program_of, text) == [ViolationKind.SHAPE_UPPER_NOT_SHAPE]


def test_shape_refined_inside_refinement(ctx_of, program_of):
    text = ("@shape name S { s => type U <= Top }\nname B { b => type T <= Top }\n"
            "name A { a => type X <= B { type T <= S { type U <= Top } } }" + UNIT_MAIN)
    assert syntactic_kinds(ctx_of, program_of, text) == [ViolationKind.SHAPE_REFINED_IN_REFINEMENT]


# --- measures and energy ---

def test_fruit_set_measures(corpus):
    _, delta, sigma = load(corpus, "fruit_set.nwyv")
    table = compute_measures(delta, sigma, build_sdg(delta, sigma))
    assert table.e[NameNode("Fruit")] == 1
    assert table.e[NameNode("Equatable")] == 2
    assert table.m[PseudoNode("Set", "ElemT")] == 1
    assert table.a[PseudoNode("Set", "ElemT")] == 3
    assert table.a[PseudoNode("Equatable", "EqT")] == 1
    assert ("E", "Equatable", 2) in table.rows()


def test_measures_diverge_without_shapes(corpus):
    _, delta, sigma = load(corpus, "fruit_set_material.nwyv")
    with pytest.raises(DivergentMeasure):
        compute_measures(delta, sigma, build_sdg(delta, sigma))


def test_type_energy(corpus):
    _, delta, sigma = load(corpus, "fruit_set.nwyv")
    table = compute_measures(delta, sigma, build_sdg(delta, sigma))
    ctx = Ctx(delta, sigma).push("s", named("Set"))
    assert type_energy(ctx, table, named("Set")) == 1
    refined = named("Set", Refinement((RefinementMember("ElemT", Bound.EQ, named("Fruit")),)))
    assert type_energy(ctx, table, refined) == 2
    # E(Set) * M(Set::ElemT) + A(Set::ElemT)
    assert type_energy(ctx, table, path_type(Var("s"), "ElemT")) == 4
    assert mentioned_nodes(ctx, path_type(Var("s"), "ElemT")) == [NameNode("Set"), PseudoNode("Set", "ElemT")]


# --- nominal graph and DOT ---

def test_nominal_graph(corpus):
    _, delta, sigma = load(corpus, "fruit_set.nwyv")
    graph = build_nominal_graph(delta, sigma)
    (edge,) = graph.edges
    assert (edge.source, edge.target) == ("Fruit", "Equatable")
    assert graph.to_networkx().has_edge("Fruit", "Equatable")
    assert not graph.to_networkx().out_degree("Set")


def test_dot_export(corpus):
    """Shape-labeled edges are dashed; partitions become clusters."""
    _, delta, sigma = load(corpus, "fruit_set.nwyv")
    sdg = build_sdg(delta, sigma)
    dot = sdg_to_dot(sdg, delta)
    assert dot.startswith("digraph sdg {")
    assert '"Set::ElemT" -> "Set::ElemT" [label="Equatable", style=dashed];' in dot
    assert '"Fruit::EqT" -> "Fruit";' in dot
    clustered = sdg_to_dot(sdg, delta, partition=True)
    assert "subgraph cluster_" in clustered
    assert 'label="names";' in clustered
    assert '"Fruit" -> "Equatable";' in nominal_to_dot(build_nominal_graph(delta, sigma))
