"""Property suites over generated programs and the small algebraic pieces."""
import os
import random

from hypothesis import given, settings
from hypothesis import strategies as st

from config import Config
from frontend.diagnostics import SourceFile
from frontend.parser import parse_program
from graphs.sdg import build_sdg
from graphs.separation import check_shape_validity, check_syntactic_separation
from interpreter.evaluator import eval_big, eval_fuel
from interpreter.heap import EMPTY_HEAP, HeapEntry
from normalize.avoidance import avoid
from normalize.bounds import EQ, GE, LE, bound_product, satisfies
from normalize.context import Ctx
from normalize.errors import NormalizeError
from normalize.exposure import expose, expose_with_steps, upcast
from oracle.generator import GenConfig, TypeGen, definitions, gen_program, query_env
from oracle.judgments import expose_judgment
from subtyping.engine import is_subtype
from syntax.ast import BOTTOM, TOP, Refinement, RefinementMember, Var, named, path_type
from syntax.merge import merge_refinements
from syntax.subst import free_vars
from typecheck.checker import TypeChecker, build_contexts, check_program

seeds = st.integers(min_value=0, max_value=10_000)
bounds = st.sampled_from([EQ, LE, GE])
labels = st.sampled_from(["T", "U", "V"])

PROPERTY_SETTINGS = settings(max_examples=20, derandomize=True, deadline=None)

CLONE_PROGRAM = parse_program(SourceFile.read(os.path.join(Config.CORPUS_DIR, "clone.nwyv"))).program


@PROPERTY_SETTINGS
@given(seeds)
def test_generated_programs_separate(seed):
    program = gen_program(GenConfig(seed=seed))
    delta = definitions(program)
    sigma = program.subtype_decls
    assert check_syntactic_separation(program, delta, sigma).ok
    assert check_shape_validity(build_sdg(delta, sigma), delta).ok


@PROPERTY_SETTINGS
@given(seeds)
def test_generation_is_deterministic(seed):
    assert gen_program(GenConfig(seed=seed)) == gen_program(GenConfig(seed=seed))


@settings(max_examples=15, derandomize=True, deadline=None)
@given(seeds)
def test_subtyping_is_reflexive(seed):
    program = gen_program(GenConfig(seed=seed))
    rng = random.Random(seed)
    gamma = query_env(program, rng)
    ctx = Ctx(definitions(program), program.subtype_decls).with_gamma(gamma)
    types = TypeGen(ctx.delta, ctx.sigma, rng, gamma)
    for _ in range(3):
        ty = types.any_type()
        assert is_subtype(ctx, ty, ty)[0]


@given(bounds)
def test_exact_satisfies_every_request(b):
    assert satisfies(EQ, b)
    assert satisfies(b, b)


@given(bounds)
def test_upper_bound_is_a_right_identity_and_equality_a_left_zero(b):
    assert bound_product(b, LE) is b
    assert bound_product(EQ, b) is EQ


@given(st.lists(st.tuples(labels, bounds), unique_by=lambda m: m[0]),
       st.lists(st.tuples(labels, bounds), unique_by=lambda m: m[0]))
def test_merge_keeps_every_label_and_prefers_the_right(left_pairs, right_pairs):
    def build(pairs):
        return Refinement(tuple(RefinementMember(label, b, named("A")) for label, b in pairs))

    left, right = build(left_pairs), build(right_pairs)
    merged = merge_refinements(left, right)
    assert set(merged.labels) == {label for label, _ in left_pairs + right_pairs}
    for label, b in right_pairs:
        assert merged.get(label).bound is b


@settings(max_examples=25, derandomize=True, deadline=None)
@given(st.integers(min_value=0, max_value=20))
def test_more_fuel_never_changes_a_result(fuel):
    first = eval_fuel(EMPTY_HEAP, CLONE_PROGRAM.main, fuel)
    more = eval_fuel(EMPTY_HEAP, CLONE_PROGRAM.main, fuel + 1)
    if not first.stuck:
        assert more.result == first.result
        assert more.heap == first.heap


def generated_context(seed):
    program = gen_program(GenConfig(seed=seed))
    rng = random.Random(seed)
    gamma = query_env(program, rng)
    ctx = Ctx(definitions(program), program.subtype_decls).with_gamma(gamma)
    return ctx, TypeGen(ctx.delta, ctx.sigma, rng, gamma)


def gamma_paths(ctx):
    out = []
    for var, ty in ctx.gamma.entries:
        for member in ctx.delta[ty.base.name].members:
            out.append((var, path_type(Var(var), member.label)))
    return out


@PROPERTY_SETTINGS
@given(seeds)
def test_closed_types_invert_top_and_bottom(seed):
    """Without variables, only Top is above Top and only Bot is below Bot."""
    program = gen_program(GenConfig(seed=seed))
    ctx = Ctx(definitions(program), program.subtype_decls)
    types = TypeGen(ctx.delta, ctx.sigma, random.Random(seed))
    for _ in range(4):
        ty = types.any_type()
        assert is_subtype(ctx, TOP, ty)[0] == (ty == TOP)
        assert is_subtype(ctx, ty, BOTTOM)[0] == (ty == BOTTOM)


@PROPERTY_SETTINGS
@given(seeds)
def test_exposure_is_deterministic_and_matches_its_judgment(seed):
    ctx, _ = generated_context(seed)
    pseudotypes = sum(len(d.members) for d in ctx.delta.values())
    for _, path in gamma_paths(ctx):
        first, steps = expose_with_steps(ctx, path)
        second, _ = expose_with_steps(ctx, path)
        assert first == second
        assert steps <= len(ctx.gamma) * (pseudotypes + 1)
        assert expose(ctx, path) == first
        assert expose_judgment(ctx, path) == first


@PROPERTY_SETTINGS
@given(seeds)
def test_avoidance_removes_the_variable_and_widens(seed):
    ctx, _ = generated_context(seed)
    for var, path in gamma_paths(ctx):
        try:
            result = avoid(ctx, path, var, LE)
        except NormalizeError:
            continue
        assert var not in free_vars(result.ty)
        assert is_subtype(ctx, path, result.ty)[0]


@PROPERTY_SETTINGS
@given(seeds)
def test_upcast_is_a_supertype(seed):
    ctx, _ = generated_context(seed)
    for _, path in gamma_paths(ctx):
        assert is_subtype(ctx, path, upcast(ctx, path))[0]


@settings(max_examples=10, derandomize=True, deadline=None)
@given(st.integers(min_value=6, max_value=40))
def test_enough_fuel_agrees_with_unbounded_evaluation(fuel):
    heap, loc = eval_big(EMPTY_HEAP, CLONE_PROGRAM.main)
    outcome = eval_fuel(EMPTY_HEAP, CLONE_PROGRAM.main, fuel)
    assert (outcome.heap, outcome.result) == (heap, loc)


@settings(max_examples=10, derandomize=True, deadline=None)
@given(st.integers(min_value=0, max_value=12), st.integers(min_value=0, max_value=3))
def test_evaluation_only_grows_the_heap(fuel, preallocated):
    start = EMPTY_HEAP
    for _ in range(preallocated):
        start, _ = start.alloc(HeapEntry("u", (), TOP))
    outcome = eval_fuel(start, CLONE_PROGRAM.main, fuel)
    assert outcome.heap.extends(start)


def test_term_typing_is_deterministic():
    delta, sigma = build_contexts(CLONE_PROGRAM)
    ctx = Ctx(delta, sigma)
    checker = TypeChecker()
    assert checker.type_expr(ctx, CLONE_PROGRAM.main) == checker.type_expr(ctx, CLONE_PROGRAM.main)


def test_subtype_failure_traces_only_record_failure():
    """The recorded derivation of a rejected obligation never claims success at its root."""
    bank = parse_program(SourceFile.read(os.path.join(Config.CORPUS_DIR, "bank.nwyv"))).program
    checked = check_program(bank, record_traces=True)
    (error,) = checked.errors
    assert error.trace.roots
    assert not any(root.result for root in error.trace.roots)
