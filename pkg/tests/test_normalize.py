import pytest

from normalize.avoidance import avoid
from normalize.bounds import EQ, GE, LE, bound_join, bound_product, satisfies
from normalize.context import Ctx, Memo
from normalize.errors import AvoidFailed, FuelExhausted, IncompatibleBounds, LookupOnPathBase, NoSuchMember, UnboundPath
from normalize.exposure import downcast, expose, expose_env, upcast
from normalize.lookup import lookup_decl, members_of
from normalize.rank import env_well_formed, head_rank, rank, var_rank
from oracle.judgments import expose_judgment
from syntax.ast import TOP, Refinement, RefinementMember, TypeMemberDecl, Var, VarEnv, named, path_type

FRUIT_SET = named("Set", Refinement((RefinementMember("ElemT", EQ, named("Fruit")),)))


@pytest.fixture
def fruit_ctx(corpus, ctx_of):
    return ctx_of(corpus("fruit_set.nwyv").text)


# --- bounds ---

PRODUCT_TABLE = {
    (EQ, EQ): EQ, (EQ, LE): EQ, (EQ, GE): EQ,
    (LE, EQ): LE, (LE, LE): LE, (LE, GE): GE,
    (GE, EQ): GE, (GE, LE): GE, (GE, GE): LE,
}

JOIN_TABLE = {
    (EQ, EQ): EQ, (EQ, LE): LE, (EQ, GE): GE,
    (LE, EQ): LE, (LE, LE): LE, (LE, GE): None,
    (GE, EQ): GE, (GE, LE): None, (GE, GE): GE,
}


@pytest.mark.parametrize("cell", sorted(PRODUCT_TABLE, key=str))
def test_bound_product_table(cell):
    assert bound_product(*cell) is PRODUCT_TABLE[cell]


@pytest.mark.parametrize("cell", sorted(JOIN_TABLE, key=str))
def test_bound_join_table(cell):
    """Opposite directions have no join."""
    expected = JOIN_TABLE[cell]
    if expected is None:
        with pytest.raises(IncompatibleBounds):
            bound_join(*cell)
    else:
        assert bound_join(*cell) is expected


def test_satisfies():
    """An exact result serves any request."""
    assert satisfies(EQ, LE)
    assert satisfies(EQ, GE)
    assert satisfies(LE, LE)
    assert not satisfies(LE, GE)
    assert not satisfies(GE, EQ)


# --- ranks ---

def test_ranks():
    gamma = VarEnv().push("x", named("Set")).push("y", path_type(Var("x"), "ElemT"))
    assert var_rank(gamma, "x") == 1
    assert var_rank(gamma, "y") == 2
    assert rank(gamma, path_type(Var("y"), "EqT")) == 2
    assert rank(gamma, named("Set")) == 0
    assert head_rank(gamma, path_type(Var("x"), "ElemT")) == 1
    with pytest.raises(UnboundPath):
        var_rank(gamma, "z")


def test_environment_well_formedness():
    """Each entry may only mention the variables bound before it."""
    good = VarEnv().push("x", named("Set")).push("y", path_type(Var("x"), "ElemT"))
    assert env_well_formed(good)
    forward = VarEnv().push("y", path_type(Var("x"), "ElemT")).push("x", named("Set"))
    assert not env_well_formed(forward)
    duplicate = VarEnv().push("x", TOP).push("x", TOP)
    assert not env_well_formed(duplicate)


# --- lookup ---

def test_lookup_prefers_the_refinement(fruit_ctx):
    decl = lookup_decl(fruit_ctx, FRUIT_SET, Var("s"), "ElemT")
    assert decl == TypeMemberDecl("ElemT", EQ, named("Fruit"))


def test_lookup_substitutes_self(fruit_ctx):
    """Members from the definition see the looked-up path in place of self."""
    decl = lookup_decl(fruit_ctx, named("Set"), Var("s"), "ElemT")
    assert decl.bound is LE
    assert decl.ty == named("Equatable", Refinement((RefinementMember("EqT", EQ, path_type(Var("s"), "ElemT")),)))


def test_lookup_failures(fruit_ctx):
    with pytest.raises(NoSuchMember):
        lookup_decl(fruit_ctx, named("Set"), Var("s"), "missing")
    with pytest.raises(LookupOnPathBase):
        lookup_decl(fruit_ctx, path_type(Var("s"), "ElemT"), Var("t"), "EqT")


def test_members_of_instantiates_self(fruit_ctx):
    members = members_of(fruit_ctx, "Fruit", Var("f"))
    assert [m.label for m in members] == ["id", "weight", "EqT", "equals"]


# --- exposure ---

def test_expose_through_exact_refinement(fruit_ctx):
    ctx = fruit_ctx.push("x", FRUIT_SET)
    assert expose(ctx, path_type(Var("x"), "ElemT")) == named("Fruit")
    assert upcast(ctx, path_type(Var("x"), "ElemT")) == named("Fruit")
    assert downcast(ctx, path_type(Var("x"), "ElemT")) == named("Fruit")
    assert expose_judgment(ctx, path_type(Var("x"), "ElemT")) == named("Fruit")


def test_expose_through_upper_bound(fruit_ctx):
    """An upper bound exposes; it gives nothing to downcast."""
    ctx = fruit_ctx.push("x", named("Set"))
    exposed = expose(ctx, path_type(Var("x"), "ElemT"))
    assert exposed.base.name == "Equatable"
    assert downcast(ctx, path_type(Var("x"), "ElemT")) == path_type(Var("x"), "ElemT")


def test_expose_env_exposes_each_entry(fruit_ctx):
    ctx = fruit_ctx.push("x", FRUIT_SET).push("y", path_type(Var("x"), "ElemT"))
    exposed = expose_env(ctx)
    assert exposed.lookup("y") == named("Fruit")
    assert exposed.lookup("x") == FRUIT_SET


def test_expose_leaves_names_alone(fruit_ctx):
    assert expose(fruit_ctx, named("Fruit")) == named("Fruit")
    assert expose(fruit_ctx, TOP) == TOP


def test_memo_drops_least_recently_used():
    memo = Memo(limit=2)
    memo["a"] = 1
    memo["b"] = 2
    assert memo["a"] == 1
    memo["c"] = 3
    assert list(memo) == ["a", "c"]


def test_exposure_with_a_tiny_memo(fruit_ctx):
    """Evicted results are recomputed; the cache never grows past its limit."""
    ctx = Ctx(fruit_ctx.delta, fruit_ctx.sigma, memo=Memo(limit=1)).push("x", FRUIT_SET)
    for _ in range(2):
        assert expose(ctx, path_type(Var("x"), "ElemT")) == named("Fruit")
        assert len(ctx.memo) == 1


# --- avoidance ---

def test_avoid_exact_member(fruit_ctx):
    ctx = fruit_ctx.push("x", FRUIT_SET)
    result = avoid(ctx, path_type(Var("x"), "ElemT"), "x", LE)
    assert result.ty == named("Fruit")
    assert result.achieved is EQ


def test_avoid_leaves_closed_types_alone(fruit_ctx):
    ctx = fruit_ctx.push("x", FRUIT_SET)
    result = avoid(ctx, FRUIT_SET, "x", LE)
    assert result.ty == FRUIT_SET
    assert result.achieved is EQ


def test_avoid_upper_bound_gives_only_a_supertype(fruit_ctx):
    """x.ElemT has only an upper bound, so asking for a subtype fails."""
    ctx = fruit_ctx.push("x", named("Set"))
    with pytest.raises(AvoidFailed):
        avoid(ctx, path_type(Var("x"), "ElemT"), "x", GE)


def test_avoid_runs_out_of_fuel(corpus, ctx_of):
    """Loop::T unfolds to a type that mentions the same path again."""
    ctx = ctx_of(corpus("loop.nwyv").text).push("x", named("Loop"))
    with pytest.raises(FuelExhausted):
        avoid(ctx, path_type(Var("x"), "T"), "x", LE, fuel=4)
