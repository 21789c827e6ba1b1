import pytest

from frontend.parser import parse_program
from normalize.context import Ctx
from syntax.ast import TOP, NamedTypeDecl, New, Program, ShapeMark, named
from syntax.printer import show_type
from typecheck.checker import TypeChecker, build_contexts, check_program
from typecheck.errors import TypeCheckFailure, TypeErrorKind

UNIT_MAIN = "\nnew Top { u => }\n"


def main_type(corpus, name):
    checked = check_program(parse_program(corpus(name)).program)
    assert checked.ok, checked.errors
    return show_type(checked.main_type)


def first_error(program_of, text, **options):
    checked = check_program(program_of(text), **options)
    assert checked.errors
    return checked.errors[0]


# --- well-typed programs ---

def test_fruit_set(corpus):
    """The path-dependent result type is rewritten to avoid the local set."""
    assert main_type(corpus, "fruit_set.nwyv") == "Set { type ElemT = Fruit }"


def test_clone_through_shape(corpus):
    assert main_type(corpus, "clone.nwyv") == "String"


def test_unit_main(corpus):
    assert main_type(corpus, "int_list.nwyv") == "Top"


def test_ascription_widens(program_of):
    text = "name B { b => }\nname A { a => }\nsubtype A <: B\nlet x: B = new A { a => } in x"
    checked = check_program(program_of(text))
    assert checked.ok
    assert checked.main_type == named("B")


def test_declared_edges_are_checked(corpus):
    checked = check_program(parse_program(corpus("fruit_set.nwyv")).program)
    assert not checked.errors
    assert [(d.lhs_name, d.rhs_name) for d in checked.sigma] == [("Fruit", "Equatable")]


# --- errors ---

def test_cards_from_different_banks(corpus):
    checked = check_program(parse_program(corpus("bank.nwyv")).program)
    (error,) = checked.errors
    assert error.kind is TypeErrorKind.SUBTYPE_FAILURE
    assert show_type(error.actual) == "chase.Card"
    assert show_type(error.expected) == "pnc.Card"


def test_avoidance_failure(corpus):
    checked = check_program(parse_program(corpus("loop.nwyv")).program)
    (error,) = checked.errors
    assert error.kind is TypeErrorKind.AVOID_FAILURE
    assert checked.main_type is None


def test_unbound_path(program_of):
    assert first_error(program_of, "y").kind is TypeErrorKind.UNBOUND_PATH


def test_missing_field(program_of):
    error = first_error(program_of, "name A { a => }\nlet x = new A { a => } in x.f")
    assert error.kind is TypeErrorKind.NO_SUCH_MEMBER


def test_object_must_define_declared_members(program_of):
    error = first_error(program_of, "name A { a => val f: A }\nnew A { a => }")
    assert error.kind is TypeErrorKind.NO_SUCH_MEMBER
    assert "does not define 'f'" in error.message


def test_refinement_of_undeclared_member(program_of):
    error = first_error(program_of, "name A { a => type T <= Top }\nnew A { type U = Top } { a => type T = Top }")
    assert error.kind is TypeErrorKind.INVALID_TYPE


def test_refinement_must_fit_declared_bound(program_of):
    error = first_error(program_of, "name A { a => type T <= Top }\nnew A { type T >= Top } { a => type T = Top }")
    assert error.kind is TypeErrorKind.INVALID_TYPE


def test_path_type_must_select_a_declared_member(program_of):
    text = "name A { a => type T <= Top }\nlet x = new A { a => type T = Top } in let y: x.U = x in y"
    error = first_error(program_of, text)
    assert error.kind is TypeErrorKind.INVALID_TYPE
    assert "no member 'U'" in error.message


def test_path_type_must_select_a_type_member(program_of):
    text = ("name A { a => type T <= Top  val f: Top }\n"
            "let x = new A { a => type T = Top  val f: Top = a } in let y: x.f = x in y")
    error = first_error(program_of, text)
    assert error.kind is TypeErrorKind.INVALID_TYPE
    assert "'f' is not a type member" in error.message


def test_bad_subtype_declaration(program_of):
    error = first_error(program_of, "name A { a => }\nname B { b => type T <= Top }\nsubtype A <: B" + UNIT_MAIN)
    assert error.kind is TypeErrorKind.BAD_SUBTYPE_DECL
    assert "'T'" in error.message


def test_ascription_mismatch(program_of):
    error = first_error(program_of, "name A { a => }\nname B { b => }\nlet x: B = new A { a => } in x")
    assert error.kind is TypeErrorKind.SUBTYPE_FAILURE


def test_duplicate_names_reach_the_checker():
    """Programs built without the parser can still repeat a name."""
    decl = NamedTypeDecl(ShapeMark.MATERIAL, "A", "a", ())
    checked = check_program(Program((decl, decl), New(TOP, "u", ())))
    (error,) = checked.errors
    assert error.kind is TypeErrorKind.DUPLICATE_NAME
    with pytest.raises(TypeCheckFailure):
        build_contexts(Program((decl, decl), New(TOP, "u", ())))


def test_error_codes_follow_kind_order():
    assert TypeErrorKind.UNBOUND_PATH.code == "E0001"
    assert TypeErrorKind.SUBTYPE_FAILURE.code == "E0003"
    assert TypeErrorKind.AVOID_FAILURE.code == "E0006"
    assert TypeErrorKind.DUPLICATE_NAME.code == "E0007"


def test_expansion_switch(program_of):
    """Without expansion the checker cannot see IntList's own T through the edge."""
    text = ("name Int { i => }\nname List { l => type T <= Top }\nname IntList { l => type T = Int }\n"
            "subtype IntList <: List\n"
            "let xs: List { type T = Int } = new IntList { l => type T = Int } in xs")
    assert check_program(program_of(text)).ok
    error = first_error(program_of, text, use_expansion=False)
    assert error.kind is TypeErrorKind.SUBTYPE_FAILURE


def test_failure_traces_are_recorded(corpus):
    checked = check_program(parse_program(corpus("bank.nwyv")).program, record_traces=True)
    (error,) = checked.errors
    assert error.trace is not None
    assert error.trace.roots


def test_type_valid(corpus, ctx_of):
    ctx = ctx_of(corpus("fruit_set.nwyv").text)
    checker = TypeChecker()
    checker.type_valid(ctx, TOP)
    checker.type_valid(ctx, named("Fruit"))
    with pytest.raises(TypeCheckFailure) as info:
        checker.type_valid(Ctx(ctx.delta, ctx.sigma), named("Pear"))
    assert info.value.error.kind is TypeErrorKind.INVALID_TYPE
