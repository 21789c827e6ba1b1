"""
Parser for .nwyv source files.

The grammar lives in nominal_wyvern.lark and is parsed with lark's LALR parser; a
Transformer turns the parse tree into syntax.ast nodes. Structural checks that the
grammar cannot express (duplicates, location literals, A-normal form, unknown names)
run afterwards and are all reported, so one run shows every structural problem.
"""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import LarkError, UnexpectedCharacters, UnexpectedInput, UnexpectedToken

from frontend import diagnostics as codes
from frontend.anf import validate_anf
from frontend.diagnostics import Diagnostic, SourceFile
from syntax.ast import (
    BOTTOM, TOP, AssertDirective, Bound, Compound, FieldDecl, FieldDefn, FieldSel, Let, Loc,
    MethodApp, MethodDecl, MethodDefn, MultiMethodApp, MultiMethodDecl, MultiMethodDefn,
    NamedTypeDecl, Named, New, Param, PathE, PathSel, Program, Refined, Refinement,
    RefinementMember, ShapeMark, Span, SubtypeDecl, Type, TypeMemberDecl, TypeMemberDefn, Var,
)
from syntax.subst import free_vars, type_names

logger = logging.getLogger(__name__)

GRAMMAR_FILE = os.path.join(os.path.dirname(os.path.abspath(__file__)), "nominal_wyvern.lark")


@lru_cache(maxsize=1)
def get_parser() -> Lark:
    """Builds the LALR parser once per process."""
    logger.info(f"Loading grammar from {GRAMMAR_FILE}")
    return Lark.open(
        GRAMMAR_FILE,
        parser="lalr",
        start=["start", "type"],
        propagate_positions=True,
        maybe_placeholders=True,
    )


@dataclass
class ParseResult:
    program: Optional[Program]
    asserts: tuple[AssertDirective, ...] = ()
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.program is not None and not self.diagnostics


@dataclass
class _Parsed:
    decls: list
    asserts: list
    main: object


def _meta_span(meta) -> Optional[Span]:
    if getattr(meta, "empty", True):
        return None
    length = meta.end_column - meta.column if meta.end_line == meta.line else 1
    return Span(meta.line, meta.column, max(length, 1))


def _token_span(token: Token) -> Span:
    return Span(token.line or 1, token.column or 1, max(len(token), 1))


def _operand(expr):
    """Method targets, arguments and field values must be paths; anything else is kept for diagnosis."""
    if isinstance(expr, PathE):
        return expr.path
    return Compound(expr, span=getattr(expr, "span", None))


@v_args(meta=True)
class AstBuilder(Transformer):
    """Builds syntax.ast nodes bottom-up from lark's parse tree."""

    def __init__(self):
        super().__init__()
        self.loc_spans: list[Span] = []

    # --- program structure ---

    def start(self, meta, children):
        *items, main = children
        decls = [i for i in items if not isinstance(i, AssertDirective)]
        asserts = [i for i in items if isinstance(i, AssertDirective)]
        return _Parsed(decls, asserts, main)

    def named_decl(self, meta, children):
        shape, name, self_var, *members = children
        mark = ShapeMark.SHAPE if shape is not None else ShapeMark.MATERIAL
        return NamedTypeDecl(mark, str(name), str(self_var), tuple(members), span=_token_span(name))

    def subtype_decl(self, meta, children):
        lhs, refinement, rhs = children
        return SubtypeDecl(str(lhs), refinement or Refinement(), str(rhs), span=_meta_span(meta))

    def assert_holds(self, meta, children):
        lhs, rhs = children
        return AssertDirective(lhs, rhs, True, span=_meta_span(meta))

    def assert_fails(self, meta, children):
        lhs, rhs = children
        return AssertDirective(lhs, rhs, False, span=_meta_span(meta))

    # --- member declarations ---

    def type_member_decl(self, meta, children):
        shape, label, bound, ty = children
        mark = ShapeMark.SHAPE if shape is not None else ShapeMark.MATERIAL
        return TypeMemberDecl(str(label), bound, ty, mark, span=_token_span(label))

    def field_decl(self, meta, children):
        label, ty = children
        return FieldDecl(str(label), ty, span=_token_span(label))

    def method_decl_paren(self, meta, children):
        label, params, result_ty = children
        params = params or []
        if len(params) == 1:
            return MethodDecl(str(label), params[0].name, params[0].ty, result_ty, span=_token_span(label))
        return MultiMethodDecl(str(label), tuple(params), result_ty, span=_token_span(label))

    def method_decl_arrow(self, meta, children):
        label, param_ty, param, result_ty = children
        return MethodDecl(str(label), str(param), param_ty, result_ty, span=_token_span(label))

    def params(self, meta, children):
        return list(children)

    def param(self, meta, children):
        name, ty = children
        return Param(str(name), ty)

    def le(self, meta, children):
        return Bound.LE

    def ge(self, meta, children):
        return Bound.GE

    def eq(self, meta, children):
        return Bound.EQ

    # --- types ---

    def top(self, meta, children):
        return TOP

    def bot(self, meta, children):
        return BOTTOM

    def named_type(self, meta, children):
        name, refinement = children
        return Refined(Named(str(name)), refinement or Refinement())

    def path_type(self, meta, children):
        path, label, refinement = children
        return Refined(PathSel(path, str(label)), refinement or Refinement())

    def refinement(self, meta, children):
        return Refinement(tuple(children))

    def refine_member(self, meta, children):
        label, bound, ty = children
        return RefinementMember(str(label), bound, ty)

    def var_path(self, meta, children):
        return Var(str(children[0]))

    def loc_path(self, meta, children):
        token = children[0]
        self.loc_spans.append(_token_span(token))
        return Loc(int(str(token)[1:]))

    # --- expressions ---

    def path_expr(self, meta, children):
        return PathE(children[0], span=_meta_span(meta))

    def let_expr(self, meta, children):
        var, *rest = children
        if len(rest) == 3:
            ascription, bound, body = rest
        else:
            ascription, (bound, body) = None, rest
        return Let(str(var), ascription, bound, body, span=_token_span(var))

    def select(self, meta, children):
        target, label = children
        return FieldSel(_operand(target), str(label), span=_meta_span(meta))

    def call(self, meta, children):
        target, label, args = children
        args = args or []
        if len(args) == 1:
            return MethodApp(_operand(target), str(label), _operand(args[0]), span=_meta_span(meta))
        return MultiMethodApp(
            _operand(target), str(label), tuple(_operand(a) for a in args), span=_meta_span(meta)
        )

    def args(self, meta, children):
        return list(children)

    def named_base(self, meta, children):
        return Named(str(children[0]))

    def path_base(self, meta, children):
        path, label = children
        return PathSel(path, str(label))

    def plain_body(self, meta, children):
        self_var, *defs = children
        return Refinement(), str(self_var), tuple(defs)

    def refined_body(self, meta, children):
        members = [c for c in children if isinstance(c, RefinementMember)]
        rest = children[len(members):]
        self_var, *defs = rest
        return Refinement(tuple(members)), str(self_var), tuple(defs)

    def new_expr(self, meta, children):
        base, (refinement, self_var, defs) = children
        if isinstance(base, (Named, PathSel)):
            ty = Refined(base, refinement)
        else:
            ty = base
        return New(ty, self_var, defs, span=_meta_span(meta))

    # --- object member definitions ---

    def type_defn(self, meta, children):
        label, ty = children
        return TypeMemberDefn(str(label), ty, span=_token_span(label))

    def field_defn(self, meta, children):
        label, ty, value = children
        return FieldDefn(str(label), ty, _operand(value), span=_token_span(label))

    def method_defn_paren(self, meta, children):
        label, params, result_ty, body = children
        params = params or []
        if len(params) == 1:
            return MethodDefn(str(label), params[0].name, params[0].ty, result_ty, body, span=_token_span(label))
        return MultiMethodDefn(str(label), tuple(params), result_ty, body, span=_token_span(label))

    def method_defn_arrow(self, meta, children):
        label, param_ty, param, result_ty, body = children
        return MethodDefn(str(label), str(param), param_ty, result_ty, body, span=_token_span(label))


def _describe_terminal(parser: Lark, name: str) -> str:
    if name == "$END":
        return "end of input"
    try:
        pattern = parser.get_terminal(name).pattern
    except KeyError:
        return name.lower()
    if pattern.type == "str":
        return repr(pattern.value)
    return name.lower()


def _syntax_diagnostic(parser: Lark, error: UnexpectedInput, path: str) -> Diagnostic:
    line = max(getattr(error, "line", 1) or 1, 1)
    column = max(getattr(error, "column", 1) or 1, 1)
    if isinstance(error, UnexpectedCharacters):
        message = f"unexpected character {error.char!r}"
    elif isinstance(error, UnexpectedToken):
        if error.token.type == "$END":
            message = "unexpected end of input"
        else:
            message = f"unexpected token {str(error.token)!r}"
        expected = sorted(_describe_terminal(parser, t) for t in error.expected)
        if expected:
            message += f"; expected one of {', '.join(expected[:8])}"
    else:
        message = "unexpected end of input"
    return Diagnostic(codes.SYNTAX, message, Span(line, column), file=path)


def _duplicates(labels: list[tuple[str, Optional[Span]]]) -> list[tuple[str, Optional[Span]]]:
    seen: set[str] = set()
    out = []
    for label, span in labels:
        if label in seen:
            out.append((label, span))
        seen.add(label)
    return out


def _structural_diagnostics(decls, asserts, main, path: str) -> list[Diagnostic]:
    found: list[Diagnostic] = []
    names = [(d.name, d.span) for d in decls if isinstance(d, NamedTypeDecl)]
    for name, span in _duplicates(names):
        found.append(Diagnostic(codes.DUPLICATE_TYPE, f"type name '{name}' is declared more than once", span, file=path))

    for decl in decls:
        if isinstance(decl, NamedTypeDecl):
            labels = [(m.label, m.span) for m in decl.members]
            for label, span in _duplicates(labels):
                found.append(Diagnostic(
                    codes.DUPLICATE_MEMBER, f"member '{label}' is declared more than once in '{decl.name}'",
                    span or decl.span, file=path,
                ))
    for expr_decl in _walk_news(main):
        labels = [(d.label, d.span) for d in expr_decl.defs]
        for label, span in _duplicates(labels):
            found.append(Diagnostic(
                codes.DUPLICATE_MEMBER, f"member '{label}' is defined more than once in this object",
                span or expr_decl.span, file=path,
            ))

    for ty, span in _mentioned_types(decls, asserts, main):
        for refinement in _refinements(ty):
            for label, _ in _duplicates([(m.label, None) for m in refinement]):
                found.append(Diagnostic(
                    codes.DUPLICATE_MEMBER, f"refinement rebinds '{label}' more than once", span, file=path,
                ))

    for directive in asserts:
        if free_vars(directive.lhs) or free_vars(directive.rhs):
            found.append(Diagnostic(
                codes.ASSERT_VARIABLE, "assert directives may only mention named types", directive.span, file=path,
            ))
    return found


def _refinements(ty: Type):
    """Yields every refinement inside a type, outermost first."""
    if isinstance(ty, Refined):
        yield ty.refinement
        for m in ty.refinement:
            yield from _refinements(m.ty)


def _walk_news(expr):
    """Yields every New node in an expression, including those nested in method bodies."""
    if expr is None:
        return
    if isinstance(expr, New):
        yield expr
        for d in expr.defs:
            if isinstance(d, (MethodDefn, MultiMethodDefn)):
                yield from _walk_news(d.body)
            elif isinstance(d, FieldDefn) and isinstance(d.value, Compound):
                yield from _walk_news(d.value.expr)
    elif isinstance(expr, Let):
        yield from _walk_news(expr.bound)
        yield from _walk_news(expr.body)
    elif isinstance(expr, (FieldSel, MethodApp, MultiMethodApp)):
        operands = [expr.target]
        if isinstance(expr, MethodApp):
            operands.append(expr.arg)
        elif isinstance(expr, MultiMethodApp):
            operands.extend(expr.args)
        for op in operands:
            if isinstance(op, Compound):
                yield from _walk_news(op.expr)


def _mentioned_types(decls, asserts, main) -> list[tuple[Type, Optional[Span]]]:
    """Every type written in the program, paired with the span of its nearest enclosing node."""
    out: list[tuple[Type, Optional[Span]]] = []

    def add_type(ty, span):
        out.append((ty, span))

    def add_member(m, span):
        if isinstance(m, (TypeMemberDecl, FieldDecl)):
            add_type(m.ty, m.span or span)
        elif isinstance(m, MethodDecl):
            add_type(m.param_ty, m.span or span)
            add_type(m.result_ty, m.span or span)
        elif isinstance(m, MultiMethodDecl):
            for p in m.params:
                add_type(p.ty, m.span or span)
            add_type(m.result_ty, m.span or span)

    def add_expr(e, span):
        if isinstance(e, New):
            add_type(e.ty, e.span or span)
            for d in e.defs:
                if isinstance(d, (TypeMemberDefn, FieldDefn)):
                    add_type(d.ty, d.span or span)
                if isinstance(d, MethodDefn):
                    add_type(d.param_ty, d.span or span)
                if isinstance(d, MultiMethodDefn):
                    for p in d.params:
                        add_type(p.ty, d.span or span)
                if isinstance(d, (MethodDefn, MultiMethodDefn)):
                    add_type(d.result_ty, d.span or span)
                    add_expr(d.body, d.span or span)
                if isinstance(d, FieldDefn) and isinstance(d.value, Compound):
                    add_expr(d.value.expr, d.span or span)
        elif isinstance(e, Let):
            if e.ascription is not None:
                add_type(e.ascription, e.span or span)
            add_expr(e.bound, e.span or span)
            add_expr(e.body, e.span or span)
        elif isinstance(e, (FieldSel, MethodApp, MultiMethodApp)):
            ops = [e.target] + ([e.arg] if isinstance(e, MethodApp) else list(getattr(e, "args", ())))
            for op in ops:
                if isinstance(op, Compound):
                    add_expr(op.expr, e.span or span)

    for decl in decls:
        if isinstance(decl, NamedTypeDecl):
            for m in decl.members:
                add_member(m, decl.span)
        elif isinstance(decl, SubtypeDecl):
            add_type(Refined(Named(decl.lhs_name), decl.lhs_refinement), decl.span)
            add_type(Refined(Named(decl.rhs_name)), decl.span)
    for directive in asserts:
        add_type(directive.lhs, directive.span)
        add_type(directive.rhs, directive.span)
    if main is not None:
        add_expr(main, None)
    return out


def _parse_items(src: SourceFile):
    """Runs lark and the transformer. Returns (_Parsed | None, diagnostics, loc spans)."""
    parser = get_parser()
    try:
        tree = parser.parse(src.text, start="start")
        builder = AstBuilder()
        parsed = builder.transform(tree)
        return parsed, [], builder.loc_spans
    except UnexpectedInput as e:
        return None, [_syntax_diagnostic(parser, e, src.path)], []
    except LarkError as e:
        # Errors raised from inside transformer callbacks arrive wrapped in VisitError
        logger.error(f"Parser failure in {src.path}: {e}")
        return None, [Diagnostic(codes.SYNTAX, f"could not parse input: {e}", Span(1, 1), file=src.path)], []
    except RecursionError:
        return None, [Diagnostic(codes.SYNTAX, "input is nested too deeply", Span(1, 1), file=src.path)], []


def parse_prelude(src: SourceFile) -> ParseResult:
    """Parses a declarations-only file; a trailing main expression is rejected."""
    parsed, diags, loc_spans = _parse_items(src)
    if parsed is None:
        return ParseResult(None, (), diags)
    diags.extend(Diagnostic(codes.LOC_LITERAL, "location literals cannot appear in source programs", s, file=src.path)
                 for s in loc_spans)
    diags.extend(_structural_diagnostics(parsed.decls, parsed.asserts, None, src.path))
    if parsed.main is not None:
        diags.append(Diagnostic(codes.SYNTAX, "a prelude may only contain declarations",
                                getattr(parsed.main, "span", None), file=src.path))
    # The prelude's main slot is never used; a unit object keeps Program well-formed.
    program = Program(tuple(parsed.decls), New(TOP, "unit", ()))
    return ParseResult(program if not diags else None, tuple(parsed.asserts), diags)


def parse_program(src: SourceFile, prelude: Optional[Program] = None) -> ParseResult:
    """Parses a source file into a Program plus its assert directives, or diagnostics."""
    parsed, diags, loc_spans = _parse_items(src)
    if parsed is None:
        logger.info(f"Parse of {src.path} failed with {len(diags)} diagnostic(s)")
        return ParseResult(None, (), diags)

    decls = list(prelude.decls if prelude is not None else ()) + list(parsed.decls)
    diags.extend(Diagnostic(codes.LOC_LITERAL, "location literals cannot appear in source programs", s, file=src.path)
                 for s in loc_spans)
    diags.extend(_structural_diagnostics(decls, parsed.asserts, parsed.main, src.path))

    declared = {d.name for d in decls if isinstance(d, NamedTypeDecl)}
    reported: set[str] = set()
    for ty, span in _mentioned_types(decls, parsed.asserts, parsed.main):
        for name in type_names(ty):
            if name not in declared and name not in reported:
                reported.add(name)
                diags.append(Diagnostic(codes.UNKNOWN_TYPE, f"unknown type name '{name}'", span, file=src.path))

    if parsed.main is None:
        diags.append(Diagnostic(codes.MISSING_MAIN, "program has no main expression",
                                Span(max(src.text.count("\n"), 0) + 1, 1), file=src.path))
        return ParseResult(None, tuple(parsed.asserts), diags)

    program = Program(tuple(decls), parsed.main)
    diags.extend(validate_anf(program, src.path))
    if diags:
        logger.info(f"Parse of {src.path} produced {len(diags)} diagnostic(s)")
        return ParseResult(None, tuple(parsed.asserts), diags)
    logger.info(f"Parsed {src.path}: {len(decls)} declaration(s), {len(parsed.asserts)} assert(s)")
    return ParseResult(program, tuple(parsed.asserts), [])


def parse_source(text: str, path: str = "<input>", prelude: Optional[Program] = None) -> ParseResult:
    return parse_program(SourceFile(path, text), prelude)


def parse_type(text: str, path: str = "<type>") -> tuple[Optional[Type], list[Diagnostic]]:
    """Parses a single type written on the command line or in the playground."""
    parser = get_parser()
    try:
        tree = parser.parse(text, start="type")
    except UnexpectedInput as e:
        return None, [_syntax_diagnostic(parser, e, path)]
    builder = AstBuilder()
    ty = builder.transform(tree)
    if builder.loc_spans:
        return None, [Diagnostic(codes.LOC_LITERAL, "location literals cannot appear in source programs",
                                 builder.loc_spans[0], file=path)]
    return ty, []
