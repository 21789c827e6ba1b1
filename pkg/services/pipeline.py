"""
The static pipeline shared by the command line and the playground:
parse, desugar, separation, typecheck, asserts, and optionally evaluation.

Each stage catches its own package's exceptions, logs them, and turns them into
Diagnostic records; later stages only run when the earlier ones succeeded.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import IntEnum
from functools import cached_property
from typing import Optional

from config import Config
from frontend.desugar import desugar_multi_params
from frontend.diagnostics import UNKNOWN_TYPE, Diagnostic, SourceFile
from frontend.parser import parse_prelude, parse_program, parse_type
from graphs.sdg import SubtypeDependencyGraph, build_sdg
from graphs.separation import SeparationReport, Violation, check_shape_validity, check_syntactic_separation
from interpreter.evaluator import EvalError, EvalOutcome, eval_big, eval_fuel
from interpreter.heap import EMPTY_HEAP
from subtyping.engine import DerivationTrace
from subtyping.expansion import check
from syntax.ast import AssertDirective, Program, Type
from syntax.printer import show_type
from syntax.subst import type_names
from typecheck.checker import CheckedProgram, TypeChecker, build_contexts
from typecheck.errors import TypeCheckError, TypeCheckFailure

logger = logging.getLogger(__name__)

SEPARATION_CODES = {
    "ShapeInLowerBound": "S0001",
    "ShapeUpperNotShape": "S0002",
    "ShapeRefinedInRefinement": "S0003",
    "UnguardedCycle": "S0004",
}
ASSERT_FAILED = "A0001"
STUCK = "R0001"
INTERNAL = "X0001"


class ExitCode(IntEnum):
    OK = 0
    TYPE_ERROR = 1
    SEPARATION = 2
    PARSE = 3
    STUCK = 4
    ASSERT_FAILED = 5


@dataclass(frozen=True)
class PipelineOptions:
    use_expansion: bool = True
    avoid_fuel: int = Config.AVOID_FUEL
    trace: bool = False
    prelude_path: Optional[str] = None


@dataclass
class AssertResult:
    directive: AssertDirective
    holds: bool
    trace: Optional[DerivationTrace] = None

    @property
    def passed(self) -> bool:
        return self.holds == self.directive.expected

    def to_json(self) -> dict:
        return {
            "lhs": show_type(self.directive.lhs),
            "rhs": show_type(self.directive.rhs),
            "expected": self.directive.expected,
            "holds": self.holds,
        }


@dataclass
class PipelineResult:
    file: str
    exit_code: ExitCode = ExitCode.OK
    diagnostics: list[Diagnostic] = field(default_factory=list)
    program: Optional[Program] = None
    checked: Optional[CheckedProgram] = None
    sdg: Optional[SubtypeDependencyGraph] = None
    asserts: list[AssertResult] = field(default_factory=list)
    outcome: Optional[EvalOutcome] = None

    @property
    def main_type(self) -> Optional[Type]:
        return self.checked.main_type if self.checked is not None else None

    def fail(self, code: ExitCode, diagnostics: list[Diagnostic]) -> "PipelineResult":
        self.exit_code = code
        self.diagnostics.extend(diagnostics)
        return self

    def to_json(self) -> dict:
        return {
            "file": self.file,
            "exit_code": int(self.exit_code),
            "diagnostics": [d.to_json() for d in self.diagnostics],
            "main_type": show_type(self.main_type) if self.main_type is not None else None,
            "asserts": [a.to_json() for a in self.asserts],
        }


def violation_diagnostic(violation: Violation, file: str) -> Diagnostic:
    return Diagnostic(SEPARATION_CODES[violation.kind.value], f"{violation.location}: {violation.message}",
                      violation.span, file=file)


def type_error_diagnostic(error: TypeCheckError, file: str, trace: bool = False) -> Diagnostic:
    notes = ()
    if trace and error.trace is not None and error.trace.roots:
        notes = tuple(error.trace.render().splitlines())
    return Diagnostic(
        error.kind.code, error.message, error.span, file=file,
        expected=show_type(error.expected) if error.expected is not None else None,
        actual=show_type(error.actual) if error.actual is not None else None,
        notes=notes,
    )


def internal_diagnostic(error: BaseException, file: str) -> Diagnostic:
    return Diagnostic(INTERNAL, f"internal error: {type(error).__name__}: {error}", file=file)


class Pipeline:
    def __init__(self, options: PipelineOptions = PipelineOptions()):
        self.options = options
        self.checker = TypeChecker(options.use_expansion, options.avoid_fuel, record_traces=options.trace)

    @cached_property
    def prelude(self) -> tuple[Optional[Program], list[Diagnostic]]:
        if self.options.prelude_path is None:
            return None, []
        parsed = parse_prelude(SourceFile.read(self.options.prelude_path))
        logger.info(f"Loaded prelude {self.options.prelude_path}: {len(parsed.diagnostics)} diagnostic(s)")
        return parsed.program, parsed.diagnostics

    # --- stages ---

    def separate(self, result: PipelineResult) -> SeparationReport:
        program = result.program
        delta, sigma = build_contexts(program)
        result.sdg = build_sdg(delta, sigma)
        report = check_syntactic_separation(program, delta, sigma).extend(check_shape_validity(result.sdg, delta))
        logger.info(f"Separation of {result.file}: {len(report.violations)} violation(s)")
        return report

    def check_asserts(self, result: PipelineResult, asserts: tuple[AssertDirective, ...]) -> None:
        ctx = result.checked.context()
        for directive in asserts:
            holds, trace = check(ctx, directive.lhs, directive.rhs, self.options.use_expansion,
                                 trace=self.options.trace)
            outcome = AssertResult(directive, holds, trace)
            result.asserts.append(outcome)
            if not outcome.passed:
                relation = "<:" if directive.expected else "</:"
                message = (f"assertion {show_type(directive.lhs)} {relation} {show_type(directive.rhs)} "
                           f"does not hold")
                notes = tuple(trace.render().splitlines()) if self.options.trace else ()
                result.diagnostics.append(Diagnostic(ASSERT_FAILED, message, directive.span,
                                                     file=result.file, notes=notes))

    def check_source(self, src: SourceFile) -> PipelineResult:
        result = PipelineResult(src.path)
        try:
            return self._check(src, result)
        except Exception as e:
            logger.error(f"Internal error while checking {src.path}: {e}", exc_info=True)
            return result.fail(ExitCode.TYPE_ERROR, [internal_diagnostic(e, src.path)])

    def front(self, src: SourceFile, result: PipelineResult) -> tuple[AssertDirective, ...]:
        """Prelude, parse and desugar. On failure the result carries exit code 3 and no program."""
        prelude, prelude_diags = self.prelude
        if prelude_diags:
            result.fail(ExitCode.PARSE, prelude_diags)
            return ()
        parsed = parse_program(src, prelude)
        if not parsed.ok:
            result.fail(ExitCode.PARSE, parsed.diagnostics)
            return ()
        result.program = desugar_multi_params(parsed.program)
        return parsed.asserts

    def _check(self, src: SourceFile, result: PipelineResult) -> PipelineResult:
        asserts = self.front(src, result)
        if result.program is None:
            return result

        try:
            report = self.separate(result)
        except TypeCheckFailure as e:
            return result.fail(ExitCode.TYPE_ERROR, [type_error_diagnostic(e.error, src.path)])
        if not report.ok:
            return result.fail(ExitCode.SEPARATION, [violation_diagnostic(v, src.path) for v in report.violations])

        result.checked = self.checker.check_program(result.program)
        if result.checked.errors:
            diags = [type_error_diagnostic(e, src.path, self.options.trace) for e in result.checked.errors]
            return result.fail(ExitCode.TYPE_ERROR, diags)

        self.check_asserts(result, asserts)
        if any(not a.passed for a in result.asserts):
            result.exit_code = ExitCode.ASSERT_FAILED
        logger.info(f"Checked {src.path}: main : {show_type(result.main_type)}, exit {int(result.exit_code)}")
        return result

    def run_source(self, src: SourceFile, fuel: Optional[int]) -> PipelineResult:
        """Checks, then evaluates main; `fuel=None` evaluates without a bound."""
        result = self.check_source(src)
        if result.exit_code is not ExitCode.OK:
            return result
        try:
            if fuel is None:
                heap, loc = eval_big(EMPTY_HEAP, result.program.main)
                result.outcome = EvalOutcome(heap, loc)
            else:
                result.outcome = eval_fuel(EMPTY_HEAP, result.program.main, fuel)
        except (EvalError, RecursionError) as e:
            logger.error(f"Evaluation of {src.path} failed: {e}", exc_info=True)
            return result.fail(ExitCode.TYPE_ERROR, [internal_diagnostic(e, src.path)])
        if result.outcome.stuck:
            return result.fail(ExitCode.STUCK, [Diagnostic(STUCK, f"evaluation ran out of fuel ({fuel})", file=src.path)])
        logger.info(f"Ran {src.path}: result {result.outcome.result}, heap size {len(result.outcome.heap)}")
        return result

    # --- single queries ---

    def subtype_query(self, src: SourceFile, lhs_text: str, rhs_text: str) -> tuple[PipelineResult, Optional[AssertResult]]:
        """Checks the program, then answers lhs <: rhs under its declarations."""
        result = self.check_source(src)
        if result.checked is None or result.exit_code in (ExitCode.PARSE, ExitCode.SEPARATION):
            return result, None
        lhs, lhs_diags = parse_type(lhs_text, "<lhs>")
        rhs, rhs_diags = parse_type(rhs_text, "<rhs>")
        if lhs is None or rhs is None:
            return result.fail(ExitCode.PARSE, lhs_diags + rhs_diags), None
        unknown = [n for n in type_names(lhs) + type_names(rhs) if n not in result.checked.delta]
        if unknown:
            return result.fail(ExitCode.PARSE, [Diagnostic(UNKNOWN_TYPE, f"unknown type name '{unknown[0]}'", file=src.path)]), None
        holds, trace = check(result.checked.context(), lhs, rhs, self.options.use_expansion, trace=self.options.trace)
        return result, AssertResult(AssertDirective(lhs, rhs, True), holds, trace)
