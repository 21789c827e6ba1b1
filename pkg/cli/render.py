"""Terminal text for pipeline results. Colour is applied with click.style and stripped by click.echo when disabled."""
from __future__ import annotations

import json

import click

from frontend.diagnostics import Diagnostic, Severity
from graphs.measures import MeasureTable
from graphs.sdg import NameNode, PseudoNode
from normalize.context import Ctx
from normalize.errors import NormalizeError
from oracle.fuzz import FuzzCase
from services.pipeline import AssertResult, PipelineResult
from subtyping.energy import mentioned_nodes, type_energy
from syntax.printer import show_path, show_type

SEVERITY_COLORS = {Severity.ERROR: "red", Severity.WARNING: "yellow", Severity.NOTE: "cyan"}


def render_diagnostic(diag: Diagnostic) -> list[str]:
    lines = [click.style(diag.render(), fg=SEVERITY_COLORS[diag.severity])]
    if diag.expected is not None:
        lines.append(f"  expected: {diag.expected}")
    if diag.actual is not None:
        lines.append(f"  actual:   {diag.actual}")
    lines.extend(f"  {note}" for note in diag.notes)
    return lines


def render_assert(outcome: AssertResult) -> str:
    relation = "<:" if outcome.directive.expected else "</:"
    status = click.style("ok", fg="green") if outcome.passed else click.style("FAILED", fg="red")
    return f"assert {show_type(outcome.directive.lhs)} {relation} {show_type(outcome.directive.rhs)} ... {status}"


def render_check(result: PipelineResult) -> list[str]:
    lines = [render_assert(a) for a in result.asserts]
    if result.main_type is not None:
        lines.append(f"main : {show_type(result.main_type)}")
    for diag in result.diagnostics:
        lines.extend(render_diagnostic(diag))
    return lines


def render_run(result: PipelineResult) -> list[str]:
    lines = render_check(result)
    outcome = result.outcome
    if outcome is None or outcome.stuck:
        return lines
    entry = outcome.heap.get(outcome.result)
    lines.append(f"result : {show_path(outcome.result)} : {show_type(entry.ty)}")
    lines.append(f"members : {', '.join(entry.labels) or '(none)'}")
    lines.append(f"heap : {len(outcome.heap)} object(s)")
    return lines


def run_json(result: PipelineResult) -> dict:
    data = result.to_json()
    outcome = result.outcome
    if outcome is not None and not outcome.stuck:
        data["result"] = show_path(outcome.result)
        data["heap_size"] = len(outcome.heap)
        data["members"] = list(outcome.heap.get(outcome.result).labels)
    else:
        data["result"] = None
    return data


def render_answer(answer: AssertResult) -> str:
    verdict = click.style("true", fg="green") if answer.holds else click.style("false", fg="red")
    return f"{show_type(answer.directive.lhs)} <: {show_type(answer.directive.rhs)} : {verdict}"


def render_energy(ctx: Ctx, measures: MeasureTable, answer: AssertResult) -> list[str]:
    lines = []
    for side, ty in (("lhs", answer.directive.lhs), ("rhs", answer.directive.rhs)):
        try:
            lines.append(f"energy({side}) = {type_energy(ctx, measures, ty)}")
        except NormalizeError as e:
            lines.append(f"energy({side}) unavailable: {e}")
    seen = mentioned_nodes(ctx, answer.directive.lhs) + mentioned_nodes(ctx, answer.directive.rhs)
    for node in dict.fromkeys(seen):
        if isinstance(node, NameNode) and node in measures.e:
            lines.append(f"  E({node}) = {measures.e[node]}")
        elif isinstance(node, PseudoNode) and node in measures.m:
            lines.append(f"  M({node}) = {measures.m[node]}  A({node}) = {measures.a[node]}")
    return lines


def render_fuzz_summary(cases: list[FuzzCase]) -> list[str]:
    queries = sum(c.queries for c in cases)
    disagree = sum(c.disagree for c in cases)
    unknown = sum(c.unknown for c in cases)
    lines = [
        f"cases: {len(cases)}  queries: {queries}",
        f"agree: {sum(c.agree for c in cases)}  disagree: {disagree}  unknown: {unknown}",
        f"max steps: {max((c.max_steps for c in cases), default=0)}",
    ]
    not_separated = [c.seed for c in cases if not c.separated]
    if not_separated:
        lines.append(click.style(f"generated programs failing separation: seeds {not_separated}", fg="red"))
    if disagree:
        seeds = [c.seed for c in cases if c.disagree]
        lines.append(click.style(f"disagreements at seeds {seeds}", fg="red"))
    return lines


def to_json_text(data) -> str:
    return json.dumps(data, indent=2)
