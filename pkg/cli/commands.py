"""
The `nomwyv` command group: check, subtype, run, graph and fuzz.

Exit codes: 0 success, 1 type error, 2 separation violation, 3 parse error,
4 fuel exhausted, 5 assert failed (for `subtype`, the relation does not hold).
"""
from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from functools import cache

import click

from cli.render import (
    render_answer, render_check, render_diagnostic, render_energy, render_fuzz_summary, render_run, run_json,
    to_json_text,
)
from config import Config
from frontend.diagnostics import SourceFile
from graphs.dot_export import nominal_to_dot, sdg_to_dot
from graphs.measures import DivergentMeasure, compute_measures
from graphs.nominal import build_nominal_graph
from graphs.sdg import build_sdg
from oracle.fuzz import run_case
from services.pipeline import (
    ExitCode, Pipeline, PipelineOptions, PipelineResult, internal_diagnostic, type_error_diagnostic,
)
from typecheck.checker import build_contexts
from typecheck.errors import TypeCheckFailure

logger = logging.getLogger(__name__)

COLOR_MODES = ("auto", "always", "never")


@cache
def color() -> bool | None:
    if Config.COLOR_MODE.lower() not in COLOR_MODES:
        logger.warning(f"Unknown NOMWYV_COLOR value '{Config.COLOR_MODE}'; using auto")
    return Config.color_enabled()


def echo_lines(lines: list[str], err: bool = False) -> None:
    for line in lines:
        click.echo(line, color=color(), err=err)


def pipeline_options(func):
    """Flags shared by every command that runs the static pipeline."""
    func = click.option("--trace", is_flag=True, help="Print derivation trees for subtype checks.")(func)
    func = click.option("--avoid-fuel", type=click.IntRange(min=0), default=Config.AVOID_FUEL, show_default=True,
                        help="Unfolding steps granted to avoidance.")(func)
    func = click.option("--prelude", "prelude_path", is_flag=False, flag_value=Config.PRELUDE_FILE, default=None,
                        type=click.Path(exists=True, dir_okay=False),
                        help="Prepend a declarations-only prelude (bundled one when no path is given).")(func)
    func = click.option("--no-expand", is_flag=True, help="Check subtyping without expansion.")(func)
    return func


def output_format(func):
    return click.option("--format", "output_format", type=click.Choice(["text", "json"]), default="text",
                        show_default=True)(func)


def make_pipeline(no_expand: bool, prelude_path, avoid_fuel: int, trace: bool) -> Pipeline:
    return Pipeline(PipelineOptions(use_expansion=not no_expand, avoid_fuel=avoid_fuel, trace=trace,
                                    prelude_path=prelude_path))


def source_files(target: str) -> list[str]:
    if os.path.isdir(target):
        return sorted(os.path.join(target, f) for f in os.listdir(target) if f.endswith(Config.SOURCE_SUFFIX))
    return [target]


@click.group()
def cli():
    """Checker, interpreter and graph tools for Nominal Wyvern programs."""


@cli.command()
@click.argument("target", type=click.Path(exists=True))
@pipeline_options
@output_format
@click.pass_context
def check(ctx, target, no_expand, prelude_path, avoid_fuel, trace, output_format):
    """Typecheck a program, or every program in a directory."""
    pipeline = make_pipeline(no_expand, prelude_path, avoid_fuel, trace)
    files = source_files(target)
    if not files:
        logger.warning(f"No {Config.SOURCE_SUFFIX} files under {target}")
        click.echo(f"no {Config.SOURCE_SUFFIX} files under {target}", err=True)
        ctx.exit(ExitCode.OK)

    pipeline.prelude  # loaded once, before the workers share the pipeline
    sources = [SourceFile.read(f) for f in files]
    with ThreadPoolExecutor() as pool:
        results = list(pool.map(pipeline.check_source, sources))
    logger.info(f"Checked {len(results)} file(s) under {target}")

    if output_format == "json":
        payload = [r.to_json() for r in results]
        click.echo(to_json_text(payload if os.path.isdir(target) else payload[0]))
    else:
        for result in results:
            if len(results) > 1:
                click.echo(click.style(f"== {result.file}", bold=True), color=color())
            echo_lines(render_check(result))
    ctx.exit(max(int(r.exit_code) for r in results))


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--lhs", required=True, help="Left-hand type, in surface syntax.")
@click.option("--rhs", required=True, help="Right-hand type, in surface syntax.")
@click.option("--explain", is_flag=True, help="Print the energy of both sides.")
@pipeline_options
@output_format
@click.pass_context
def subtype(ctx, file, lhs, rhs, explain, no_expand, prelude_path, avoid_fuel, trace, output_format):
    """Answer one subtype query under a program's declarations."""
    pipeline = make_pipeline(no_expand, prelude_path, avoid_fuel, trace)
    result, answer = pipeline.subtype_query(SourceFile.read(file), lhs, rhs)
    if answer is None:
        if output_format == "json":
            click.echo(to_json_text(result.to_json()))
        else:
            echo_lines([line for d in result.diagnostics for line in render_diagnostic(d)])
        ctx.exit(result.exit_code)

    code = ExitCode.OK if answer.holds else ExitCode.ASSERT_FAILED
    if output_format == "json":
        data = result.to_json()
        data["query"] = answer.to_json()
        click.echo(to_json_text(data))
        ctx.exit(code)

    lines = [render_answer(answer)]
    if trace and answer.trace is not None:
        lines.extend(answer.trace.render().splitlines())
    if explain:
        try:
            measures = compute_measures(result.checked.delta, result.checked.sigma, result.sdg)
            lines.extend(render_energy(result.checked.context(), measures, answer))
        except DivergentMeasure as e:
            logger.warning(f"Energy of {file} unavailable: {e}")
            lines.append(f"energy unavailable: {e}")
    echo_lines(lines)
    ctx.exit(code)


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--fuel", type=click.IntRange(min=0), default=None, help="Evaluation fuel.")
@click.option("--no-fuel", is_flag=True, help="Evaluate without a fuel bound.")
@pipeline_options
@output_format
@click.pass_context
def run(ctx, file, fuel, no_fuel, no_expand, prelude_path, avoid_fuel, trace, output_format):
    """Typecheck a program, then evaluate its main expression."""
    if fuel is None and not no_fuel:
        raise click.UsageError("run needs --fuel N or --no-fuel")
    if fuel is not None and no_fuel:
        raise click.UsageError("--fuel and --no-fuel cannot be combined")

    pipeline = make_pipeline(no_expand, prelude_path, avoid_fuel, trace)
    result = pipeline.run_source(SourceFile.read(file), None if no_fuel else fuel)
    if output_format == "json":
        click.echo(to_json_text(run_json(result)))
    else:
        echo_lines(render_run(result))
    ctx.exit(result.exit_code)


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--kind", type=click.Choice(["sdg", "nominal"]), default="sdg", show_default=True)
@click.option("--partition", is_flag=True, help="One cluster per partition of the dependency graph.")
@click.option("--prelude", "prelude_path", is_flag=False, flag_value=Config.PRELUDE_FILE, default=None,
              type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def graph(ctx, file, kind, partition, prelude_path):
    """Emit a program's dependency graph or nominal graph as DOT. Separation is not required."""
    pipeline = Pipeline(PipelineOptions(prelude_path=prelude_path))
    result = PipelineResult(file)
    try:
        pipeline.front(SourceFile.read(file), result)
        if result.program is None:
            echo_lines([line for d in result.diagnostics for line in render_diagnostic(d)])
            ctx.exit(result.exit_code)
        delta, sigma = build_contexts(result.program)
    except TypeCheckFailure as e:
        echo_lines(render_diagnostic(type_error_diagnostic(e.error, file)))
        ctx.exit(ExitCode.TYPE_ERROR)
    except click.exceptions.Exit:
        raise
    except Exception as e:
        logger.error(f"Internal error while graphing {file}: {e}", exc_info=True)
        echo_lines(render_diagnostic(internal_diagnostic(e, file)))
        ctx.exit(ExitCode.TYPE_ERROR)

    if kind == "sdg":
        click.echo(sdg_to_dot(build_sdg(delta, sigma), delta, partition=partition), nl=False)
    else:
        click.echo(nominal_to_dot(build_nominal_graph(delta, sigma)), nl=False)
    logger.info(f"Emitted {kind} graph for {file}")


@cli.command()
@click.option("--seed", type=int, default=0, show_default=True, help="Seed of the first case.")
@click.option("--cases", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--queries", type=click.IntRange(min=1), default=Config.FUZZ_QUERIES_PER_CASE, show_default=True,
              help="Subtype queries per generated program.")
@click.option("--depth", type=click.IntRange(min=1), default=Config.ORACLE_DEPTH, show_default=True,
              help="Oracle derivation depth.")
@click.pass_context
def fuzz(ctx, seed, cases, queries, depth):
    """Compare the subtype engine with the brute-force oracle on generated programs."""
    results = []
    try:
        for offset in range(cases):
            results.append(run_case(seed + offset, queries, depth))
    except Exception as e:
        logger.error(f"Fuzz case seed={seed + len(results)} crashed: {e}", exc_info=True)
        echo_lines(render_diagnostic(internal_diagnostic(e, f"<fuzz seed={seed + len(results)}>")), err=True)
        ctx.exit(ExitCode.TYPE_ERROR)

    echo_lines(render_fuzz_summary(results))
    failed = any(c.disagree or not c.separated for c in results)
    ctx.exit(ExitCode.TYPE_ERROR if failed else ExitCode.OK)
