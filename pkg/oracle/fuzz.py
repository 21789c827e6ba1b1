"""
One fuzz case: generate a program from a seed, confirm it separates, and compare the
engine with the brute-force oracle on a batch of random queries.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Optional

from config import Config
from graphs.sdg import build_sdg
from graphs.separation import check_shape_validity, check_syntactic_separation
from normalize.context import Ctx
from oracle.enumerate import enumerate_subtype
from oracle.generator import GenConfig, Query, definitions, gen_program, gen_queries
from subtyping.engine import is_subtype
from syntax.printer import show_type

logger = logging.getLogger(__name__)


@dataclass
class FuzzCase:
    seed: int
    queries: int = 0
    agree: int = 0
    disagree: int = 0
    unknown: int = 0
    max_steps: int = 0
    elapsed_ms: float = 0.0
    separated: bool = True
    mismatches: list[Query] = field(default_factory=list)

    def log_line(self) -> str:
        return (f"Fuzz case seed={self.seed} queries={self.queries} agree={self.agree} "
                f"disagree={self.disagree} unknown={self.unknown} max_steps={self.max_steps} "
                f"elapsed_ms={self.elapsed_ms:.1f}")


def run_case(seed: int, queries: int = Config.FUZZ_QUERIES_PER_CASE,
             max_depth: Optional[int] = None, gen: Optional[GenConfig] = None) -> FuzzCase:
    started = time.perf_counter()
    cfg = GenConfig(seed=seed) if gen is None else gen
    program = gen_program(cfg)
    delta = definitions(program)
    sigma = program.subtype_decls
    case = FuzzCase(seed)

    report = check_syntactic_separation(program, delta, sigma).extend(
        check_shape_validity(build_sdg(delta, sigma), delta))
    if not report.ok:
        case.separated = False
        logger.warning(f"Generated program seed={seed} is not separated: {report.violations[0].message}")

    ctx = Ctx(delta, sigma)
    for query in gen_queries(program, seed, queries) if case.separated else []:
        qctx = ctx.with_gamma(query.gamma)
        holds, trace = is_subtype(qctx, query.lhs, query.rhs)
        verdict = enumerate_subtype(qctx, query.lhs, query.rhs, max_depth)
        case.queries += 1
        case.max_steps = max(case.max_steps, trace.steps)
        if verdict.holds is None:
            case.unknown += 1
        elif verdict.holds == holds:
            case.agree += 1
        else:
            case.disagree += 1
            case.mismatches.append(query)
            logger.warning(f"Engine and oracle disagree on {show_type(query.lhs)} <: {show_type(query.rhs)} "
                           f"(seed={seed}): engine={holds}, oracle={verdict.holds}")

    case.elapsed_ms = (time.perf_counter() - started) * 1000
    logger.info(case.log_line())
    return case
