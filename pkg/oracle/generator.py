"""
Random programs that pass both separation checks by construction, and random
subtype queries against them.

Names are numbered N0..Nk and a declared edge Ni <: Nj always has j > i, so the names
partition of the dependency graph is a DAG. Within a name, a member may only select
members declared before it, except through a shape-headed upper bound that refers
back to the member itself. Shapes only ever occur as the head of an upper bound.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import Optional

from config import Config
from syntax.ast import (
    BOTTOM, TOP, Bound, DefTable, NameDef, NamedTypeDecl, New, Program, Refined, Refinement,
    RefinementMember, ShapeMark, SubtypeDecl, Type, TypeMemberDecl, Var, VarEnv, named, path_type,
)
from syntax.subst import free_vars, type_names

logger = logging.getLogger(__name__)

SELF = "z"
BOUNDS = (Bound.LE, Bound.GE, Bound.EQ)


@dataclass(frozen=True)
class GenConfig:
    max_names: int = Config.GEN_MAX_NAMES
    max_members: int = Config.GEN_MAX_MEMBERS
    max_refinement_depth: int = Config.GEN_MAX_REFINEMENT_DEPTH
    shape_probability: float = Config.GEN_SHAPE_PROBABILITY
    seed: int = 0


@dataclass
class _Draft:
    index: int
    mark: ShapeMark
    members: list[TypeMemberDecl] = field(default_factory=list)

    @property
    def name(self) -> str:
        return f"N{self.index}"


class _ProgramGen:
    def __init__(self, cfg: GenConfig):
        self.cfg = cfg
        self.rng = random.Random(cfg.seed)
        count = self.rng.randint(1, max(cfg.max_names, 1))
        self.drafts = [
            _Draft(i, ShapeMark.SHAPE if i > 0 and self.rng.random() < cfg.shape_probability else ShapeMark.MATERIAL)
            for i in range(count)
        ]
        self.sigma: list[SubtypeDecl] = []

    def material_type(self, draft: _Draft, earlier: list[TypeMemberDecl], depth: int) -> Type:
        """A type with no shape anywhere inside it."""
        roll = self.rng.random()
        if roll < 0.15:
            return TOP
        if roll < 0.25:
            return BOTTOM
        if roll < 0.45 and earlier:
            return path_type(Var(SELF), self.rng.choice(earlier).label)
        materials = [d for d in self.drafts if d.mark is ShapeMark.MATERIAL]
        head = self.rng.choice(materials)
        return named(head.name, self.refinement(draft, head, earlier, depth))

    def refinement(self, draft: _Draft, head: _Draft, earlier: list[TypeMemberDecl], depth: int) -> Refinement:
        # Only names already generated have a known member list.
        if depth <= 0 or head.index <= draft.index or not head.members:
            return Refinement()
        chosen = self.rng.sample(head.members, self.rng.randint(0, len(head.members)))
        return Refinement(tuple(
            RefinementMember(m.label, self.rng.choice(BOUNDS), self.material_type(draft, earlier, depth - 1))
            for m in chosen
        ))

    def member(self, draft: _Draft, label: str, earlier: list[TypeMemberDecl]) -> TypeMemberDecl:
        shapes = [d for d in self.drafts if d.mark is ShapeMark.SHAPE and d.index > draft.index]
        if shapes and self.rng.random() < 0.4:
            shape = self.rng.choice(shapes)
            refinement = Refinement()
            if shape.members and self.rng.random() < 0.6:
                # F-bound: the shape's member refers back to the member being declared.
                target = self.rng.choice(shape.members)
                refinement = Refinement((RefinementMember(target.label, Bound.EQ, path_type(Var(SELF), label)),))
            return TypeMemberDecl(label, Bound.LE, named(shape.name, refinement))
        bound = self.rng.choice(BOUNDS)
        return TypeMemberDecl(label, bound, self.material_type(draft, earlier, self.cfg.max_refinement_depth))

    def condition(self, inherited: list[TypeMemberDecl], rhs: _Draft) -> Refinement:
        """A closed, shape-free inherited member as the edge's condition, when one exists."""
        candidates = [
            m for m in inherited
            if not free_vars(m.ty) and all(int(n[1:]) < rhs.index and self.by_name[n].mark is ShapeMark.MATERIAL
                                           for n in type_names(m.ty))
        ]
        if not candidates or self.rng.random() > 0.2:
            return Refinement()
        m = self.rng.choice(candidates)
        return Refinement((RefinementMember(m.label, m.bound, m.ty),))

    def run(self) -> Program:
        self.by_name = {d.name: d for d in self.drafts}
        for draft in reversed(self.drafts):
            later = [d for d in self.drafts if d.index > draft.index
                     and (draft.mark is ShapeMark.MATERIAL or d.mark is ShapeMark.SHAPE)]
            supers = self.rng.sample(later, min(len(later), self.rng.randint(0, 2)))
            inherited: list[TypeMemberDecl] = []
            for sup in supers:
                for m in sup.members:
                    if all(m.label != i.label for i in inherited):
                        inherited.append(m)
            draft.members = list(inherited)
            for k in range(self.rng.randint(0, max(self.cfg.max_members, 0))):
                draft.members.append(self.member(draft, f"t{draft.index}_{k}", list(draft.members)))
            for sup in supers:
                self.sigma.append(SubtypeDecl(draft.name, self.condition(sup.members, sup), sup.name))

        decls = tuple(
            NamedTypeDecl(d.mark, d.name, SELF, tuple(d.members)) for d in self.drafts
        ) + tuple(reversed(self.sigma))
        logger.info(f"Generated program seed={self.cfg.seed}: {len(self.drafts)} name(s), {len(self.sigma)} edge(s)")
        return Program(decls, New(TOP, "unit", ()))


def gen_program(cfg: GenConfig) -> Program:
    """Deterministic in cfg.seed."""
    return _ProgramGen(cfg).run()


def definitions(program: Program) -> DefTable:
    return {d.name: NameDef(d.self_var, d.members, d.mark) for d in program.named_decls}


@dataclass(frozen=True)
class Query:
    gamma: VarEnv
    lhs: Type
    rhs: Type


class TypeGen:
    """Random closed types over a program, plus paths through the variables of `gamma`."""

    def __init__(self, delta: DefTable, sigma: tuple[SubtypeDecl, ...], rng: random.Random,
                 gamma: VarEnv = VarEnv(), max_depth: int = 2):
        self.delta = delta
        self.sigma = sigma
        self.rng = rng
        self.gamma = gamma
        self.max_depth = max_depth
        self.materials = [n for n, d in delta.items() if d.mark is ShapeMark.MATERIAL]

    def _labels(self, name: str) -> list[str]:
        return [m.label for m in self.delta[name].members if isinstance(m, TypeMemberDecl)]

    def _paths(self) -> list[Type]:
        out = []
        for var, ty in self.gamma.entries:
            if isinstance(ty, Refined) and getattr(ty.base, "name", None) in self.delta:
                out.extend(path_type(Var(var), label) for label in self._labels(ty.base.name))
        return out

    def material(self, depth: Optional[int] = None) -> Type:
        depth = self.max_depth if depth is None else depth
        roll = self.rng.random()
        paths = self._paths()
        if roll < 0.1 or not self.materials:
            return TOP
        if roll < 0.2:
            return BOTTOM
        if roll < 0.4 and paths:
            return self.rng.choice(paths)
        return self.refined(self.rng.choice(self.materials), depth)

    def refined(self, name: str, depth: int) -> Type:
        labels = self._labels(name)
        if depth <= 0 or not labels:
            return named(name)
        chosen = self.rng.sample(labels, self.rng.randint(0, min(len(labels), 2)))
        return named(name, Refinement(tuple(
            RefinementMember(label, self.rng.choice(BOUNDS), self.material(depth - 1)) for label in chosen
        )))

    def any_type(self) -> Type:
        """Like `material`, but a shape may head the outermost type."""
        shapes = [n for n, d in self.delta.items() if d.mark is ShapeMark.SHAPE]
        if shapes and self.rng.random() < 0.2:
            return named(self.rng.choice(shapes))
        return self.material()

    def supertype_of(self, ty: Type) -> Type:
        """A likely supertype: one declared edge up, or the type itself with fewer refinements."""
        if isinstance(ty, Refined) and getattr(ty.base, "name", None) in self.delta:
            ups = [d.rhs_name for d in self.sigma if d.lhs_name == ty.base.name]
            if ups and self.rng.random() < 0.6:
                return named(self.rng.choice(ups), ty.refinement)
            kept = tuple(m for m in ty.refinement if self.rng.random() < 0.5)
            return Refined(ty.base, Refinement(kept))
        return self.any_type()


def query_env(program: Program, rng: random.Random) -> VarEnv:
    """Zero to two variables bound at unrefined material names."""
    materials = [d.name for d in program.named_decls if d.mark is ShapeMark.MATERIAL]
    gamma = VarEnv()
    for i in range(rng.randint(0, 2) if materials else 0):
        gamma = gamma.push(f"x{i}", named(rng.choice(materials)))
    return gamma


def gen_queries(program: Program, seed: int, count: int = Config.FUZZ_QUERIES_PER_CASE) -> list[Query]:
    rng = random.Random(seed)
    delta = definitions(program)
    gamma = query_env(program, rng)
    types = TypeGen(delta, program.subtype_decls, rng, gamma)
    out = []
    for _ in range(count):
        lhs = types.any_type()
        rhs = types.supertype_of(lhs) if rng.random() < 0.4 else types.any_type()
        out.append(Query(gamma, lhs, rhs))
    return out
