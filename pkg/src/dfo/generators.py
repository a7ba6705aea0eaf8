"""Seeded random structures and formulas for the property suites."""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .logic import (
    DFO, And, Eq, Exists, Forall, Formula, FragmentKind, Loc, Not, Or, Pred, Rel,
)
from .structures import DataStructure

__all__ = [
    "GenParams", "random_structure", "random_formula", "random_existential_sentence",
    "random_distinct_sentence",
    "rng_for", "ELEMENT_NAMES",
]

ELEMENT_NAMES = tuple("abcdefghijklmnopqrstuvw")
VAR_POOL = ("x", "y", "z", "w")


@dataclass(frozen=True)
class GenParams:
    max_size: int = 5
    dim: int = 2
    values: int = 6
    predicates: int = 1
    depth: int = 3
    radius: int = 2
    seed: int = 0
    min_size: int = 1
    leaf: float = 0.2

    def __post_init__(self):
        if self.max_size < 1 or self.values < 1 or self.min_size < 1 or self.min_size > self.max_size:
            raise ValueError("sizes and value range must be positive")
        if self.dim < 0 or self.predicates < 0 or self.depth < 0 or self.radius < 0:
            raise ValueError("negative generator parameter")

    def with_(self, **kw) -> "GenParams":
        return replace(self, **kw)

    @property
    def sigma(self) -> tuple:
        return tuple(f"p{k}" for k in range(1, self.predicates + 1))


def rng_for(seed, *tags) -> random.Random:
    """Independent deterministic stream per (seed, tags)."""
    return random.Random(":".join(str(t) for t in (seed,) + tags))


def random_structure(params: GenParams, rng: Optional[random.Random] = None) -> DataStructure:
    rng = rng or random.Random(params.seed)
    n = rng.randint(params.min_size, params.max_size)
    universe = ELEMENT_NAMES[:n]
    data = {e: tuple(rng.randint(1, params.values) for _ in range(params.dim)) for e in universe}
    preds = {p: frozenset(e for e in universe if rng.random() < 0.5) for p in params.sigma}
    return DataStructure(universe, params.dim, preds, data)


class _FormulaGen:
    def __init__(self, params: GenParams, rng: random.Random):
        self.p = params
        self.rng = rng

    def atom(self, scope):
        rng, p = self.rng, self.p
        choices = ["eq"]
        if p.dim:
            choices += ["rel", "rel"]
        if p.sigma:
            choices.append("pred")
        kind = rng.choice(choices)
        if kind == "pred":
            return Pred(rng.choice(p.sigma), rng.choice(scope))
        if kind == "rel":
            return Rel(rng.randint(1, p.dim), rng.randint(1, p.dim), rng.choice(scope), rng.choice(scope))
        return Eq(rng.choice(scope), rng.choice(scope))

    def dfo(self, depth, scope):
        """A dFO formula whose free variables lie in ``scope``."""
        rng = self.rng
        if not scope:
            v = rng.choice(VAR_POOL)
            q = Exists if rng.random() < 0.5 else Forall
            return q(v, self.dfo(max(depth - 1, 0), [v]))
        if depth == 0 or rng.random() < self.p.leaf:
            return self.atom(scope)
        k = rng.random()
        if k < 0.2:
            return Not(self.dfo(depth - 1, scope))
        if k < 0.4:
            return Or(self.dfo(depth - 1, scope), self.dfo(depth - 1, scope))
        if k < 0.6:
            return And(self.dfo(depth - 1, scope), self.dfo(depth - 1, scope))
        v = rng.choice(VAR_POOL)
        q = Exists if k < 0.8 else Forall
        return q(v, self.dfo(depth - 1, sorted(set(scope) | {v})))

    def loc(self, x, depth):
        return Loc(self.p.radius, x, self.dfo(depth, [x]))

    def local(self, depth, scope, existential):
        """Outer layer of a local sentence; ``scope`` holds the bound outer variables."""
        rng = self.rng
        if not scope:
            v = rng.choice(VAR_POOL)
            return Exists(v, self.local(depth, [v], existential))
        k = rng.random()
        if k < 0.35 or depth == 0:
            if rng.random() < 0.8:
                return self.loc(rng.choice(scope), depth)
            eq = Eq(rng.choice(scope), rng.choice(scope))
            return Not(eq) if rng.random() < 0.5 else eq
        if k < 0.55:
            return And(self.local(depth - 1, scope, existential), self.local(depth - 1, scope, existential))
        if k < 0.7:
            return Or(self.local(depth - 1, scope, existential), self.local(depth - 1, scope, existential))
        if not existential and k < 0.78:
            return Not(self.local(depth - 1, scope, existential))
        v = rng.choice(VAR_POOL)
        q = Forall if (not existential and rng.random() < 0.5) else Exists
        return q(v, self.local(depth - 1, sorted(set(scope) | {v}), existential))

    def qf(self, depth, centers):
        rng = self.rng
        k = rng.random()
        if k < 0.45 or depth == 0:
            if rng.random() < 0.8:
                return self.loc(rng.choice(centers), depth)
            eq = Eq(rng.choice(centers), rng.choice(centers))
            return Not(eq) if rng.random() < 0.5 else eq
        op = And if k < 0.75 else Or
        return op(self.qf(depth - 1, centers), self.qf(depth - 1, centers))


def random_formula(params: GenParams, kind: FragmentKind = DFO, rng: Optional[random.Random] = None,
                   centers: Optional[Sequence[str]] = None) -> Formula:
    """A random formula of the requested fragment.

    Sentences are produced for every kind except ``quantifierFreeLocal``,
    whose free variables are ``centers`` (default ``x_1``).  For local kinds
    ``params.radius`` is overridden by the kind's radius.
    """
    rng = rng or random.Random(params.seed)
    if kind.radius is not None:
        params = params.with_(radius=kind.radius)
    gen = _FormulaGen(params, rng)
    if kind.name == "dFO":
        return gen.dfo(params.depth, [])
    if kind.name == "localFO":
        return gen.local(params.depth, [], existential=False)
    if kind.name == "existentialLocal":
        return gen.local(params.depth, [], existential=True)
    return gen.qf(params.depth, list(centers or ["x_1"]))


def random_existential_sentence(params: GenParams, rng: Optional[random.Random] = None,
                                max_vars: int = 3) -> Formula:
    """``exists x1..xn. (conjunction of modalities and inequalities)``.

    Biased towards needing several elements: outer variables are often
    forced apart and modality bodies quantify.
    """
    rng = rng or random.Random(params.seed)
    gen = _FormulaGen(params, rng)
    n = rng.randint(1, max_vars)
    xs = [f"x{k}" for k in range(1, n + 1)]
    parts = [gen.loc(rng.choice(xs), params.depth) for _ in range(rng.randint(1, 2))]
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < 0.6:
                parts.append(Not(Eq(xs[a], xs[b])))
    if rng.random() < 0.3:
        parts.append(Or(gen.loc(rng.choice(xs), params.depth - 1), Eq(rng.choice(xs), rng.choice(xs))))
    rng.shuffle(parts)
    body = parts[0]
    for q in parts[1:]:
        body = And(body, q)
    for x in reversed(xs):
        body = Exists(x, body)
    return body


def random_distinct_sentence(params: GenParams, rng: Optional[random.Random] = None,
                             witnesses: int = 2) -> Formula:
    """``exists x y .. (pairwise distinct & random dFO body)``: never satisfiable at size 1."""
    rng = rng or random.Random(params.seed)
    gen = _FormulaGen(params, rng)
    xs = list(VAR_POOL[:witnesses])
    body = gen.dfo(params.depth, xs)
    for a in range(len(xs)):
        for b in range(a + 1, len(xs)):
            body = And(Not(Eq(xs[a], xs[b])), body)
    for x in reversed(xs):
        body = Exists(x, body)
    return body
