"""Bounded finite-model finding for dFO and local FO.

For each universe size the sentence is grounded into a propositional
circuit: one variable per (predicate, element) and one per pair of fields
meaning "these two fields carry the same value", kept transitive by
explicit clauses.  A model of the circuit is a value partition plus
predicate sets, which is all a sentence can observe.  Views are grounded
symbolically: ball membership is unrolled reachability over the equality
variables.

``method="enumerate"`` walks the structures one by one instead and serves
as an independent oracle for the grounding route.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional

from .errors import FragmentError, InputError, UnsupportedError
from .evaluator import evaluate_sentence, holds_at
from .logic import (
    DFO, And, Eq, Exists, Forall, Formula, Loc, Not, Or, Pred, Rel, Signature,
    existential_local, formula_size, free_vars, local_fo, loc_radii,
    max_field_index, predicates_of, require_fragment, to_prenex_existential,
)
from .reductions import reconstruct_r1, reconstruct_r2, reduce_r1, reduce_r2d2
from .reductions.common import UnionFind
from .sat import FALSE, TRUE, Circuit
from .structures import DataStructure

__all__ = [
    "Verdict", "SolveResult", "enumerate_structures", "bounded_sat",
    "solve_existential_local", "infer_radius", "reduction_supported",
]


class Verdict(str, Enum):
    SAT = "SAT"
    UNSAT = "UNSAT_UP_TO_BOUND"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SolveResult:
    verdict: Verdict
    witness: Optional[DataStructure]
    bound: int
    stats: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if (self.verdict is Verdict.SAT) != (self.witness is not None):
            raise ValueError("a SAT verdict needs a witness and only then")

    @property
    def sat(self) -> bool:
        return self.verdict is Verdict.SAT

    @property
    def size(self) -> Optional[int]:
        return len(self.witness.universe) if self.witness is not None else None

    def summary(self) -> str:
        if self.sat:
            return f"SAT size={self.size}"
        return f"UNSAT_UP_TO_BOUND bound={self.bound}"


def _universe(n: int) -> tuple:
    return tuple(f"e{k}" for k in range(1, n + 1))


def _partitions(k: int) -> Iterator[tuple]:
    """Restricted growth strings of length k, values starting at 1, lexicographic."""
    if k == 0:
        yield ()
        return
    word = [1] * k

    def rec(pos, top):
        if pos == k:
            yield tuple(word)
            return
        for v in range(1, top + 2):
            word[pos] = v
            yield from rec(pos + 1, max(top, v))

    word[0] = 1
    yield from rec(1, 1)


def enumerate_structures(sigma, dim: int, n: int, canonical: bool = True) -> Iterator[DataStructure]:
    """Structures with universe ``e1..en`` over ``sigma`` and ``dim`` values.

    With ``canonical=True`` one value tuple is produced per value partition
    (every data-equivalence class is hit exactly once per predicate choice);
    otherwise every tuple over ``1..dim*n`` is produced.  Order: value tuples
    lexicographically, then predicate bitmasks.
    """
    if n < 1:
        raise InputError("structure size must be at least 1")
    if dim < 0:
        raise InputError("dimension must be nonnegative")
    names = sorted(sigma or ())
    universe = _universe(n)
    width = dim * n
    if canonical:
        tuples = _partitions(width)
    else:
        tuples = itertools.product(range(1, width + 1), repeat=width)
    masks = range(1 << n)
    for values in tuples:
        data = {e: tuple(values[k * dim:(k + 1) * dim]) for k, e in enumerate(universe)}
        for choice in itertools.product(masks, repeat=len(names)):
            preds = {
                name: frozenset(e for k, e in enumerate(universe) if mask >> k & 1)
                for name, mask in zip(names, choice)
            }
            yield DataStructure(universe, dim, preds, data)


# --------------------------------------------------------------------------
# Grounding


class _Context:
    """Equality of fields in the structure being built, or in a view of it."""

    def __init__(self, grounder, parent=None, center=None, radius=None):
        self.g = grounder
        self.parent = parent
        self.center = center
        self.radius = radius
        self._eq = {}
        self._inside = None

    def eq(self, u: int, v: int):
        if u == v:
            return TRUE
        if u > v:
            u, v = v, u
        if self.parent is None:
            return self.g.eq_vars[u, v]
        key = (u, v)
        lit = self._eq.get(key)
        if lit is None:
            inside = self.inside()
            lit = self._eq[key] = self.g.c.and_((inside[u], inside[v], self.parent.eq(u, v)))
        return lit

    def inside(self):
        if self._inside is None:
            g, parent = self.g, self.parent
            D = g.dim
            reach = [TRUE if u // D == self.center else FALSE for u in range(g.nfields)]
            for _ in range(self.radius):
                step = []
                for u in range(g.nfields):
                    if reach[u] == TRUE:
                        step.append(TRUE)
                        continue
                    opts = [reach[u]]
                    for v in range(g.nfields):
                        if v == u or reach[v] == FALSE:
                            continue
                        adj = TRUE if u // D == v // D else parent.eq(u, v)
                        opts.append(g.c.and_((reach[v], adj)))
                    step.append(g.c.or_(opts))
                if step == reach:
                    break
                reach = step
            self._inside = reach
        return self._inside


class _Grounder:
    def __init__(self, size: int, dim: int, sigma):
        self.size, self.dim = size, dim
        self.nfields = size * dim
        self.c = Circuit()
        new = self.c.var
        self.eq_vars = {(u, v): new() for u in range(self.nfields) for v in range(u + 1, self.nfields)}
        add = self.c.solver.add_clause
        e = self.eq_vars
        for u, v, w in itertools.combinations(range(self.nfields), 3):
            a, b, c = e[u, v], e[v, w], e[u, w]
            add((-a, -b, c))
            add((-a, -c, b))
            add((-b, -c, a))
        self.pred_vars = {(p, k): new() for p in sorted(sigma) for k in range(size)}
        self.root = _Context(self)
        self._views = {}
        self._memo = {}
        self._fv = {}

    def view(self, ctx, center, radius):
        key = (id(ctx), center, radius)
        sub = self._views.get(key)
        if sub is None:
            sub = self._views[key] = _Context(self, ctx, center, radius)
        return sub

    def fv(self, phi):
        k = id(phi)
        out = self._fv.get(k)
        if out is None:
            out = self._fv[k] = (phi, tuple(sorted(free_vars(phi))))
        return out[1]

    def ground(self, phi, env, ctx):
        key = (id(phi), tuple(env[v] for v in self.fv(phi)), id(ctx))
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        c = self.c
        match phi:
            case Pred(name, x):
                out = self.pred_vars[name, env[x]]
            case Rel(i, j, x, y):
                D = self.dim
                out = ctx.eq(env[x] * D + i - 1, env[y] * D + j - 1)
            case Eq(x, y):
                out = TRUE if env[x] == env[y] else FALSE
            case Or(a, b):
                out = c.or_((self.ground(a, env, ctx), self.ground(b, env, ctx)))
            case And(a, b):
                out = c.and_((self.ground(a, env, ctx), self.ground(b, env, ctx)))
            case Not(a):
                out = c.neg(self.ground(a, env, ctx))
            case Exists(v, a):
                out = c.or_([self.ground(a, {**env, v: k}, ctx) for k in range(self.size)])
            case Forall(v, a):
                out = c.and_([self.ground(a, {**env, v: k}, ctx) for k in range(self.size)])
            case Loc(r, x, a):
                out = self.ground(a, env, self.view(ctx, env[x], r))
            case _:
                raise TypeError(f"not a formula: {phi!r}")
        self._memo[key] = out
        return out

    def witness(self) -> DataStructure:
        value = self.c.value
        uf = UnionFind(range(self.nfields))
        for (u, v), lit in self.eq_vars.items():
            if value(lit):
                uf.union(u, v)
        number = {}
        vals = []
        for u in range(self.nfields):
            vals.append(number.setdefault(uf.find(u), len(number) + 1))
        universe = _universe(self.size)
        D = self.dim
        data = {e: tuple(vals[k * D:(k + 1) * D]) for k, e in enumerate(universe)}
        preds = {}
        for (p, k), lit in self.pred_vars.items():
            preds.setdefault(p, set())
            if value(lit):
                preds[p].add(universe[k])
        return DataStructure(universe, D, preds, data)


def _ground_at(phi, sigma, dim, size):
    g = _Grounder(size, dim, sigma)
    g.c.assert_(g.ground(phi, {}, g.root))
    sat = g.c.solver.solve()
    info = {"vars": g.c.solver.nvars, "conflicts": g.c.solver.conflicts}
    return (g.witness() if sat else None), info


def _check_solvable(phi, sigma, dim):
    radii = loc_radii(phi)
    if len(radii) > 1:
        raise FragmentError(f"mixed modality radii {sorted(radii)}")
    kind = local_fo(next(iter(radii))) if radii else DFO
    require_fragment(phi, Signature(frozenset(sigma), dim), kind)
    fv = free_vars(phi)
    if fv:
        raise FragmentError(f"not a sentence: free variables {sorted(fv)}")


def bounded_sat(phi: Formula, sigma=None, dim: Optional[int] = None, max_size: int = 4,
                method: str = "ground", min_size: int = 1) -> SolveResult:
    """Search structures of size ``min_size..max_size`` for a model of ``phi``.

    ``sigma`` defaults to the predicates of ``phi`` and ``dim`` to its largest
    field index.  The first (hence smallest) model found is returned.
    """
    if max_size < 1:
        raise InputError("max_size must be at least 1")
    sigma = frozenset(predicates_of(phi) if sigma is None else sigma)
    dim = max_field_index(phi) if dim is None else dim
    _check_solvable(phi, sigma, dim)
    if method not in ("ground", "enumerate"):
        raise InputError(f"unknown method {method!r}")
    t0 = time.perf_counter()
    stats = {"method": method, "structures": 0, "sizes": 0}
    for size in range(min_size, max_size + 1):
        stats["sizes"] += 1
        if method == "ground":
            model, info = _ground_at(phi, sigma, dim, size)
            stats["structures"] += 1
            stats["vars"] = stats.get("vars", 0) + info["vars"]
            stats["conflicts"] = stats.get("conflicts", 0) + info["conflicts"]
        else:
            model = None
            for A in enumerate_structures(sigma, dim, size):
                stats["structures"] += 1
                if evaluate_sentence(A, phi):
                    model = A
                    break
        if model is not None:
            if not evaluate_sentence(model, phi):
                raise AssertionError("internal error: extracted witness does not satisfy the sentence")
            stats["time"] = time.perf_counter() - t0
            return SolveResult(Verdict.SAT, model, max_size, stats)
    stats["time"] = time.perf_counter() - t0
    return SolveResult(Verdict.UNSAT, None, max_size, stats)


# --------------------------------------------------------------------------
# Existential local fragment: direct vs. via reduction


def reduction_supported(r: int, dim: int) -> bool:
    return (r, dim) == (2, 2) or (r == 1 and dim >= 1)


def _unsupported(r, dim):
    if (r >= 3 and dim >= 2) or (r == 2 and dim >= 3):
        zone = "undecidable zone"
    else:
        zone = "no reduction available"
    return UnsupportedError(
        f"{zone}: via_reduction supports radius 2 with D=2 and radius 1 with D>=1, "
        f"got radius {r} with D={dim}"
    )


def infer_radius(phi: Formula, dim: int, radius: Optional[int] = None) -> int:
    radii = loc_radii(phi)
    if len(radii) > 1:
        raise FragmentError(f"mixed modality radii {sorted(radii)}")
    if radii:
        r = next(iter(radii))
        if radius is not None and radius != r:
            raise FragmentError(f"formula uses radius {r}, but radius {radius} was requested")
        return r
    if radius is not None:
        return radius
    return 2 if dim == 2 else 1


def _strip_exists(phi, n):
    for _ in range(n):
        phi = phi.body
    return phi


def solve_existential_local(phi: Formula, dim: int, strategy: str = "direct", max_size: int = 4,
                            radius: Optional[int] = None, sigma=None, method: str = "ground") -> SolveResult:
    """Decide an existential local sentence up to ``max_size`` elements.

    ``via_reduction`` solves the reduced sentence, rebuilds a D-data model
    from the abstract witness and re-checks it against ``phi``.  The
    reductions preserve the universe, so both strategies find models of the
    same minimal size.
    """
    r = infer_radius(phi, dim, radius)
    sigma = frozenset(predicates_of(phi) if sigma is None else sigma)
    require_fragment(phi, Signature(sigma, dim), existential_local(r))
    if free_vars(phi):
        raise FragmentError(f"not a sentence: free variables {sorted(free_vars(phi))}")
    if strategy == "direct":
        res = bounded_sat(phi, sigma, dim, max_size, method)
        res.stats["strategy"] = "direct"
        return res
    if strategy != "via_reduction":
        raise InputError(f"unknown strategy {strategy!r}")
    if not reduction_supported(r, dim):
        raise _unsupported(r, dim)

    t0 = time.perf_counter()
    pre = to_prenex_existential(phi, radius=r)
    n = len(pre.variables)
    if r == 2:
        target, tdim = reduce_r2d2(phi, sigma), 1
    else:
        target, tdim = reduce_r1(phi, dim, sigma), 0
    tsigma = sigma | predicates_of(target)
    res = bounded_sat(target, tsigma, tdim, max_size, method)
    stats = dict(res.stats, strategy="via_reduction", target_size=formula_size(target))
    if not res.sat:
        stats["time"] = time.perf_counter() - t0
        return SolveResult(Verdict.UNSAT, None, max_size, stats)

    B = res.witness
    matrix = _strip_exists(target, n)
    centers = next(
        (t for t in itertools.product(B.universe, repeat=n) if holds_at(B, matrix, pre.variables, t)),
        None,
    )
    if centers is None:
        raise AssertionError("internal error: abstract witness has no center tuple")
    A = reconstruct_r2(B, centers) if r == 2 else reconstruct_r1(B, centers, dim)
    if not evaluate_sentence(A, phi):
        raise AssertionError("internal error: reconstructed model does not satisfy the sentence")
    stats.update(time=time.perf_counter() - t0, abstract_witness=B, centers=centers)
    return SolveResult(Verdict.SAT, A, max_size, stats)
