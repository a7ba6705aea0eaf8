"""Radius 1, any number of data values: reduction to dFO without data.

Inside a radius-1 view of ``a_p`` a field is either equal to some value of
``a_p`` or fresh, so the predicates ``U_p_i_j`` alone determine every
relation observable under the modality and no data value has to be kept.
"""

from __future__ import annotations

from typing import Optional, Sequence

from ..errors import FragmentError, InputError, PreconditionError, UnsupportedError
from ..evaluator import evaluate
from ..logic import (
    And, Eq, Exists, Forall, Formula, Loc, Not, Or, Pred, Rel, Signature,
    conj, disj, exists_many, existential_local, falsum, free_vars, implies,
    predicates_of, quantifier_free_local, require_fragment, to_prenex_existential,
)
from ..structures import DataStructure
from .common import (
    Abstraction, U, center_value_classes, check_centers, check_no_collision,
    helper_vars, omega_name, omega_names, require_omega,
)
from .radius2 import default_centers

__all__ = [
    "abstract_r1", "translate_r1", "build_psi_wf", "is_well_formed_r1",
    "reconstruct_r1", "reduce_r1", "psi_b1", "psi_rel_r1", "psi_rel_far",
]


def abstract_r1(A: DataStructure, centers: Sequence[str]) -> Abstraction:
    if A.dim < 1:
        raise UnsupportedError("radius-1 abstraction needs D >= 1")
    centers = check_centers(A, centers)
    check_no_collision(A.predicates, len(centers), A.dim)
    fields = range(1, A.dim + 1)
    preds = dict(A.predicates)
    for p, a in enumerate(centers, 1):
        for i in fields:
            for j in fields:
                target = A.data[a][i - 1]
                preds[omega_name(p, i, j)] = frozenset(
                    b for b in A.universe if A.data[b][j - 1] == target
                )
    data = {b: () for b in A.universe}
    return Abstraction(DataStructure(A.universe, 0, preds, data), centers)


def psi_b1(p: int, j: int, dim: int, y: str) -> Formula:
    return disj(*(U(p, i, j, y) for i in range(1, dim + 1)))


def psi_rel_r1(j: int, k: int, p: int, dim: int, y: str, z: str) -> Formula:
    return conj(
        psi_b1(p, j, dim, y),
        psi_b1(p, k, dim, z),
        disj(*(And(U(p, i, j, y), U(p, i, k, z)) for i in range(1, dim + 1))),
    )


def psi_rel_far(j: int, k: int, p: int, dim: int, y: str, z: str, literal: bool = False) -> Formula:
    """Both compared fields outside the radius-1 ball of ``a_p``, and ``y = z``.

    ``literal=True`` requires *every* field of ``y`` and ``z`` to be outside
    the ball; that variant is wrong whenever some other field of ``y`` is
    inside, since ``rel(j,j,y,y)`` always holds.
    """
    if j != k:
        return falsum(y)
    if literal:
        outside = [And(Not(psi_b1(p, i, dim, y)), Not(psi_b1(p, i, dim, z)))
                   for i in range(1, dim + 1)]
        return conj(*outside, Eq(y, z))
    return conj(Not(psi_b1(p, j, dim, y)), Not(psi_b1(p, k, dim, z)), Eq(y, z))


def translate_r1(matrix: Formula, centers: Sequence[str], dim: int, sigma=None,
                 literal: bool = False) -> Formula:
    centers = tuple(centers)
    if dim < 1:
        raise UnsupportedError("radius-1 translation needs D >= 1")
    require_fragment(matrix, Signature(None, dim), quantifier_free_local(1))
    check_no_collision(set(sigma or ()) | predicates_of(matrix), len(centers), dim)
    index = {x: p for p, x in enumerate(centers, 1)}

    def outer(phi):
        match phi:
            case Or(a, b):
                return Or(outer(a), outer(b))
            case And(a, b):
                return And(outer(a), outer(b))
            case Not(a):
                return Not(outer(a))
            case Eq():
                return phi
            case Loc(_, x, body):
                if x not in index:
                    raise FragmentError(f"modality subject {x!r} is not a center variable")
                return local(body, index[x])
        raise FragmentError(f"unexpected node in quantifier-free matrix: {phi!r}")

    def local(phi, p):
        match phi:
            case Rel(j, k, y, z):
                parts = [psi_rel_r1(j, k, p, dim, y, z)]
                if j == k:
                    parts.append(psi_rel_far(j, k, p, dim, y, z, literal))
                return disj(*parts)
            case Pred() | Eq():
                return phi
            case Or(a, b):
                return Or(local(a, p), local(b, p))
            case And(a, b):
                return And(local(a, p), local(b, p))
            case Not(a):
                return Not(local(a, p))
            case Exists(v, a):
                return Exists(v, local(a, p))
            case Forall(v, a):
                return Forall(v, local(a, p))
        raise FragmentError(f"unexpected node under a local modality: {phi!r}")

    return outer(matrix)


def build_psi_wf(n: int, dim: int, variables: Optional[Sequence[str]] = None) -> Formula:
    """Transitivity and reflexivity; no uniqueness clause since no data is left."""
    if n < 1 or dim < 1:
        raise InputError("need at least one center and D >= 1")
    xs = tuple(variables) if variables is not None else default_centers(n)
    if len(xs) != n:
        raise InputError(f"expected {n} center variables, got {len(xs)}")
    y, z = helper_vars(xs)
    ps, fs = range(1, n + 1), range(1, dim + 1)
    tran = Forall(y, Forall(z, conj(*(
        implies(conj(U(p, i, j, y), U(p, i, l, z), U(q, k, j, y)), U(q, k, l, z))
        for p in ps for q in ps for i in fs for j in fs for k in fs for l in fs
    ))))
    refl = conj(*(U(p, i, i, xs[p - 1]) for p in ps for i in fs))
    return And(tran, refl)


def is_well_formed_r1(B: DataStructure, centers: Sequence[str], dim: int) -> bool:
    centers = check_centers(B, centers)
    require_omega(B, len(centers), dim)
    xs = default_centers(len(centers))
    return evaluate(B, build_psi_wf(len(centers), dim, xs), dict(zip(xs, centers)))


def reconstruct_r1(B: DataStructure, centers: Sequence[str], dim: int) -> DataStructure:
    """A D-data structure whose radius-1 abstraction w.r.t. ``centers`` is ``B``."""
    centers = check_centers(B, centers)
    if not is_well_formed_r1(B, centers, dim):
        raise PreconditionError("structure is not a well-formed abstraction")
    n = len(centers)
    g = {}
    for idx, cls in enumerate(center_value_classes(B, centers, dim), 1):
        for pair in cls:
            g[pair] = idx
    fresh = max(g.values()) + 1
    data = {}
    for b in B.universe:
        row = []
        for j in range(1, dim + 1):
            hit = next(((p, i) for p in range(1, n + 1) for i in range(1, dim + 1)
                        if b in B.predicates[omega_name(p, i, j)]), None)
            if hit is None:
                row.append(fresh)
                fresh += 1
            else:
                row.append(g[hit])
        data[b] = tuple(row)
    omega = set(omega_names(n, dim))
    preds = {k: v for k, v in B.predicates.items() if k not in omega}
    return DataStructure(B.universe, dim, preds, data)


def reduce_r1(phi: Formula, dim: int, sigma=None, literal: bool = False) -> Formula:
    """Equisatisfiable dFO sentence without data for a radius-1 sentence."""
    require_fragment(phi, Signature(None, dim), existential_local(1))
    if free_vars(phi):
        raise FragmentError(f"not a sentence: free variables {sorted(free_vars(phi))}")
    pre = to_prenex_existential(phi, radius=1)
    xs = pre.variables
    target = And(translate_r1(pre.matrix, xs, dim, sigma, literal), build_psi_wf(len(xs), dim, xs))
    return exists_many(xs, target)
