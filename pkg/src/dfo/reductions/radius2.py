"""Radius 2, two data values: reduction to first-order logic over 1-data structures.

Relative to centers ``a_1..a_n``, an element's membership in the radius-1 and
radius-2 balls of ``a_p`` is decided by which of its values it shares with
``a_p``.  The abstraction keeps that information in predicates ``U_p_i_j``
and stores in the single remaining field the value that is *not* shared with
any center (or a fresh one).
"""

from __future__ import annotations

from typing import Optional, Sequence

from ..errors import FragmentError, InputError, PreconditionError, UnsupportedError
from ..evaluator import evaluate
from ..logic import (
    And, Eq, Exists, Forall, Formula, Loc, Not, Or, Pred, Rel, Signature,
    conj, disj, exists_many, existential_local, falsum, free_vars, implies,
    predicates_of, quantifier_free_local,
    require_fragment, to_prenex_existential,
)
from ..structures import DataStructure, _fresh_start, values_of
from .common import (
    Abstraction, U, center_value_classes, check_centers, check_no_collision,
    helper_vars, omega_name, omega_names, require_omega,
)

__all__ = [
    "abstract_r2", "translate_r2", "build_phi_wf", "is_well_formed",
    "reconstruct_r2", "reduce_r2d2",
    "phi_b1", "phi_b2", "phi_b2_minus_b1", "phi_rel_r1", "phi_rel_r2", "phi_rel_far",
]

FIELDS = (1, 2)


def abstract_r2(A: DataStructure, centers: Sequence[str]) -> Abstraction:
    if A.dim != 2:
        raise UnsupportedError(f"radius-2 abstraction needs D=2, got D={A.dim}")
    centers = check_centers(A, centers)
    n = len(centers)
    check_no_collision(A.predicates, n, 2)
    preds = dict(A.predicates)
    for p, a in enumerate(centers, 1):
        for i in FIELDS:
            for j in FIELDS:
                target = A.data[a][i - 1]
                preds[omega_name(p, i, j)] = frozenset(
                    b for b in A.universe if A.data[b][j - 1] == target
                )
    shared = values_of(A, centers)
    fresh = _fresh_start(A)
    data = {}
    for b in A.universe:
        v1, v2 = A.data[b]
        if v1 in shared and v2 not in shared:
            data[b] = (v2,)
        elif v1 not in shared and v2 in shared:
            data[b] = (v1,)
        else:
            data[b] = (fresh,)
            fresh += 1
    return Abstraction(DataStructure(A.universe, 1, preds, data), centers)


# --------------------------------------------------------------------------
# Helper formulas over Σ ∪ Ω_n (one data value, written rel(1,1,.,.))


def phi_b1(p: int, j: int, y: str) -> Formula:
    """The j-th field of ``y`` lies in the radius-1 ball of ``a_p``."""
    return Or(U(p, 1, j, y), U(p, 2, j, y))


def phi_b2(p: int, y: str) -> Formula:
    """Some (hence every) field of ``y`` lies in the radius-2 ball of ``a_p``."""
    return Or(phi_b1(p, 1, y), phi_b1(p, 2, y))


def phi_b2_minus_b1(p: int, j: int, y: str) -> Formula:
    return And(phi_b2(p, y), Not(phi_b1(p, j, y)))


def phi_rel_r1(j: int, k: int, p: int, y: str, z: str) -> Formula:
    return conj(
        phi_b1(p, j, y),
        phi_b1(p, k, z),
        disj(*(And(U(p, i, j, y), U(p, i, k, z)) for i in FIELDS)),
    )


def phi_rel_r2(j: int, k: int, p: int, n: int, y: str, z: str) -> Formula:
    via_center = disj(
        *(And(U(q, l, j, y), U(q, l, k, z)) for q in range(1, n + 1) for l in FIELDS)
    )
    return conj(
        phi_b2_minus_b1(p, j, y),
        phi_b2_minus_b1(p, k, z),
        Or(Rel(1, 1, y, z), via_center),
    )


def phi_rel_far(j: int, k: int, p: int, y: str, z: str) -> Formula:
    if j != k:
        return falsum(y)
    return conj(Not(phi_b2(p, y)), Not(phi_b2(p, z)), Eq(y, z))


# --------------------------------------------------------------------------
# Translation


def translate_r2(matrix: Formula, centers: Sequence[str], sigma=None) -> Formula:
    """Translate a quantifier-free radius-2 matrix with free variables ``centers``."""
    centers = tuple(centers)
    require_fragment(matrix, Signature(None, 2), quantifier_free_local(2))
    check_no_collision(set(sigma or ()) | predicates_of(matrix), len(centers), 2)
    index = {x: p for p, x in enumerate(centers, 1)}
    return _translate_outer(matrix, index, len(centers))


def _translate_outer(phi, index, n):
    match phi:
        case Or(a, b):
            return Or(_translate_outer(a, index, n), _translate_outer(b, index, n))
        case And(a, b):
            return And(_translate_outer(a, index, n), _translate_outer(b, index, n))
        case Not(a):
            return Not(_translate_outer(a, index, n))
        case Eq():
            return phi
        case Loc(_, x, body):
            if x not in index:
                raise FragmentError(f"modality subject {x!r} is not a center variable")
            return _translate_local(body, index[x], n)
    raise FragmentError(f"unexpected node in quantifier-free matrix: {phi!r}")


def _translate_local(phi, p, n):
    match phi:
        case Rel(j, k, y, z):
            parts = [phi_rel_r1(j, k, p, y, z), phi_rel_r2(j, k, p, n, y, z)]
            if j == k:
                parts.append(phi_rel_far(j, k, p, y, z))
            return disj(*parts)
        case Pred() | Eq():
            return phi
        case Or(a, b):
            return Or(_translate_local(a, p, n), _translate_local(b, p, n))
        case And(a, b):
            return And(_translate_local(a, p, n), _translate_local(b, p, n))
        case Not(a):
            return Not(_translate_local(a, p, n))
        case Exists(v, a):
            return Exists(v, _translate_local(a, p, n))
        case Forall(v, a):
            return Forall(v, _translate_local(a, p, n))
    raise FragmentError(f"unexpected node under a local modality: {phi!r}")


# --------------------------------------------------------------------------
# Well-formedness


def default_centers(n: int) -> tuple:
    return tuple(f"x_{p}" for p in range(1, n + 1))


def build_phi_wf(n: int, variables: Optional[Sequence[str]] = None) -> Formula:
    """Transitivity, reflexivity and uniqueness of an abstraction with n centers."""
    if n < 1:
        raise InputError("need at least one center")
    xs = tuple(variables) if variables is not None else default_centers(n)
    if len(xs) != n:
        raise InputError(f"expected {n} center variables, got {len(xs)}")
    y, z = helper_vars(xs)
    ps = range(1, n + 1)

    tran = Forall(y, Forall(z, conj(*(
        implies(conj(U(p, i, j, y), U(p, i, l, z), U(q, k, j, y)), U(q, k, l, z))
        for p in ps for q in ps
        for i in FIELDS for j in FIELDS for k in FIELDS for l in FIELDS
    ))))
    refl = conj(*(U(p, i, i, xs[p - 1]) for p in ps for i in FIELDS))
    touches_both = conj(*(disj(*(U(p, i, j, y) for p in ps for i in FIELDS)) for j in FIELDS))
    touches_none = conj(*(Not(U(p, i, j, y)) for j in FIELDS for p in ps for i in FIELDS))
    uniq = Forall(y, implies(
        Or(touches_both, touches_none),
        Forall(z, implies(Rel(1, 1, y, z), Eq(y, z))),
    ))
    return conj(tran, refl, uniq)


def is_well_formed(B: DataStructure, centers: Sequence[str]) -> bool:
    if B.dim != 1:
        raise InputError(f"abstractions of the radius-2 reduction have D=1, got D={B.dim}")
    centers = check_centers(B, centers)
    require_omega(B, len(centers), 2)
    xs = default_centers(len(centers))
    return evaluate(B, build_phi_wf(len(centers), xs), dict(zip(xs, centers)))


def reconstruct_r2(B: DataStructure, centers: Sequence[str]) -> DataStructure:
    """A 2-data structure whose abstraction w.r.t. ``centers`` is ``B``.

    Center values come from one integer per class of ``(p, i)`` pairs; fields
    touching no center keep B's value, elements touching no center at all get
    a shared outside value.
    """
    centers = check_centers(B, centers)
    if not is_well_formed(B, centers):
        raise PreconditionError("structure is not a well-formed abstraction")
    n = len(centers)
    image_f = {B.data[b][0] for b in B.universe}
    g = {}
    for idx, cls in enumerate(center_value_classes(B, centers, 2)):
        for pair in cls:
            g[pair] = max(image_f) + 1 + idx
    d_out = max(set(g.values()) | image_f) + 1

    def touching(b, j):
        return [(p, i) for p in range(1, n + 1) for i in FIELDS
                if b in B.predicates[omega_name(p, i, j)]]

    data = {}
    for b in B.universe:
        row = []
        for j in FIELDS:
            hits = touching(b, j)
            if hits:
                row.append(g[hits[0]])
            elif touching(b, 3 - j):
                row.append(B.data[b][0])
            else:
                row.append(d_out)
        data[b] = tuple(row)
    omega = set(omega_names(n, 2))
    preds = {k: v for k, v in B.predicates.items() if k not in omega}
    return DataStructure(B.universe, 2, preds, data)


def reduce_r2d2(phi: Formula, sigma=None) -> Formula:
    """Equisatisfiable dFO sentence over one data value for a radius-2 sentence."""
    require_fragment(phi, Signature(None, 2), existential_local(2))
    if free_vars(phi):
        raise FragmentError(f"not a sentence: free variables {sorted(free_vars(phi))}")
    pre = to_prenex_existential(phi, radius=2)
    xs = pre.variables
    if not xs:
        raise FragmentError("sentence has no outer variables")
    target = And(translate_r2(pre.matrix, xs, sigma), build_phi_wf(len(xs), xs))
    return exists_many(xs, target)
