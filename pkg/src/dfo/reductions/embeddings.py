"""Embeddings of full dFO into the existential local fragments.

``add_ge`` adds one ``ge``-labelled element per pair of present values so
that every field is within distance 3 of every other; ``relativize`` makes
a formula ignore those helpers.  Padding with a constant field puts a whole
structure inside every radius-2 ball.
"""

from __future__ import annotations

from ..errors import FragmentError, InputError, UnsupportedError
from ..logic import (
    DFO, And, Eq, Exists, Forall, Formula, Loc, Not, Or, Pred, Rel, Signature,
    free_vars, max_field_index, predicates_of, require_fragment,
)
from ..structures import DataStructure, values_of

__all__ = ["add_ge", "minus_ge", "relativize", "embed_r3", "embed_pad"]

GE = "ge"


def _pair_id(d1, d2, taken):
    name = f"ge_{d1}_{d2}"
    while name in taken:
        name += "_"
    return name


def add_ge(A: DataStructure, ge: str = GE) -> DataStructure:
    if A.dim != 2:
        raise UnsupportedError(f"add_ge is defined for D=2, got D={A.dim}")
    if ge in A.predicates:
        raise InputError(f"predicate {ge!r} is already used")
    vals = sorted(values_of(A, A.universe))
    taken = set(A.universe)
    universe = list(A.universe)
    data = dict(A.data)
    helpers = []
    for d1 in vals:
        for d2 in vals:
            e = _pair_id(d1, d2, taken)
            taken.add(e)
            universe.append(e)
            helpers.append(e)
            data[e] = (d1, d2)
    preds = dict(A.predicates)
    preds[ge] = frozenset(helpers)
    return DataStructure(tuple(universe), 2, preds, data)


def minus_ge(B: DataStructure, ge: str = GE) -> DataStructure:
    marked = B.predicates.get(ge, frozenset())
    keep = [e for e in B.universe if e not in marked]
    if not keep:
        raise InputError(f"every element carries {ge!r}; the result would be empty")
    out = B.restrict(keep)
    return out.replace(predicates={k: v for k, v in out.predicates.items() if k != ge})


def relativize(phi: Formula, ge: str = GE) -> Formula:
    """Restrict every quantifier of a dFO formula to elements outside ``ge``."""
    require_fragment(phi, None, DFO)
    if ge in predicates_of(phi):
        raise InputError(f"predicate {ge!r} already occurs in the formula")
    return _rel(phi, ge)


def _rel(phi, ge):
    match phi:
        case Pred() | Rel() | Eq():
            return phi
        case Or(a, b):
            return Or(_rel(a, ge), _rel(b, ge))
        case And(a, b):
            return And(_rel(a, ge), _rel(b, ge))
        case Not(a):
            return Not(_rel(a, ge))
        case Exists(v, a):
            return Exists(v, And(Not(Pred(ge, v)), _rel(a, ge)))
        case Forall(v, a):
            return Forall(v, Or(Pred(ge, v), _rel(a, ge)))
    raise FragmentError(f"unexpected node in dFO formula: {phi!r}")


def _require_sentence(phi):
    if free_vars(phi):
        raise FragmentError(f"not a sentence: free variables {sorted(free_vars(phi))}")


def embed_r3(phi: Formula, ge: str = GE) -> Formula:
    """``exists x. loc[3](x){relativize(phi)}`` for a dFO sentence over 2 values."""
    require_fragment(phi, Signature(None, 2), DFO)
    _require_sentence(phi)
    return Exists("x", Loc(3, "x", relativize(phi, ge)))


def embed_pad(phi: Formula, k: int, r: int = 2) -> Formula:
    """``exists x. loc[r](x){phi}``, read over (k+1)-data structures."""
    if r != 2 or k not in (1, 2):
        raise UnsupportedError(f"padding embedding is implemented for r=2, k in {{1,2}}; got r={r}, k={k}")
    require_fragment(phi, Signature(None, k), DFO)
    _require_sentence(phi)
    if max_field_index(phi) > k:
        raise FragmentError(f"formula mentions fields beyond {k}")
    return Exists("x", Loc(2, "x", phi))
