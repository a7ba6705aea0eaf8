"""Model checking of dFO and local formulas over finite structures."""

from __future__ import annotations

from typing import Mapping, Optional

from .errors import InputError
from .logic import And, Eq, Exists, Forall, Formula, Loc, Not, Or, Pred, Rel, free_vars
from .structures import DataStructure, view

__all__ = ["Evaluator", "evaluate", "evaluate_sentence", "holds_at"]


class Evaluator:
    """Recursive satisfaction checker bound to one structure.

    Views are memoised per ``(center, radius)`` for the evaluator's lifetime,
    so one instance should serve all the calls made for a single sentence.
    """

    def __init__(self, A: DataStructure):
        self.A = A
        self._views = {}

    def view_of(self, center: str, radius: int) -> "Evaluator":
        key = (center, radius)
        sub = self._views.get(key)
        if sub is None:
            sub = self._views[key] = Evaluator(view(self.A, center, radius))
        return sub

    def _elem(self, I, x):
        try:
            return I[x]
        except KeyError:
            raise InputError(f"unbound variable {x!r}") from None

    def eval(self, phi: Formula, I: Mapping[str, str]) -> bool:
        A = self.A
        match phi:
            case Pred(name, x):
                try:
                    return self._elem(I, x) in A.predicates[name]
                except KeyError:
                    raise InputError(f"unknown predicate {name!r}") from None
            case Rel(i, j, x, y):
                if not (1 <= i <= A.dim and 1 <= j <= A.dim):
                    raise InputError(f"field index out of range 1..{A.dim} in {phi}")
                return A.data[self._elem(I, x)][i - 1] == A.data[self._elem(I, y)][j - 1]
            case Eq(x, y):
                return self._elem(I, x) == self._elem(I, y)
            case Or(a, b):
                return self.eval(a, I) or self.eval(b, I)
            case And(a, b):
                return self.eval(a, I) and self.eval(b, I)
            case Not(a):
                return not self.eval(a, I)
            case Exists(v, a):
                return any(self.eval(a, {**I, v: e}) for e in A.universe)
            case Forall(v, a):
                return all(self.eval(a, {**I, v: e}) for e in A.universe)
            case Loc(r, x, a):
                return self.view_of(self._elem(I, x), r).eval(a, I)
        raise TypeError(f"not a formula: {phi!r}")


def _check_interpretation(A, I):
    for x, e in I.items():
        if e not in A.data:
            raise InputError(f"variable {x!r} bound to unknown element {e!r}")


def evaluate(A: DataStructure, phi: Formula, I: Optional[Mapping[str, str]] = None) -> bool:
    I = dict(I or {})
    _check_interpretation(A, I)
    missing = free_vars(phi) - set(I)
    if missing:
        raise InputError(f"unbound free variables {sorted(missing)}")
    return Evaluator(A).eval(phi, I)


def evaluate_sentence(A: DataStructure, phi: Formula) -> bool:
    fv = free_vars(phi)
    if fv:
        raise InputError(f"not a sentence: free variables {sorted(fv)}")
    return Evaluator(A).eval(phi, {})


def holds_at(A: DataStructure, phi: Formula, variables, elements) -> bool:
    """``A |= phi(a_1, ..., a_n)`` for the given variable/element pairing."""
    return evaluate(A, phi, dict(zip(variables, elements)))
