"""Formula syntax: AST, free variables, substitution, fragments, prenexing.

The core connectives are ``Pred``, ``Rel``, ``Eq``, ``Or``, ``Not``, ``Exists``
and the local modality ``Loc``.  ``And`` and ``Forall`` are kept as
first-class nodes; :func:`eliminate_abbreviations` rewrites them away.

``Loc(r, x, body)`` is *not* a binder: its subject ``x`` is a free occurrence
and the body's free ``x`` denotes the same element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Optional

from .errors import FragmentError

__all__ = [
    "Formula", "Pred", "Rel", "Eq", "Or", "And", "Not", "Exists", "Forall", "Loc",
    "conj", "disj", "neq", "implies", "falsum", "exists_many",
    "free_vars", "all_vars", "formula_size", "predicates_of", "max_field_index",
    "loc_radii", "substitute", "eliminate_abbreviations", "fresh_name",
    "Signature", "FragmentKind", "DFO", "local_fo", "existential_local",
    "quantifier_free_local", "Violation", "FragmentReport", "check_fragment",
    "require_fragment", "PrenexExistential", "to_prenex_existential",
]


class Formula:
    __slots__ = ()

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)

    def __str__(self):
        from .parser import serialize_formula

        return serialize_formula(self)


@dataclass(frozen=True, slots=True)
class Pred(Formula):
    name: str
    var: str


@dataclass(frozen=True, slots=True)
class Rel(Formula):
    i: int
    j: int
    x: str
    y: str


@dataclass(frozen=True, slots=True)
class Eq(Formula):
    x: str
    y: str


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True, slots=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True, slots=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True, slots=True)
class Loc(Formula):
    radius: int
    var: str
    body: Formula


def conj(*parts: Formula) -> Formula:
    """Left-nested conjunction; needs at least one operand."""
    return reduce(And, parts)


def disj(*parts: Formula) -> Formula:
    return reduce(Or, parts)


def neq(x: str, y: str) -> Formula:
    return Not(Eq(x, y))


def implies(a: Formula, b: Formula) -> Formula:
    return Or(Not(a), b)


def falsum(var: str) -> Formula:
    """Canonical contradiction ``!(v = v)``; stays inside every fragment."""
    return Not(Eq(var, var))


def exists_many(variables: Iterable[str], body: Formula) -> Formula:
    for v in reversed(list(variables)):
        body = Exists(v, body)
    return body


def free_vars(phi: Formula) -> frozenset:
    match phi:
        case Pred(_, x):
            return frozenset((x,))
        case Rel(_, _, x, y) | Eq(x, y):
            return frozenset((x, y))
        case Or(a, b) | And(a, b):
            return free_vars(a) | free_vars(b)
        case Not(a):
            return free_vars(a)
        case Exists(v, a) | Forall(v, a):
            return free_vars(a) - {v}
        case Loc(_, x, a):
            return free_vars(a) | {x}
    raise TypeError(f"not a formula: {phi!r}")


def all_vars(phi: Formula) -> frozenset:
    """Every variable name occurring in ``phi``, free or bound."""
    match phi:
        case Pred(_, x):
            return frozenset((x,))
        case Rel(_, _, x, y) | Eq(x, y):
            return frozenset((x, y))
        case Or(a, b) | And(a, b):
            return all_vars(a) | all_vars(b)
        case Not(a):
            return all_vars(a)
        case Exists(v, a) | Forall(v, a) | Loc(_, v, a):
            return all_vars(a) | {v}
    raise TypeError(f"not a formula: {phi!r}")


def formula_size(phi: Formula) -> int:
    """Number of AST nodes."""
    match phi:
        case Or(a, b) | And(a, b):
            return 1 + formula_size(a) + formula_size(b)
        case Not(a) | Exists(_, a) | Forall(_, a) | Loc(_, _, a):
            return 1 + formula_size(a)
    return 1


def predicates_of(phi: Formula) -> frozenset:
    match phi:
        case Pred(name, _):
            return frozenset((name,))
        case Or(a, b) | And(a, b):
            return predicates_of(a) | predicates_of(b)
        case Not(a) | Exists(_, a) | Forall(_, a) | Loc(_, _, a):
            return predicates_of(a)
    return frozenset()


def max_field_index(phi: Formula) -> int:
    match phi:
        case Rel(i, j, _, _):
            return max(i, j)
        case Or(a, b) | And(a, b):
            return max(max_field_index(a), max_field_index(b))
        case Not(a) | Exists(_, a) | Forall(_, a) | Loc(_, _, a):
            return max_field_index(a)
    return 0


def loc_radii(phi: Formula) -> frozenset:
    match phi:
        case Loc(r, _, a):
            return loc_radii(a) | {r}
        case Or(a, b) | And(a, b):
            return loc_radii(a) | loc_radii(b)
        case Not(a) | Exists(_, a) | Forall(_, a):
            return loc_radii(a)
    return frozenset()


def fresh_name(base: str, used) -> str:
    """``base_1``, ``base_2``, ... : the first name not in ``used``."""
    k = 1
    while f"{base}_{k}" in used:
        k += 1
    return f"{base}_{k}"


def substitute(phi: Formula, renaming: dict) -> Formula:
    """Simultaneous capture-avoiding renaming of free variable occurrences."""
    renaming = {k: v for k, v in renaming.items() if k != v}
    if not renaming:
        return phi
    return _subst(phi, renaming)


def _subst(phi, ren):
    r = lambda v: ren.get(v, v)  # noqa: E731
    match phi:
        case Pred(name, x):
            return Pred(name, r(x))
        case Rel(i, j, x, y):
            return Rel(i, j, r(x), r(y))
        case Eq(x, y):
            return Eq(r(x), r(y))
        case Or(a, b):
            return Or(_subst(a, ren), _subst(b, ren))
        case And(a, b):
            return And(_subst(a, ren), _subst(b, ren))
        case Not(a):
            return Not(_subst(a, ren))
        case Loc(radius, x, a):
            return Loc(radius, r(x), _subst(a, ren))
        case Exists(v, a) | Forall(v, a):
            inner = {k: t for k, t in ren.items() if k != v}
            live = free_vars(a)
            targets = {t for k, t in inner.items() if k in live}
            if v in targets:
                nv = fresh_name(v, targets | all_vars(a) | set(inner))
                inner[v] = nv
                v = nv
            body = _subst(a, inner) if inner else a
            return type(phi)(v, body)
    raise TypeError(f"not a formula: {phi!r}")


def eliminate_abbreviations(phi: Formula) -> Formula:
    """Rewrite ``And`` and ``Forall`` into ``Or``/``Not``/``Exists``."""
    match phi:
        case And(a, b):
            return Not(Or(Not(eliminate_abbreviations(a)), Not(eliminate_abbreviations(b))))
        case Forall(v, a):
            return Not(Exists(v, Not(eliminate_abbreviations(a))))
        case Or(a, b):
            return Or(eliminate_abbreviations(a), eliminate_abbreviations(b))
        case Not(a):
            return Not(eliminate_abbreviations(a))
        case Exists(v, a):
            return Exists(v, eliminate_abbreviations(a))
        case Loc(radius, x, a):
            return Loc(radius, x, eliminate_abbreviations(a))
    return phi


# --------------------------------------------------------------------------
# Fragments


@dataclass(frozen=True)
class Signature:
    """Predicate alphabet and data dimension; ``None`` disables that check."""

    sigma: Optional[frozenset] = None
    dim: Optional[int] = None


@dataclass(frozen=True)
class FragmentKind:
    name: str  # "dFO" | "localFO" | "existentialLocal" | "quantifierFreeLocal"
    radius: Optional[int] = None

    def __post_init__(self):
        if self.name not in ("dFO", "localFO", "existentialLocal", "quantifierFreeLocal"):
            raise ValueError(f"unknown fragment {self.name!r}")
        if self.name != "dFO" and (self.radius is None or self.radius < 0):
            raise ValueError("local fragments need a radius >= 0")

    def __str__(self):
        return self.name if self.radius is None else f"{self.name}({self.radius})"


DFO = FragmentKind("dFO")


def local_fo(r: int) -> FragmentKind:
    return FragmentKind("localFO", r)


def existential_local(r: int) -> FragmentKind:
    return FragmentKind("existentialLocal", r)


def quantifier_free_local(r: int) -> FragmentKind:
    return FragmentKind("quantifierFreeLocal", r)


@dataclass(frozen=True)
class Violation:
    message: str
    subterm: Formula

    def __str__(self):
        return f"{self.message}: {self.subterm}"


@dataclass
class FragmentReport:
    kind: FragmentKind
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def check_fragment(phi: Formula, sig: Optional[Signature], kind: FragmentKind) -> FragmentReport:
    sig = sig or Signature()
    report = FragmentReport(kind)
    if kind.name == "dFO":
        _check_dfo(phi, sig, report.violations)
    else:
        _check_outer(phi, sig, kind, report.violations)
    return report


def require_fragment(phi: Formula, sig: Optional[Signature], kind: FragmentKind) -> None:
    report = check_fragment(phi, sig, kind)
    if not report.ok:
        raise FragmentError(
            f"formula is not in {kind}: " + "; ".join(str(v) for v in report.violations[:3]),
            report.violations,
        )


def _check_dfo(phi, sig, out):
    match phi:
        case Pred(name, _):
            if sig.sigma is not None and name not in sig.sigma:
                out.append(Violation(f"predicate {name!r} not in signature", phi))
        case Rel(i, j, _, _):
            if i < 1 or j < 1 or (sig.dim is not None and max(i, j) > sig.dim):
                out.append(Violation(f"field index out of range 1..{sig.dim}", phi))
        case Eq():
            pass
        case Or(a, b) | And(a, b):
            _check_dfo(a, sig, out)
            _check_dfo(b, sig, out)
        case Not(a) | Exists(_, a) | Forall(_, a):
            _check_dfo(a, sig, out)
        case Loc():
            out.append(Violation("local modality not allowed here", phi))
        case _:
            raise TypeError(f"not a formula: {phi!r}")


def _check_outer(phi, sig, kind, out):
    existential = kind.name in ("existentialLocal", "quantifierFreeLocal")
    match phi:
        case Loc(r, x, body):
            if r != kind.radius:
                out.append(Violation(f"local modality radius {r}, expected {kind.radius}", phi))
            extra = free_vars(body) - {x}
            if extra:
                out.append(Violation(f"modality body has free variables {sorted(extra)} besides {x}", phi))
            _check_dfo(body, sig, out)
        case Eq():
            pass
        case Pred() | Rel():
            out.append(Violation("atom outside a local modality", phi))
        case Not(a):
            if existential and not isinstance(a, Eq):
                out.append(Violation("negation applied to a non-equality", phi))
            else:
                _check_outer(a, sig, kind, out)
        case Or(a, b) | And(a, b):
            _check_outer(a, sig, kind, out)
            _check_outer(b, sig, kind, out)
        case Exists(_, a):
            if kind.name == "quantifierFreeLocal":
                out.append(Violation("quantifier outside a local modality", phi))
            _check_outer(a, sig, kind, out)
        case Forall(_, a):
            if existential:
                out.append(Violation("universal quantifier outside a local modality", phi))
            _check_outer(a, sig, kind, out)
        case _:
            raise TypeError(f"not a formula: {phi!r}")


# --------------------------------------------------------------------------
# Prenex normal form of the existential fragment


@dataclass(frozen=True)
class PrenexExistential:
    variables: tuple
    matrix: Formula

    def to_formula(self) -> Formula:
        return exists_many(self.variables, self.matrix)


def to_prenex_existential(phi: Formula, radius: Optional[int] = None) -> PrenexExistential:
    """Pull the outer existential quantifiers of ``phi`` to the front.

    Bound variables are renamed apart first (``x``, ``x_1``, ...), so the
    extraction never captures.  ``radius`` defaults to the formula's own.
    """
    if radius is None:
        radii = loc_radii(phi)
        radius = min(radii) if radii else 0
    require_fragment(phi, None, existential_local(radius))
    used = set(all_vars(phi))
    bound = set(free_vars(phi))
    renamed = _rename_apart(phi, {}, used, bound)
    variables, matrix = _pull(renamed)
    return PrenexExistential(tuple(variables), matrix)


def _rename_apart(phi, env, used, bound):
    match phi:
        case Exists(v, a):
            if v in bound:
                nv = fresh_name(v, used)
                used.add(nv)
            else:
                nv = v
            bound.add(nv)
            return Exists(nv, _rename_apart(a, {**env, v: nv}, used, bound))
        case Or(a, b):
            return Or(_rename_apart(a, env, used, bound), _rename_apart(b, env, used, bound))
        case And(a, b):
            return And(_rename_apart(a, env, used, bound), _rename_apart(b, env, used, bound))
        case Not(a):
            return Not(_rename_apart(a, env, used, bound))
        case Eq(x, y):
            return Eq(env.get(x, x), env.get(y, y))
        case Loc():
            return substitute(phi, env)
    raise TypeError(f"unexpected node in existential fragment: {phi!r}")


def _pull(phi):
    match phi:
        case Exists(v, a):
            vs, m = _pull(a)
            return [v] + vs, m
        case And(a, b) | Or(a, b):
            va, ma = _pull(a)
            vb, mb = _pull(b)
            return va + vb, type(phi)(ma, mb)
    return [], phi
