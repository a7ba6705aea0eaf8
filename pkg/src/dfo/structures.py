"""D-data structures and locality: data graph, distances, balls and views.

A structure is a finite universe of opaque element names, a family of unary
predicates and, for every element, a tuple of ``dim`` data values.  Only
equality between data values is observable, so most comparisons are made up
to :func:`data_equivalent`.

Field indices are 1-based everywhere in the public API.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

from .errors import InputError, UnsupportedError

__all__ = [
    "DataStructure",
    "FieldRef",
    "DataGraph",
    "Ball",
    "rel",
    "values_of",
    "data_graph",
    "distance",
    "ball",
    "ball_membership_2dv",
    "view",
    "pad",
    "data_equivalent",
    "canonical_values",
    "relabel_values",
    "to_dot",
]


class FieldRef(NamedTuple):
    """A vertex of the data graph: the ``field``-th value slot of ``element``."""

    element: str
    field: int


@dataclass(frozen=True)
class DataStructure:
    """Immutable D-data structure.

    ``predicates`` maps every declared predicate name to the subset of the
    universe it holds on; ``data`` maps every element to its value tuple.
    """

    universe: tuple
    dim: int
    predicates: Mapping[str, frozenset]
    data: Mapping[str, tuple]

    def __post_init__(self):
        universe = tuple(self.universe)
        if not universe:
            raise InputError("universe must be nonempty")
        if len(set(universe)) != len(universe):
            raise InputError("element identifiers must be pairwise distinct")
        if not isinstance(self.dim, int) or self.dim < 0:
            raise InputError(f"dimension must be a nonnegative integer, got {self.dim!r}")
        members = set(universe)
        preds = {}
        for name, subset in self.predicates.items():
            subset = frozenset(subset)
            extra = subset - members
            if extra:
                raise InputError(f"predicate {name!r} mentions unknown elements {sorted(extra)}")
            preds[name] = subset
        data = {}
        for e in universe:
            if e not in self.data:
                raise InputError(f"element {e!r} has no data tuple")
            values = tuple(self.data[e])
            if len(values) != self.dim:
                raise InputError(
                    f"element {e!r} carries {len(values)} values, expected {self.dim}"
                )
            for v in values:
                if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                    raise InputError(f"data values must be nonnegative integers, got {v!r}")
            data[e] = values
        stray = set(self.data) - members
        if stray:
            raise InputError(f"data given for unknown elements {sorted(stray)}")
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "predicates", preds)
        object.__setattr__(self, "data", data)

    def __hash__(self):
        return hash(
            (
                self.universe,
                self.dim,
                tuple(sorted((k, tuple(sorted(v))) for k, v in self.predicates.items())),
                tuple(self.data[e] for e in self.universe),
            )
        )

    @classmethod
    def build(cls, data, predicates=None, dim=None, universe=None):
        """Convenience constructor; ``dim`` defaults to the tuple length."""
        data = {e: tuple(v) for e, v in dict(data).items()}
        if universe is None:
            universe = tuple(data)
        if dim is None:
            dim = len(next(iter(data.values()))) if data else 0
        return cls(tuple(universe), dim, dict(predicates or {}), data)

    @property
    def sigma(self) -> frozenset:
        return frozenset(self.predicates)

    def __len__(self):
        return len(self.universe)

    def value(self, element: str, field: int) -> int:
        self.check_field(element, field)
        return self.data[element][field - 1]

    def check_element(self, element: str) -> None:
        if element not in self.data:
            raise InputError(f"unknown element {element!r}")

    def check_field(self, element: str, field: int) -> None:
        self.check_element(element)
        if not 1 <= field <= self.dim:
            raise InputError(f"field index {field} out of range 1..{self.dim}")

    def fields(self):
        """All vertices of the data graph, in universe then field order."""
        return [FieldRef(e, i) for e in self.universe for i in range(1, self.dim + 1)]

    def holds(self, predicate: str, element: str) -> bool:
        return element in self.predicates[predicate]

    def labels(self, element: str) -> list:
        return sorted(p for p, s in self.predicates.items() if element in s)

    def replace(self, *, data=None, predicates=None, dim=None, universe=None):
        return DataStructure(
            self.universe if universe is None else tuple(universe),
            self.dim if dim is None else dim,
            self.predicates if predicates is None else predicates,
            self.data if data is None else data,
        )

    def restrict(self, elements: Iterable[str]) -> "DataStructure":
        """Substructure induced by ``elements`` (kept in universe order)."""
        keep = set(elements)
        universe = tuple(e for e in self.universe if e in keep)
        return DataStructure(
            universe,
            self.dim,
            {p: s & keep for p, s in self.predicates.items()},
            {e: self.data[e] for e in universe},
        )


class DataGraph(NamedTuple):
    vertices: frozenset
    edges: Mapping  # FieldRef -> frozenset of adjacent FieldRefs

    def has_edge(self, u, v) -> bool:
        return v in self.edges.get(u, ())


class Ball(NamedTuple):
    center: str
    radius: int
    members: frozenset

    def elements(self) -> frozenset:
        return frozenset(u.element for u in self.members)


def rel(A: DataStructure, i: int, j: int, a: str, b: str) -> bool:
    """``f_i(a) == f_j(b)``."""
    return A.value(a, i) == A.value(b, j)


def values_of(A: DataStructure, X: Iterable[str]) -> frozenset:
    out = set()
    for e in X:
        A.check_element(e)
        out.update(A.data[e])
    return frozenset(out)


def data_graph(A: DataStructure) -> DataGraph:
    by_value = {}
    for u in A.fields():
        by_value.setdefault(A.data[u.element][u.field - 1], []).append(u)
    edges = {}
    for u in A.fields():
        same = [FieldRef(u.element, j) for j in range(1, A.dim + 1)]
        edges[u] = frozenset(same) | frozenset(by_value[A.data[u.element][u.field - 1]])
    return DataGraph(frozenset(edges), edges)


def _value_buckets(A):
    buckets = {}
    for e in A.universe:
        for i, v in enumerate(A.data[e], 1):
            buckets.setdefault(v, []).append(FieldRef(e, i))
    return buckets


def _bfs(A, sources, limit=None, target=None):
    """Breadth-first distances from ``sources`` in the data graph.

    Neighbours of ``(e, i)`` are every field of ``e`` and every field carrying
    ``f_i(e)``; each element and each value is expanded at most once.
    """
    buckets = _value_buckets(A)
    dist = {u: 0 for u in sources}
    if target is not None and target in dist:
        return dist
    frontier = list(dist)
    done_elems, done_values = set(), set()
    d = 0
    while frontier and (limit is None or d < limit):
        d += 1
        nxt = []
        for u in frontier:
            neigh = []
            if u.element not in done_elems:
                done_elems.add(u.element)
                neigh.extend(FieldRef(u.element, j) for j in range(1, A.dim + 1))
            v = A.data[u.element][u.field - 1]
            if v not in done_values:
                done_values.add(v)
                neigh.extend(buckets[v])
            for w in neigh:
                if w not in dist:
                    dist[w] = d
                    nxt.append(w)
                    if w == target:
                        return dist
        frontier = nxt
    return dist


def distance(A: DataStructure, u, v):
    """Shortest-path length between two fields, ``math.inf`` if disconnected."""
    u, v = FieldRef(*u), FieldRef(*v)
    A.check_field(*u)
    A.check_field(*v)
    return _bfs(A, [u], target=v).get(v, math.inf)


def ball(A: DataStructure, a: str, r: int) -> Ball:
    A.check_element(a)
    if r < 0:
        raise InputError("radius must be nonnegative")
    sources = [FieldRef(a, i) for i in range(1, A.dim + 1)]
    return Ball(a, r, frozenset(_bfs(A, sources, limit=r)))


def ball_membership_2dv(A: DataStructure, a: str, b: str, j: int, r: int) -> bool:
    """Closed-form ball membership for 2-data structures and radius 1 or 2."""
    if A.dim != 2:
        raise UnsupportedError(f"closed-form ball membership needs D=2, got D={A.dim}")
    A.check_field(b, j)
    A.check_element(a)
    fa, fb = A.data[a], A.data[b]
    if r == 1:
        return fb[j - 1] in fa
    if r == 2:
        return fb[0] in fa or fb[1] in fa
    raise UnsupportedError(f"closed-form ball membership is for r in {{1,2}}, got {r}")


def _fresh_start(A: DataStructure) -> int:
    return max((v for t in A.data.values() for v in t), default=-1) + 1


def view(A: DataStructure, a: str, r: int) -> DataStructure:
    """The r-view of ``a``: fields outside the ball get pairwise-distinct fresh values."""
    inside = ball(A, a, r).members
    fresh = _fresh_start(A)
    data = {}
    for e in A.universe:
        row = list(A.data[e])
        for i in range(A.dim):
            if FieldRef(e, i + 1) not in inside:
                row[i] = fresh
                fresh += 1
        data[e] = tuple(row)
    return A.replace(data=data)


def pad(A: DataStructure, k: int) -> DataStructure:
    """Append ``k`` fields that are constantly 0."""
    if k < 0:
        raise InputError("padding width must be nonnegative")
    if k == 0:
        return A
    return A.replace(dim=A.dim + k, data={e: v + (0,) * k for e, v in A.data.items()})


def canonical_values(A: DataStructure, order=None) -> tuple:
    """Flattened data with values renamed by first occurrence (0, 1, 2, ...)."""
    names = {}
    out = []
    for e in A.universe if order is None else order:
        for v in A.data[e]:
            out.append(names.setdefault(v, len(names)))
    return tuple(out)


def relabel_values(A: DataStructure, start: int = 1) -> DataStructure:
    """Data-equivalent copy whose values are consecutive from ``start``."""
    flat = iter(canonical_values(A))
    data = {e: tuple(next(flat) + start for _ in range(A.dim)) for e in A.universe}
    return A.replace(data=data)


def data_equivalent(A: DataStructure, B: DataStructure) -> bool:
    if set(A.universe) != set(B.universe) or A.dim != B.dim:
        return False
    if A.predicates != B.predicates:
        return False
    return canonical_values(A) == canonical_values(B, order=A.universe)


def to_dot(A: DataStructure, name: str = "G") -> str:
    """Graphviz rendering of the data graph; same-element edges are dashed."""
    lines = [f"graph {name} {{"]
    for u in A.fields():
        lines.append(
            f'  "{u.element}.{u.field}" [label="{u.element}.{u.field}={A.value(*u)}"];'
        )
    fields = A.fields()
    for x, u in enumerate(fields):
        for v in fields[x + 1 :]:
            if u.element == v.element:
                lines.append(f'  "{u.element}.{u.field}" -- "{v.element}.{v.field}" [style=dashed];')
            elif A.value(*u) == A.value(*v):
                lines.append(f'  "{u.element}.{u.field}" -- "{v.element}.{v.field}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
