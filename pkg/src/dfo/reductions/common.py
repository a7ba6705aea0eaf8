"""Pieces shared by the radius-2 and radius-1 reductions."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InputError
from ..logic import Pred, fresh_name
from ..structures import DataStructure


def omega_name(p: int, i: int, j: int) -> str:
    """Predicate recording ``f_i(a_p) == f_j(b)``; ``p`` is a center position."""
    return f"U_{p}_{i}_{j}"


def omega_names(n: int, dim: int) -> list:
    return [
        omega_name(p, i, j)
        for p in range(1, n + 1)
        for i in range(1, dim + 1)
        for j in range(1, dim + 1)
    ]


def U(p: int, i: int, j: int, var: str) -> Pred:
    return Pred(omega_name(p, i, j), var)


@dataclass(frozen=True)
class Abstraction:
    """A lower-dimension structure over Σ ∪ Ω_n together with its centers."""

    structure: DataStructure
    centers: tuple

    @property
    def n(self) -> int:
        return len(self.centers)


def check_centers(A: DataStructure, centers) -> tuple:
    centers = tuple(centers)
    if not centers:
        raise InputError("center tuple must be nonempty")
    for c in centers:
        A.check_element(c)
    return centers


def check_no_collision(sigma, n: int, dim: int) -> None:
    clash = set(sigma) & set(omega_names(n, dim))
    if clash:
        raise InputError(f"predicates {sorted(clash)} collide with the Ω alphabet")


def require_omega(B: DataStructure, n: int, dim: int) -> None:
    missing = [u for u in omega_names(n, dim) if u not in B.predicates]
    if missing:
        raise InputError(f"missing Ω predicates {missing[:4]}{'...' if len(missing) > 4 else ''}")


def helper_vars(avoid, count=2) -> list:
    """Names for the bound variables of the well-formedness formulas."""
    used = set(avoid)
    out = []
    for base in ("y", "z", "w")[:count]:
        name = base if base not in used else fresh_name(base, used)
        used.add(name)
        out.append(name)
    return out


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx

    def classes(self):
        """Classes in order of first appearance of their members."""
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


def center_value_classes(B: DataStructure, centers, dim: int):
    """Partition of ``(p, i)`` pairs induced by ``a_q ∈ U_{p[i,j]}``."""
    n = len(centers)
    pairs = [(p, i) for p in range(1, n + 1) for i in range(1, dim + 1)]
    uf = UnionFind(pairs)
    for p, i in pairs:
        for q, j in pairs:
            if centers[q - 1] in B.predicates[omega_name(p, i, j)]:
                uf.union((p, i), (q, j))
    return uf.classes()
