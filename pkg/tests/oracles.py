"""Deliberately naive reference implementations used to derive expected values."""

import itertools
import math


def all_pairs_distance(A):
    """Floyd-Warshall over the data graph written straight from its definition."""
    verts = [(e, i) for e in A.universe for i in range(1, A.dim + 1)]
    d = {(u, v): (0 if u == v else math.inf) for u in verts for v in verts}
    for u in verts:
        for v in verts:
            if u != v and (u[0] == v[0] or A.data[u[0]][u[1] - 1] == A.data[v[0]][v[1] - 1]):
                d[u, v] = 1
    for w in verts:
        for u in verts:
            for v in verts:
                if d[u, w] + d[w, v] < d[u, v]:
                    d[u, v] = d[u, w] + d[w, v]
    return d


def ball_members(A, a, r):
    d = all_pairs_distance(A)
    return {v for v in d_keys(A) if any(d[(a, i), v] <= r for i in range(1, A.dim + 1))}


def d_keys(A):
    return [(e, i) for e in A.universe for i in range(1, A.dim + 1)]


def bell(n):
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def partition_key(A):
    """Which (field, field) pairs carry equal values, as a frozenset."""
    fs = d_keys(A)
    return frozenset(
        (u, v) for u, v in itertools.combinations(fs, 2)
        if A.data[u[0]][u[1] - 1] == A.data[v[0]][v[1] - 1]
    )
