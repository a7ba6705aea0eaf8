import itertools
import random

from hypothesis import given, settings, strategies as st

from dfo.sat import FALSE, TRUE, Circuit, Solver, _luby


def brute(nvars, clauses):
    for bits in itertools.product((False, True), repeat=nvars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return True
    return False


def solve(nvars, clauses):
    s = Solver()
    for _ in range(nvars):
        s.new_var()
    for c in clauses:
        s.add_clause(c)
    return s, s.solve()


def test_luby_prefix():
    assert [_luby(i) for i in range(15)] == [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]


@settings(max_examples=400, deadline=None)
@given(st.integers(1, 9), st.integers(0, 10**9))
def test_matches_brute_force(nvars, seed):
    rng = random.Random(seed)
    m = rng.randint(1, 5 * nvars)
    clauses = [
        [rng.choice((1, -1)) * rng.randint(1, nvars) for _ in range(rng.randint(1, 3))]
        for _ in range(m)
    ]
    s, ok = solve(nvars, clauses)
    assert ok == brute(nvars, clauses)
    if ok:
        assert all(any(s.model_value(l) for l in c) for c in clauses)


def test_pigeonhole_unsat():
    holes, pigeons = 5, 6
    var = lambda p, h: p * holes + h + 1
    clauses = [[var(p, h) for h in range(holes)] for p in range(pigeons)]
    for h in range(holes):
        for p, q in itertools.combinations(range(pigeons), 2):
            clauses.append([-var(p, h), -var(q, h)])
    s, ok = solve(pigeons * holes, clauses)
    assert not ok and s.conflicts > 0


def test_empty_clause():
    s = Solver()
    s.new_var()
    assert not s.add_clause([])
    assert not s.solve()


def test_circuit_folding():
    c = Circuit()
    a, b = c.var(), c.var()
    assert c.and_([a, TRUE]) == a
    assert c.and_([a, FALSE]) == FALSE
    assert c.and_([a, -a]) == FALSE
    assert c.or_([]) == FALSE and c.and_([]) == TRUE
    assert c.and_([a, b]) == c.and_([b, a])
    assert c.neg(TRUE) == FALSE


def test_circuit_semantics():
    for target in itertools.product((False, True), repeat=3):
        c = Circuit()
        x = [c.var() for _ in range(3)]
        g = c.or_([c.and_([x[0], x[1]]), c.implies(x[1], x[2])])
        for v, t in zip(x, target):
            c.assert_(v if t else -v)
        c.assert_(g)
        ok = c.solver.solve()
        want = (target[0] and target[1]) or (not target[1] or target[2])
        assert ok == want
