import pytest
from hypothesis import given, settings, strategies as st

from dfo.errors import InputError
from dfo.evaluator import Evaluator, evaluate, evaluate_sentence, holds_at
from dfo.generators import GenParams, random_formula, random_structure, rng_for
from dfo.logic import DFO, And, Eq, Exists, Forall, Loc, Not, Or, Pred, Rel, local_fo
from dfo.parser import parse_formula as P
from dfo.structures import DataStructure, ball, pad, relabel_values, view

from oracles import ball_members

L1 = DataStructure.build({"p1": (7, 7), "p2": (9, 7)}, {"leader": {"p1"}})


def test_closed_atom_on_sample(sample):
    assert evaluate(sample, Rel(2, 1, "x", "y"), {"x": "a", "y": "f"})
    assert not evaluate(sample, Rel(1, 1, "x", "y"), {"x": "a", "y": "f"})


def test_exists_trivial(sample):
    assert evaluate_sentence(sample, P("exists x. x = x"))
    assert not evaluate_sentence(sample, P("exists x. x != x"))


def test_leader_formula_on_l1(fixtures):
    phi = P((fixtures / "leader.txt").read_text())
    assert evaluate_sentence(L1, phi)
    two_leaders = L1.replace(predicates={"leader": frozenset({"p1", "p2"})})
    assert not evaluate_sentence(two_leaders, phi)


def test_loc_matches_ball_a2_ball(sample):
    # loc[2](x){rel(i,j,x,y)} holds exactly when y's field j is in the ball and shares a's value
    members = ball(sample, "a", 2).members
    for y in sample.universe:
        for j in (1, 2):
            in_view = any(
                evaluate(sample, Loc(2, "x", Rel(i, j, "x", "y")), {"x": "a", "y": y}) for i in (1, 2)
            )
            shares = any(sample.data["a"][i - 1] == sample.data[y][j - 1] for i in (1, 2))
            assert in_view == (shares and (y, j) in members)


def test_errors(sample):
    with pytest.raises(InputError):
        evaluate(sample, Pred("p", "x"), {})
    with pytest.raises(InputError):
        evaluate(sample, Eq("x", "x"), {"x": "zz"})
    with pytest.raises(InputError):
        evaluate_sentence(sample, Eq("x", "x"))
    with pytest.raises(InputError):
        evaluate(sample, Pred("nope", "x"), {"x": "a"})
    with pytest.raises(InputError):
        evaluate(sample, Rel(3, 1, "x", "x"), {"x": "a"})


def test_holds_at(sample):
    assert holds_at(sample, Rel(1, 1, "x", "y"), ("x", "y"), ("a", "b"))


def test_view_memo_reused(sample):
    ev = Evaluator(sample)
    ev.eval(P("forall x. loc[1](x){exists y. rel(1,1,x,y)}"), {})
    assert set(ev._views) == {(e, 1) for e in sample.universe}


class _Raw:
    def __init__(self, universe, dim, predicates, data):
        self.universe, self.dim, self.predicates, self.data = universe, dim, predicates, data


def _naive(A, phi, I):
    """Independent evaluator: recomputes the view from the brute-force ball oracle."""
    match phi:
        case Pred(name, x):
            return I[x] in A.predicates[name]
        case Rel(i, j, x, y):
            return A.data[I[x]][i - 1] == A.data[I[y]][j - 1]
        case Eq(x, y):
            return I[x] == I[y]
        case Not(a):
            return not _naive(A, a, I)
        case Or(a, b):
            return _naive(A, a, I) or _naive(A, b, I)
        case And(a, b):
            return _naive(A, a, I) and _naive(A, b, I)
        case Exists(v, a):
            return any(_naive(A, a, {**I, v: e}) for e in A.universe)
        case Forall(v, a):
            return all(_naive(A, a, {**I, v: e}) for e in A.universe)
        case Loc(r, x, a):
            keep = ball_members(A, I[x], r)
            data = {
                e: tuple(A.data[e][i] if (e, i + 1) in keep else ("fresh", e, i) for i in range(A.dim))
                for e in A.universe
            }
            return _naive(_Raw(A.universe, A.dim, A.predicates, data), a, I)
    raise TypeError(phi)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9))
def test_loc_against_inlined_view(seed):
    rng = rng_for(seed, "naive")
    params = GenParams(max_size=4, dim=1 + seed % 3, predicates=1, depth=3, radius=1 + seed % 3)
    phi = random_formula(params, local_fo(params.radius), rng)
    A = random_structure(params, rng)
    assert evaluate_sentence(A, phi) == _naive(A, phi, {})


def test_data_equivalence_invariance():
    for t in range(1000):
        rng = rng_for(3, "inv", t)
        params = GenParams(max_size=4, dim=2, values=5, predicates=1, depth=4)
        A = random_structure(params, rng)
        perm = list(range(1, 6))
        rng.shuffle(perm)
        B = A.replace(data={e: tuple(perm[v - 1] * 10 for v in d) for e, d in A.data.items()})
        phi = random_formula(params, DFO if t % 2 else local_fo(1 + t % 3), rng)
        assert evaluate_sentence(A, phi) == evaluate_sentence(B, phi)
        assert evaluate_sentence(A, phi) == evaluate_sentence(relabel_values(A), phi)


def test_pad_preserves_satisfaction():
    for t in range(300):
        rng = rng_for(4, "pad", t)
        params = GenParams(max_size=4, dim=1 + t % 2, predicates=1, depth=4)
        A = random_structure(params, rng)
        phi = random_formula(params, DFO, rng)
        assert evaluate_sentence(A, phi) == evaluate_sentence(pad(A, 1 + t % 2), phi)
