"""Seeded property suites for the locality facts and the reductions.

Each trial builds its own random instance from ``(seed, suite, index)`` so
trials are independent and any single one can be replayed.  A trial
returns ``None`` on success or a printable counterexample.
"""

from __future__ import annotations

import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import InputError
from .evaluator import evaluate, evaluate_sentence
from .generators import (
    GenParams, random_distinct_sentence, random_existential_sentence, random_formula,
    random_structure, rng_for,
)
from .logic import (
    DFO, Signature, check_fragment, existential_local, quantifier_free_local,
)
from .parser import (
    parse_formula, parse_structure, serialize_abstraction, serialize_formula, serialize_structure,
)
from .reductions import (
    abstract_r1, abstract_r2, add_ge, embed_pad, is_well_formed, is_well_formed_r1,
    minus_ge, reconstruct_r1, reconstruct_r2, relativize, translate_r1, translate_r2,
)
from .reductions.common import omega_name
from .solver import bounded_sat, solve_existential_local
from .structures import FieldRef, ball, ball_membership_2dv, data_equivalent, pad, rel, view

__all__ = ["SUITES", "SuiteReport", "run_suite", "run_trial"]


@dataclass
class SuiteReport:
    name: str
    trials: int
    seed: int
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def text(self) -> str:
        lines = [f"SUITE {self.name} trials={self.trials} failures={len(self.failures)}"]
        for k, (idx, info) in enumerate(self.failures, 1):
            lines.append(f"--- counterexample {k} (trial {idx})")
            lines.append(info.rstrip("\n"))
        return "\n".join(lines) + "\n"


def _centers(rng, A, max_n=2):
    n = rng.randint(1, max_n)
    return tuple(rng.choice(A.universe) for _ in range(n))


def _xs(n):
    return tuple(f"x_{p}" for p in range(1, n + 1))


def _fail(*parts) -> str:
    out = []
    for p in parts:
        if hasattr(p, "universe"):
            out.append(serialize_structure(p))
        else:
            out.append(str(p))
    return "\n".join(s.rstrip("\n") for s in out)


# --------------------------------------------------------------------------
# Trials


def t_ball_closed_form(rng):
    A = random_structure(GenParams(max_size=6, dim=2, values=8, predicates=0), rng)
    for a in A.universe:
        for r in (1, 2):
            members = ball(A, a, r).members
            for b in A.universe:
                for j in (1, 2):
                    closed = ball_membership_2dv(A, a, b, j, r)
                    if closed != (FieldRef(b, j) in members):
                        return _fail(A, f"a={a} b={b} j={j} r={r} closed_form={closed}")
    return None


def _in_u(B, p, i, j, b):
    return b in B.predicates[omega_name(p, i, j)]


def t_view_cases_r2(rng):
    S = random_structure(GenParams(max_size=5, dim=2, values=6, predicates=0), rng)
    centers = _centers(rng, S)
    B = abstract_r2(S, centers).structure
    n = len(centers)
    for p, a in enumerate(centers, 1):
        V = view(S, a, 2)
        b1, b2 = ball(S, a, 1).members, ball(S, a, 2).members
        zone = {}
        for b in S.universe:
            for j in (1, 2):
                f = FieldRef(b, j)
                zone[b, j] = 1 if f in b1 else 2 if f in b2 else 3
        for b in S.universe:
            for c in S.universe:
                for j in (1, 2):
                    for k in (1, 2):
                        truth = rel(V, j, k, b, c)
                        zb, zc = zone[b, j], zone[c, k]
                        if zb == zc == 1:
                            want = any(_in_u(B, p, i, j, b) and _in_u(B, p, i, k, c) for i in (1, 2))
                            case = 1
                        elif {zb, zc} == {1, 2}:
                            want, case = False, 2
                        elif zb == zc == 2:
                            want = B.data[b] == B.data[c] or any(
                                _in_u(B, q, l, j, b) and _in_u(B, q, l, k, c)
                                for q in range(1, n + 1) for l in (1, 2)
                            )
                            case = 3
                        elif 3 in (zb, zc) and zb != zc:
                            want, case = False, 4
                        else:
                            want, case = (b == c and j == k), 5
                        if truth != want:
                            return _fail(S, f"centers={centers} p={p} b={b} c={c} j={j} k={k} case={case} view={truth}")
    return None


def t_translation_r2(rng):
    params = GenParams(max_size=5, dim=2, values=6, predicates=1, depth=3, radius=2)
    S = random_structure(params, rng)
    centers = _centers(rng, S)
    xs = _xs(len(centers))
    phi = random_formula(params, quantifier_free_local(2), rng, centers=xs)
    B = abstract_r2(S, centers).structure
    I = dict(zip(xs, centers))
    lhs = evaluate(S, phi, I)
    rhs = evaluate(B, translate_r2(phi, xs, S.sigma), I)
    if lhs != rhs:
        return _fail(S, f"centers={centers}", f"formula: {serialize_formula(phi)}", f"source={lhs} target={rhs}")
    return None


def _mutate_r2(rng, B, centers, steps=6):
    n = len(centers)
    for _ in range(steps):
        b = rng.choice(B.universe)
        if rng.random() < 0.5:
            cand = B.replace(data={**B.data, b: (rng.randint(1, 8),)})
        else:
            name = omega_name(rng.randint(1, n), rng.randint(1, 2), rng.randint(1, 2))
            preds = dict(B.predicates)
            preds[name] = preds[name] ^ {b}
            cand = B.replace(predicates=preds)
        if is_well_formed(cand, centers):
            B = cand
    return B


def t_well_formed_r2(rng, index=0):
    S = random_structure(GenParams(max_size=5, dim=2, values=6, predicates=1), rng)
    centers = _centers(rng, S)
    B = abstract_r2(S, centers).structure
    if not is_well_formed(B, centers):
        return _fail(S, f"centers={centers}", "forward: abstraction is not well formed")
    if index % 2 == 0:
        B2 = _mutate_r2(rng, B, centers)
        A = reconstruct_r2(B2, centers)
        back = abstract_r2(A, centers).structure
        if not data_equivalent(back, B2):
            return _fail(serialize_abstraction(B2, centers), "backward: re-abstraction differs", back)
    return None


def _zone1(S, a):
    return ball(S, a, 1).members


def t_view_cases_r1(rng, index=0):
    D = 1 + index % 3
    S = random_structure(GenParams(max_size=5, dim=D, values=6, predicates=0), rng)
    centers = _centers(rng, S)
    B = abstract_r1(S, centers).structure
    fields = range(1, D + 1)
    for p, a in enumerate(centers, 1):
        V = view(S, a, 1)
        b1 = _zone1(S, a)
        for b in S.universe:
            for j in fields:
                closed = any(_in_u(B, p, i, j, b) for i in fields)
                if closed != (FieldRef(b, j) in b1):
                    return _fail(S, f"centers={centers} p={p} b={b} j={j}: ball characterisation")
        for b in S.universe:
            for c in S.universe:
                for j in fields:
                    for k in fields:
                        truth = rel(V, j, k, b, c)
                        ib, ic = FieldRef(b, j) in b1, FieldRef(c, k) in b1
                        if ib and ic:
                            want = any(_in_u(B, p, i, j, b) and _in_u(B, p, i, k, c) for i in fields)
                        elif ib != ic:
                            want = False
                        else:
                            want = b == c and j == k
                        if truth != want:
                            return _fail(S, f"centers={centers} p={p} b={b} c={c} j={j} k={k} view={truth}")
    return None


def _mutate_r1(rng, B, centers, D, steps=6):
    n = len(centers)
    for _ in range(steps):
        b = rng.choice(B.universe)
        name = omega_name(rng.randint(1, n), rng.randint(1, D), rng.randint(1, D))
        preds = dict(B.predicates)
        preds[name] = preds[name] ^ {b}
        cand = B.replace(predicates=preds)
        if is_well_formed_r1(cand, centers, D):
            B = cand
    return B


def t_reduction_r1(rng, index=0):
    D = 1 + index % 3
    params = GenParams(max_size=5, dim=D, values=6, predicates=1, depth=3, radius=1)
    S = random_structure(params, rng)
    centers = _centers(rng, S)
    xs = _xs(len(centers))
    phi = random_formula(params, quantifier_free_local(1), rng, centers=xs)
    B = abstract_r1(S, centers).structure
    I = dict(zip(xs, centers))
    lhs = evaluate(S, phi, I)
    rhs = evaluate(B, translate_r1(phi, xs, D, S.sigma), I)
    if lhs != rhs:
        return _fail(S, f"centers={centers}", f"formula: {serialize_formula(phi)}", f"source={lhs} target={rhs}")
    if not is_well_formed_r1(B, centers, D):
        return _fail(S, f"centers={centers}", "forward: abstraction is not well formed")
    if index % 2 == 0:
        B2 = _mutate_r1(rng, B, centers, D)
        A = reconstruct_r1(B2, centers, D)
        back = abstract_r1(A, centers).structure
        if not data_equivalent(back, B2):
            return _fail(serialize_abstraction(B2, centers), "backward: re-abstraction differs", back)
    return None


def t_ge_view(rng):
    A = random_structure(GenParams(max_size=4, dim=2, values=6, predicates=1), rng)
    G = add_ge(A)
    for a in G.universe:
        if not data_equivalent(view(G, a, 3), G):
            return _fail(A, f"center {a} of add_ge(A): radius-3 view differs")
    return None


def t_relativize(rng):
    params = GenParams(max_size=4, dim=2, values=4, predicates=1, depth=3)
    A = random_structure(params, rng)
    phi = random_formula(params, DFO, rng)
    T = relativize(phi)
    if evaluate_sentence(A, phi) != evaluate_sentence(add_ge(A), T):
        return _fail(A, f"formula: {serialize_formula(phi)}", "first equivalence fails")
    B = random_structure(params.with_(max_size=5), rng)
    ge = set(e for e in B.universe if rng.random() < 0.4)
    if len(ge) == len(B.universe):
        ge.discard(B.universe[0])
    B = B.replace(predicates={**B.predicates, "ge": frozenset(ge)})
    if evaluate_sentence(minus_ge(B), phi) != evaluate_sentence(B, T):
        return _fail(B, f"formula: {serialize_formula(phi)}", "second equivalence fails")
    return None


PAD_BOUND = 4


def t_pad(rng, index=0):
    k = 1 + index % 2
    params = GenParams(dim=k, predicates=1, depth=4, leaf=0.1)
    if rng.random() < 0.5:
        phi = random_distinct_sentence(params.with_(depth=3), rng, rng.randint(2, 3))
    else:
        phi = random_formula(params, DFO, rng)
    psi = embed_pad(phi, k)
    src = bounded_sat(phi, params.sigma, k, PAD_BOUND)
    dst = bounded_sat(psi, params.sigma, k + 1, PAD_BOUND)
    if src.verdict != dst.verdict or src.size != dst.size:
        return _fail(f"formula: {serialize_formula(phi)}", f"k={k} source={src.summary()} padded={dst.summary()}")
    if src.sat:
        if not evaluate_sentence(pad(src.witness, 1), psi):
            return _fail(src.witness, f"formula: {serialize_formula(phi)}", "padded witness fails the embedding")
    return None


AGREE_BOUND = 3


def agreement_instance(rng, index):
    if index % 2 == 0:
        D, r = 2, 2
    else:
        D, r = 1 + (index // 2) % 3, 1
    params = GenParams(dim=D, radius=r, depth=3, predicates=rng.randint(0, 1), leaf=0.15)
    if rng.random() < 0.3:
        return random_formula(params.with_(depth=2), existential_local(r), rng), D, r
    return random_existential_sentence(params, rng, max_vars=3 if D < 3 else 2), D, r


def t_agreement(rng, index=0):
    phi, D, r = agreement_instance(rng, index)
    if not check_fragment(phi, Signature(None, D), existential_local(r)).ok:
        return _fail(f"formula: {serialize_formula(phi)}", "generator produced an out-of-fragment formula")
    a = solve_existential_local(phi, D, "direct", AGREE_BOUND, radius=r)
    b = solve_existential_local(phi, D, "via_reduction", AGREE_BOUND, radius=r)
    for res in (a, b):
        if res.sat and not evaluate_sentence(res.witness, phi):
            return _fail(res.witness, f"formula: {serialize_formula(phi)}", "witness does not re-verify")
    if a.verdict != b.verdict or a.size != b.size:
        return _fail(f"formula: {serialize_formula(phi)} D={D} r={r}",
                     f"direct={a.summary()} via_reduction={b.summary()}")
    return None


def t_roundtrip(rng, index=0):
    kinds = [DFO, existential_local(2), existential_local(1), quantifier_free_local(2)]
    params = GenParams(dim=3, predicates=2, depth=5)
    phi = random_formula(params, kinds[index % len(kinds)], rng, centers=("x_1", "x_2"))
    text = serialize_formula(phi)
    back = parse_formula(text)
    if back != phi or serialize_formula(back) != text:
        return _fail(f"formula: {text}", "formula round trip differs")
    A = random_structure(GenParams(max_size=6, dim=index % 4, values=9, predicates=index % 3), rng)
    s = serialize_structure(A)
    B = parse_structure(s)
    if B != A or serialize_structure(B) != s:
        return _fail(A, "structure round trip differs")
    return None


SUITES: dict = {
    "lemma1": t_ball_closed_form,
    "lemma2": t_view_cases_r2,
    "lemma3": t_translation_r2,
    "lemma4": t_well_formed_r2,
    "lemma5": t_view_cases_r1,
    "lemma6": t_reduction_r1,
    "lemma7": t_ge_view,
    "lemma8": t_relativize,
    "pad": t_pad,
    "agreement": t_agreement,
    "roundtrip": t_roundtrip,
}

_INDEXED = {t_well_formed_r2, t_view_cases_r1, t_reduction_r1, t_pad, t_agreement, t_roundtrip}


def run_trial(name: str, seed: int, index: int) -> Optional[str]:
    fn: Callable = SUITES[name]
    rng = rng_for(seed, name, index)
    try:
        return fn(rng, index) if fn in _INDEXED else fn(rng)
    except Exception:
        return "exception during trial:\n" + traceback.format_exc(limit=4)


def _chunk(args):
    name, seed, lo, hi = args
    return [(i, run_trial(name, seed, i)) for i in range(lo, hi)]


def run_suite(name: str, trials: int, seed: int, jobs: int = 1) -> SuiteReport:
    if name not in SUITES:
        raise InputError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    if trials < 0:
        raise InputError("trials must be nonnegative")
    t0 = time.perf_counter()
    report = SuiteReport(name, trials, seed)
    if jobs <= 1 or trials < 2:
        results = _chunk((name, seed, 0, trials))
    else:
        step = max(1, -(-trials // (jobs * 4)))
        parts = [(name, seed, lo, min(lo + step, trials)) for lo in range(0, trials, step)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = [r for chunk in pool.map(_chunk, parts) for r in chunk]
    report.failures = [(i, info) for i, info in results if info is not None]
    report.seconds = time.perf_counter() - t0
    return report
