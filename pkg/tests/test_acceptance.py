"""The twelve acceptance criteria, each checked at its stated size and time limit.

Every test records a ``CRITERION N: PASS|FAIL ...`` line that is echoed in
the terminal summary.
"""

import time
from contextlib import contextmanager

import pytest

import conftest
from dfo.cli import main
from dfo.generators import GenParams, random_formula, random_structure, rng_for
from dfo.logic import DFO, existential_local, local_fo, quantifier_free_local
from dfo.parser import parse_formula, parse_structure, serialize_formula, serialize_structure
from dfo.reductions import abstract_r2
from dfo.reductions.common import omega_name
from dfo.structures import DataStructure, FieldRef, ball, data_equivalent, view
from dfo.suites import run_suite


class _Outcome:
    def __init__(self):
        self.ok = True
        self.notes = []

    def check(self, cond, note):
        if not cond:
            self.ok = False
            self.notes.append(note)


@contextmanager
def criterion(number, title, limit):
    out = _Outcome()
    t0 = time.perf_counter()
    try:
        yield out
    except Exception as e:  # recorded, then re-raised
        out.check(False, f"{type(e).__name__}: {e}")
        raise
    finally:
        secs = time.perf_counter() - t0
        out.check(secs < limit, f"runtime {secs:.2f}s exceeds {limit}s")
        status = "PASS" if out.ok else "FAIL"
        line = f"CRITERION {number}: {status} {title} ({secs:.2f}s, limit {limit}s)"
        if out.notes:
            line += " -- " + "; ".join(out.notes[:3])
        conftest.ACCEPTANCE_LINES.append(line)
        print(line)
    assert out.ok, line


def _suite(out, name, trials, seed):
    report = run_suite(name, trials, seed)
    out.check(report.trials == trials and report.ok, report.text()[:2000])
    return report


def test_criterion_01_reference_abstraction(sample):
    with criterion(1, "abstraction of sample w.r.t. (a) matches the reference sets", 1) as out:
        B = abstract_r2(sample, ("a",)).structure
        U = lambda i, j: set(B.predicates[omega_name(1, i, j)])
        out.check(U(1, 1) == {"a", "b"}, f"U[1,1]={U(1, 1)}")
        out.check(U(2, 2) == {"a", "c"}, f"U[2,2]={U(2, 2)}")
        out.check(U(1, 2) == set(), f"U[1,2]={U(1, 2)}")
        out.check(U(2, 1) == {"f"}, f"U[2,1]={U(2, 1)}")
        expected = DataStructure(sample.universe, 1, B.predicates,
                                 {"a": (100,), "b": (3,), "c": (3,), "d": (101,), "e": (102,), "f": (7,)})
        out.check(data_equivalent(B, expected), "value partition differs")
        out.check(B.data["b"] == (3,) and B.data["f"] == (7,), "shared values not kept")


def test_criterion_02_ball_and_view(sample):
    view_a2 = DataStructure.build({
        "a": (1, 2), "b": (1, 3), "c": (3, 2), "d": (8, 9), "e": (10, 11), "f": (2, 7),
    })
    with criterion(2, "radius-2 ball and view of a in sample", 1) as out:
        members = ball(sample, "a", 2).members
        want = {FieldRef(e, j) for e in "abcf" for j in (1, 2)}
        out.check(members == want, f"ball={sorted(members)}")
        out.check(data_equivalent(view(sample, "a", 2), view_a2), "view differs from the reference view")


def test_criterion_03_ball_closed_form():
    with criterion(3, "lemma1 suite, 1000 trials", 30) as out:
        _suite(out, "lemma1", 1000, 2024)


def test_criterion_04_radius2_view_cases():
    with criterion(4, "lemma2 suite, 1000 trials", 60) as out:
        _suite(out, "lemma2", 1000, 2024)


def test_criterion_05_radius2_translation():
    with criterion(5, "lemma3 suite, 1000 trials", 120) as out:
        _suite(out, "lemma3", 1000, 2024)


def test_criterion_06_radius2_well_formed():
    with criterion(6, "lemma4 suite, 1000 forward / 500 backward", 120) as out:
        _suite(out, "lemma4", 1000, 2024)


def test_criterion_07_radius1_reduction():
    with criterion(7, "lemma5 and lemma6 suites, 1000 trials each, D in 1..3", 120) as out:
        _suite(out, "lemma5", 1000, 2024)
        _suite(out, "lemma6", 1000, 2024)


def test_criterion_08_ge_embedding():
    with criterion(8, "lemma7 suite 200 trials, lemma8 suite 500 trials", 120) as out:
        _suite(out, "lemma7", 200, 2024)
        _suite(out, "lemma8", 500, 2024)


def test_criterion_09_padding():
    with criterion(9, "padding embedding agreement, 300 trials", 180) as out:
        _suite(out, "pad", 300, 2024)


def test_criterion_10_strategy_agreement():
    with criterion(10, "direct vs via_reduction agreement, 500 trials", 300) as out:
        _suite(out, "agreement", 500, 2024)


def test_criterion_11_fragment_gate(fixtures, capsys):
    with criterion(11, "solve gate on undecidable-zone inputs", 1) as out:
        for name, D in (("r3d2.txt", "2"), ("r2d3.txt", "3")):
            path = str(fixtures / name)
            code = main(["solve", "--via", "direct", "--data", D, path])
            stdout, _ = capsys.readouterr()
            out.check(code == 0 and stdout.startswith("SAT"), f"{name} direct: exit {code} {stdout!r}")
            code = main(["solve", "--via", "reduction", "--data", D, path])
            _, stderr = capsys.readouterr()
            out.check(code == 2 and "undecidable zone" in stderr, f"{name} reduction: exit {code} {stderr!r}")


def test_criterion_12_round_trip():
    kinds = [DFO, local_fo(1), existential_local(2), existential_local(1), quantifier_free_local(2)]
    with criterion(12, "10000 formulas and 1000 structures round-trip", 60) as out:
        for t in range(10_000):
            rng = rng_for(2024, "c12f", t)
            phi = random_formula(GenParams(dim=3, predicates=2, depth=1 + t % 6), kinds[t % len(kinds)], rng,
                                 centers=("x_1", "x_2"))
            text = serialize_formula(phi)
            back = parse_formula(text)
            if back != phi or serialize_formula(back) != text:
                out.check(False, f"formula {text!r}")
                break
        for t in range(1000):
            rng = rng_for(2024, "c12s", t)
            A = random_structure(GenParams(max_size=6, dim=t % 4, values=9, predicates=t % 3), rng)
            text = serialize_structure(A)
            B = parse_structure(text)
            if B != A or serialize_structure(B) != text:
                out.check(False, f"structure {text!r}")
                break
