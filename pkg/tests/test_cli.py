import json
import subprocess
import sys

import pytest

from dfo.cli import main
from dfo.parser import (
    parse_formula, parse_structure, serialize_abstraction, serialize_formula, serialize_structure,
)
from dfo.reductions import abstract_r1, abstract_r2, add_ge, embed_r3, minus_ge, reduce_r1, reduce_r2d2
from dfo.structures import ball, pad, to_dot


@pytest.fixture
def files(tmp_path, fixtures):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    write.sample = str(fixtures / "sample.txt")
    write.leader = str(fixtures / "leader.txt")
    write.r3 = str(fixtures / "r3d2.txt")
    write.r2d3 = str(fixtures / "r2d3.txt")
    write.dir = tmp_path
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestCheck:
    def test_closed_fixture(self, capsys, files):
        f = files("f.txt", "exists x. exists y. rel(2,1,x,y) & x != y")
        assert run(capsys, "check", files.sample, f)[:2] == (0, "true\n")

    def test_assignment(self, capsys, files):
        f = files("f.txt", "rel(2,1,x,y)")
        assert run(capsys, "check", files.sample, f, "--assign", "x=a,y=f")[:2] == (0, "true\n")
        assert run(capsys, "check", files.sample, f, "--assign", "x=a,y=b")[:2] == (0, "false\n")
        code, _, err = run(capsys, "check", files.sample, f, "--assign", "x=a")
        assert code == 2 and "unbound" in err
        assert run(capsys, "check", files.sample, f, "--assign", "x")[0] == 2

    def test_loc_membership_matches_ball(self, capsys, files, sample):
        # y is reachable from x in at most two value-sharing steps inside the radius-2 view
        share = lambda u, v: "(" + " | ".join(f"rel({i},{j},{u},{v})" for i in (1, 2) for j in (1, 2)) + ")"
        f = files("f.txt", f"loc[2](x){{{share('x', 'y')} | exists z. {share('x', 'z')} & {share('z', 'y')}}}")
        hits = set()
        for y in sample.universe:
            code, out, _ = run(capsys, "check", files.sample, f, "--assign", f"x=a,y={y}")
            assert code == 0
            if out == "true\n":
                hits.add(y)
        assert hits == set(ball(sample, "a", 2).elements()) == set("abcf")

    def test_json(self, capsys, files):
        f = files("f.txt", "exists x. x = x")
        code, out, _ = run(capsys, "check", files.sample, f, "--json")
        line = out.splitlines()[-1]
        assert line.startswith("#json ") and json.loads(line[6:]) == {"verdict": True}


class TestTranslate:
    @pytest.mark.parametrize("text", [
        "exists x. loc[2](x){rel(1,1,x,x)}",
        "exists x. x != x",
        "exists x. exists y. loc[2](x){exists z. rel(2,1,x,z)} & x != y",
    ])
    def test_r2d2_golden(self, capsys, files, text):
        code, out, err = run(capsys, "translate", "--mode", "r2d2", files("f.txt", text))
        assert code == 0
        assert out == serialize_formula(reduce_r2d2(parse_formula(text))) + "\n"
        assert err.startswith("stats source_size=")

    def test_r1_golden(self, capsys, files):
        text = "exists x. loc[1](x){exists y. rel(3,1,x,y)}"
        code, out, _ = run(capsys, "translate", "--mode", "r1", files("f.txt", text))
        assert out == serialize_formula(reduce_r1(parse_formula(text), 3)) + "\n"
        code, out, _ = run(capsys, "translate", "--mode", "r1", "--data", "4", files("f.txt", text))
        assert out == serialize_formula(reduce_r1(parse_formula(text), 4)) + "\n"

    def test_out_file(self, capsys, files):
        out_path = files.dir / "o.txt"
        text = "exists x. loc[1](x){x = x}"
        code, out, _ = run(capsys, "translate", "--mode", "r1", "--data", "1", "--out", str(out_path),
                           files("f.txt", text))
        assert code == 0 and out.startswith("stats ")
        assert out_path.read_text().strip() == serialize_formula(reduce_r1(parse_formula(text), 1))

    def test_fragment_errors(self, capsys, files):
        assert run(capsys, "translate", "--mode", "r2d2", files.r3)[0] == 2
        twice = files("t.txt", "forall x. loc[1](x){ exists y. exists z. !(y=z) & rel(2,1,x,y) & rel(2,1,x,z) }")
        assert run(capsys, "translate", "--mode", "r1", twice)[0] == 2


class TestStructureCommands:
    def test_parse(self, capsys, files, sample):
        assert run(capsys, "parse", files.sample)[1] == serialize_structure(sample)
        code, out, _ = run(capsys, "parse", files.leader)
        assert parse_formula(out) == parse_formula(open(files.leader).read())
        code, _, err = run(capsys, "parse", files("bad.txt", "x ="))
        assert code == 2 and "error: 1:" in err and "expected variable" in err

    def test_abstract(self, capsys, files, sample):
        code, out, _ = run(capsys, "abstract", files.sample, "--centers", "a")
        ab = abstract_r2(sample, ("a",))
        assert code == 0 and out == serialize_abstraction(ab.structure, ab.centers)
        code, out, _ = run(capsys, "abstract", files.sample, "--centers", "a,d", "--radius", "1")
        ab = abstract_r1(sample, ("a", "d"))
        assert out == serialize_abstraction(ab.structure, ab.centers)
        assert run(capsys, "abstract", files.sample)[0] == 2
        assert run(capsys, "abstract", files.sample, "--centers", "zz")[0] == 2
        assert run(capsys, "abstract", files.sample, "--centers", "a", "--radius", "3")[0] == 2

    def test_reconstruct(self, capsys, files, sample):
        code, out, _ = run(capsys, "abstract", files.sample, "--centers", "a")
        code, rebuilt, _ = run(capsys, "reconstruct", files("ab.txt", out))
        A = parse_structure(rebuilt)
        assert code == 0
        assert serialize_abstraction(abstract_r2(A, ("a",)).structure, ("a",)).count("\n") == out.count("\n")
        code, out, _ = run(capsys, "abstract", files.sample, "--centers", "a", "--radius", "1")
        assert run(capsys, "reconstruct", files("ab1.txt", out))[0] == 2
        assert run(capsys, "reconstruct", files("ab1.txt", out), "--data", "2")[0] == 0
        assert run(capsys, "reconstruct", files("nc.txt", "dstruct D=1\nelem a : 1\n"))[0] == 2

    def test_addge_minusge(self, capsys, files, sample):
        code, out, _ = run(capsys, "addge", files.sample)
        assert code == 0 and out == serialize_structure(add_ge(sample))
        assert len(parse_structure(out).universe) == 55
        code, back, _ = run(capsys, "minusge", files("g.txt", out))
        assert back == serialize_structure(minus_ge(add_ge(sample)))
        assert parse_structure(back) == sample

    def test_relativize_and_pad(self, capsys, files, sample):
        f = files("f.txt", "exists x. s(x)")
        assert run(capsys, "relativize", f)[1] == "exists x. !ge(x) & s(x)\n"
        assert run(capsys, "relativize", "--embed", f)[1] == serialize_formula(
            embed_r3(parse_formula("exists x. s(x)"))) + "\n"
        assert run(capsys, "pad", f, "--data", "1")[1] == "exists x. loc[2](x){exists x. s(x)}\n"
        assert run(capsys, "pad", f, "--data", "3")[0] == 2
        assert run(capsys, "pad", files.sample, "--extra", "2")[1] == serialize_structure(pad(sample, 2))

    def test_export(self, capsys, files, sample):
        code, out, _ = run(capsys, "export", "--format", "dot", files.sample)
        assert code == 0 and out == to_dot(sample) + ("" if to_dot(sample).endswith("\n") else "\n")
        vertices = [l for l in out.splitlines() if "label=" in l and "--" not in l]
        assert len(vertices) == 12


class TestSolve:
    def test_leader_formula(self, capsys, files):
        code, out, _ = run(capsys, "solve", "--max-size", "2", files.leader)
        assert code == 0 and out.splitlines()[0] == "SAT size=1"
        assert parse_structure("\n".join(out.splitlines()[1:])).predicates["leader"]

    def test_unsat_and_json(self, capsys, files):
        f = files("f.txt", "exists x. !(x = x)")
        code, out, _ = run(capsys, "solve", "--max-size", "3", "--json", f)
        lines = out.splitlines()
        assert lines[0] == "UNSAT_UP_TO_BOUND bound=3"
        payload = json.loads(lines[-1][len("#json "):])
        assert payload["verdict"] == "UNSAT_UP_TO_BOUND" and payload["bound"] == 3

    def test_gate(self, capsys, files):
        for path, D in ((files.r3, "2"), (files.r2d3, "3")):
            code, out, _ = run(capsys, "solve", "--via", "direct", "--data", D, path)
            assert code == 0 and out.startswith("SAT size=")
            code, out, err = run(capsys, "solve", "--via", "reduction", "--data", D, path)
            assert code == 2 and out == "" and "undecidable zone" in err

    def test_via_reduction(self, capsys, files):
        f = files("f.txt", "exists x. loc[2](x){exists y. rel(2,1,x,y) & y != x}")
        code, out, _ = run(capsys, "solve", "--via", "reduction", "--data", "2", f)
        assert code == 0 and out.splitlines()[0] == "SAT size=2"
        code, out2, _ = run(capsys, "solve", "--via", "direct", "--data", "2", "--method", "enumerate", f)
        assert out2.splitlines()[0] == "SAT size=2"


class TestSuite:
    def test_translation_suite(self, capsys):
        code, out, _ = run(capsys, "suite", "lemma3", "--trials", "500", "--seed", "1")
        assert code == 0 and out == "SUITE lemma3 trials=500 failures=0\n"

    def test_requires_seed(self, capsys):
        code, _, err = run(capsys, "suite", "lemma1", "--trials", "3")
        assert code == 2 and "--seed" in err

    def test_failures_exit_one(self, capsys, monkeypatch):
        import dfo.suites as suites

        monkeypatch.setitem(suites.SUITES, "lemma1", lambda rng: "broken")
        code, out, _ = run(capsys, "suite", "lemma1", "--trials", "2", "--seed", "0")
        assert code == 1 and "failures=2" in out


def test_usage_errors(capsys, files):
    assert run(capsys)[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "parse", str(files.dir / "missing.txt"))[0] == 2
    assert run(capsys, "--help")[0] == 0


def test_console_entry_point(fixtures):
    proc = subprocess.run([sys.executable, "-m", "dfo.cli", "solve", "--max-size", "2",
                           str(fixtures / "leader.txt")], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("SAT size=1")
