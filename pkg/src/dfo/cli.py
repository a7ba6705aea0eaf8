"""Command-line front end: ``dfo <subcommand> ...``.

Exit status: 0 on success, 1 when a suite reports failures, 2 on usage,
parse, fragment or precondition errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .errors import DfoError
from .evaluator import evaluate
from .logic import (
    Signature, check_fragment, existential_local, formula_size, free_vars, loc_radii,
    max_field_index,
)
from .parser import (
    parse_abstraction, parse_formula, parse_structure, serialize_abstraction,
    serialize_formula, serialize_structure,
)
from .reductions import (
    abstract_r1, abstract_r2, add_ge, embed_pad, embed_r3, minus_ge, reconstruct_r1,
    reconstruct_r2, reduce_r1, reduce_r2d2, relativize,
)
from .solver import bounded_sat, solve_existential_local
from .structures import pad, to_dot
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Usage(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as e:
        raise _Usage(f"cannot read {path}: {e.strerror}") from None


def _is_structure(text: str) -> bool:
    for line in text.splitlines():
        s = line.strip()
        if s and not s.startswith("#"):
            return s.startswith("dstruct")
    return False


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _json(args, **payload) -> None:
    if args.json:
        print("#json " + json.dumps(payload, sort_keys=True, default=str))


def _dim_of(args, phi) -> int:
    return args.data if args.data is not None else max_field_index(phi)


# --------------------------------------------------------------------------
# Subcommands


def cmd_parse(args) -> int:
    text = _read(args.file)
    if _is_structure(text):
        A, centers = parse_abstraction(text)
        _emit(args, serialize_abstraction(A, centers))
        _json(args, kind="structure", size=len(A.universe), dim=A.dim)
    else:
        phi = parse_formula(text)
        _emit(args, serialize_formula(phi))
        _json(args, kind="formula", size=formula_size(phi), free=sorted(free_vars(phi)))
    return EXIT_OK


def _assignment(spec: Optional[str]) -> dict:
    out = {}
    for item in (spec or "").split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise _Usage(f"bad assignment {item!r}, expected var=element")
        var, elem = (s.strip() for s in item.split("=", 1))
        out[var] = elem
    return out


def cmd_check(args) -> int:
    A = parse_structure(_read(args.structure))
    phi = parse_formula(_read(args.formula))
    verdict = evaluate(A, phi, _assignment(args.assign))
    print("true" if verdict else "false")
    _json(args, verdict=verdict)
    return EXIT_OK


def cmd_translate(args) -> int:
    phi = parse_formula(_read(args.file))
    if args.mode == "r2d2":
        out = reduce_r2d2(phi)
    else:
        out = reduce_r1(phi, _dim_of(args, phi))
    _emit(args, serialize_formula(out))
    stats = f"stats source_size={formula_size(phi)} target_size={formula_size(out)}"
    print(stats, file=sys.stdout if args.out else sys.stderr)
    _json(args, mode=args.mode, source_size=formula_size(phi), target_size=formula_size(out))
    return EXIT_OK


def _centers(spec: Optional[str]):
    if not spec:
        raise _Usage("--centers is required (comma-separated element ids)")
    return tuple(c.strip() for c in spec.split(",") if c.strip())


def cmd_abstract(args) -> int:
    A = parse_structure(_read(args.file))
    centers = _centers(args.centers)
    radius = args.radius if args.radius is not None else 2
    if radius == 2:
        ab = abstract_r2(A, centers)
    elif radius == 1:
        ab = abstract_r1(A, centers)
    else:
        raise _Usage("--radius must be 1 or 2 for abstract")
    _emit(args, serialize_abstraction(ab.structure, ab.centers))
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    B, centers = parse_abstraction(_read(args.file))
    if args.centers:
        centers = _centers(args.centers)
    if not centers:
        raise _Usage("no centers: add a '# centers: a,b' line or pass --centers")
    radius = args.radius if args.radius is not None else (2 if B.dim == 1 else 1)
    if radius == 2:
        A = reconstruct_r2(B, centers)
    elif radius == 1:
        if args.data is None:
            raise _Usage("--data D is required to reconstruct a radius-1 abstraction")
        A = reconstruct_r1(B, centers, args.data)
    else:
        raise _Usage("--radius must be 1 or 2 for reconstruct")
    _emit(args, serialize_structure(A))
    return EXIT_OK


def cmd_addge(args) -> int:
    _emit(args, serialize_structure(add_ge(parse_structure(_read(args.file)))))
    return EXIT_OK


def cmd_minusge(args) -> int:
    _emit(args, serialize_structure(minus_ge(parse_structure(_read(args.file)))))
    return EXIT_OK


def cmd_relativize(args) -> int:
    phi = parse_formula(_read(args.file))
    out = embed_r3(phi) if args.embed else relativize(phi)
    _emit(args, serialize_formula(out))
    return EXIT_OK


def cmd_pad(args) -> int:
    text = _read(args.file)
    if _is_structure(text):
        _emit(args, serialize_structure(pad(parse_structure(text), args.extra)))
        return EXIT_OK
    phi = parse_formula(text)
    r = args.radius if args.radius is not None else 2
    _emit(args, serialize_formula(embed_pad(phi, _dim_of(args, phi), r)))
    return EXIT_OK


def cmd_solve(args) -> int:
    phi = parse_formula(_read(args.file))
    dim = _dim_of(args, phi)
    if args.via is None:
        res = bounded_sat(phi, None, dim, args.max_size, args.method)
    else:
        strategy = "direct" if args.via == "direct" else "via_reduction"
        radii = loc_radii(phi)
        r = args.radius if args.radius is not None else (min(radii) if radii else None)
        existential = r is not None and check_fragment(phi, Signature(None, dim), existential_local(r)).ok
        if strategy == "direct" and not existential:
            res = bounded_sat(phi, None, dim, args.max_size, args.method)
        else:
            res = solve_existential_local(phi, dim, strategy, args.max_size, radius=args.radius,
                                          method=args.method)
    print(res.summary())
    if res.sat:
        if args.out:
            Path(args.out).write_text(serialize_structure(res.witness))
        else:
            sys.stdout.write(serialize_structure(res.witness))
    _json(args, verdict=str(res.verdict), size=res.size, bound=res.bound,
          seconds=round(res.stats.get("time", 0.0), 6))
    return EXIT_OK


def cmd_suite(args) -> int:
    if args.seed is None:
        raise _Usage("suite needs an explicit --seed")
    trials = args.trials if args.trials is not None else 100
    report = run_suite(args.name, trials, args.seed, jobs=args.jobs)
    _emit(args, report.text())
    _json(args, suite=args.name, trials=trials, failures=len(report.failures),
          seconds=round(report.seconds, 3))
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_export(args) -> int:
    A = parse_structure(_read(args.file))
    _emit(args, to_dot(A))
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--data", type=int, metavar="D", help="number of data values (default: from the formula)")
    shared.add_argument("--radius", type=int, metavar="R")
    shared.add_argument("--max-size", type=int, default=4, metavar="N")
    shared.add_argument("--seed", type=int, metavar="S")
    shared.add_argument("--trials", type=int, metavar="T")
    shared.add_argument("--jobs", type=int, default=1, metavar="N")
    shared.add_argument("--out", metavar="PATH")
    shared.add_argument("--json", action="store_true", help="append a '#json ' summary line")

    p = argparse.ArgumentParser(prog="dfo", description="First-order logic over data structures.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[shared], help=help_)
        sp.set_defaults(func=fn)
        return sp

    add("parse", cmd_parse, "parse and pretty-print a formula or structure").add_argument("file")
    sp = add("check", cmd_check, "model-check a formula on a structure")
    sp.add_argument("structure")
    sp.add_argument("formula")
    sp.add_argument("--assign", metavar="x=a,y=b")
    sp = add("translate", cmd_translate, "reduce an existential local sentence")
    sp.add_argument("file")
    sp.add_argument("--mode", choices=("r2d2", "r1"), required=True)
    sp = add("abstract", cmd_abstract, "abstraction of a structure w.r.t. centers")
    sp.add_argument("file")
    sp.add_argument("--centers", metavar="a,b")
    sp = add("reconstruct", cmd_reconstruct, "rebuild a data structure from a well-formed abstraction")
    sp.add_argument("file")
    sp.add_argument("--centers", metavar="a,b")
    add("addge", cmd_addge, "add the ge pair elements").add_argument("file")
    add("minusge", cmd_minusge, "remove ge-labelled elements").add_argument("file")
    sp = add("relativize", cmd_relativize, "relativize a dFO sentence to non-ge elements")
    sp.add_argument("file")
    sp.add_argument("--embed", action="store_true", help="wrap as exists x. loc[3](x){...}")
    sp = add("pad", cmd_pad, "pad a structure with constant fields, or embed a sentence")
    sp.add_argument("file")
    sp.add_argument("--extra", type=int, default=1, help="fields to add to a structure")
    sp = add("solve", cmd_solve, "bounded satisfiability")
    sp.add_argument("file")
    sp.add_argument("--via", choices=("direct", "reduction"))
    sp.add_argument("--method", choices=("ground", "enumerate"), default="ground")
    sp = add("suite", cmd_suite, "run a seeded property suite")
    sp.add_argument("name", choices=sorted(SUITES))
    sp = add("export", cmd_export, "export the data graph")
    sp.add_argument("file")
    sp.add_argument("--format", choices=("dot",), default="dot")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args)
    except (_Usage, DfoError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
