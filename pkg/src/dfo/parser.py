"""Concrete syntax for formulas and structures, with round-tripping printers.

Formula grammar (``!`` binds tighter than ``&``, which binds tighter than
``|``; quantifier bodies extend as far right as possible)::

    formula := "exists" VAR "." formula | "forall" VAR "." formula | disj
    disj    := conj ("|" conj)*
    conj    := neg ("&" neg)*
    neg     := "!" neg | atom
    atom    := PRED "(" VAR ")" | VAR "=" VAR | VAR "!=" VAR
             | "rel" "(" INT "," INT "," VAR "," VAR ")"
             | "loc" "[" INT "]" "(" VAR ")" "{" formula "}" | "(" formula ")"

An identifier directly followed by ``(`` is a predicate, any other
identifier is a variable.  As a convenience a quantifier may also start an
operand of ``!``, ``&`` or ``|``; the printer never relies on that.

Structure format::

    dstruct D=2
    predicates leader
    elem a : 1 2 [leader]
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .errors import InputError
from .logic import And, Eq, Exists, Forall, Formula, Loc, Not, Or, Pred, Rel
from .structures import DataStructure

__all__ = [
    "SourceSpan",
    "ParseError",
    "parse_formula",
    "parse_structure",
    "parse_abstraction",
    "serialize_formula",
    "serialize_structure",
    "serialize_abstraction",
    "KEYWORDS",
]

KEYWORDS = frozenset({"exists", "forall", "loc", "rel", "dstruct", "predicates", "elem"})


class SourceSpan(NamedTuple):
    line: int
    column: int
    length: int


class ParseError(InputError):
    def __init__(self, span: SourceSpan, expected: str, found: str):
        self.span = span
        self.expected = expected
        self.found = found
        super().__init__(f"{span.line}:{span.column}: expected {expected}, found {found}")


@dataclass(frozen=True)
class _Token:
    kind: str  # "ident" | "int" | "sym" | "eof"
    text: str
    span: SourceSpan


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>[0-9]+)"
    r"|(?P<sym>!=|[(){}\[\],.=!&|])"
)


def _eof_span(text: str) -> SourceSpan:
    if not text:
        return SourceSpan(1, 1, 1)
    return _span_at(text, len(text) - 1, 1)


def _span_at(text: str, offset: int, length: int) -> SourceSpan:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return SourceSpan(line, col, max(1, length))


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(_span_at(text, pos, 1), "a token", repr(text[pos]))
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), _span_at(text, pos, m.end() - pos)))
        pos = m.end()
    tokens.append(_Token("eof", "", _eof_span(text)))
    return tokens


class _FormulaParser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.pos]

    def peek(self, k=1) -> _Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def fail(self, expected: str):
        tok = self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(tok.span, expected, found)

    def accept(self, text: str) -> bool:
        if self.tok.kind in ("sym", "ident") and self.tok.text == text:
            self.pos += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            self.fail(repr(text))

    def var(self) -> str:
        tok = self.tok
        if tok.kind != "ident" or tok.text in KEYWORDS:
            self.fail("variable")
        self.pos += 1
        return tok.text

    def integer(self, what: str, minimum: int) -> int:
        tok = self.tok
        if tok.kind != "int" or int(tok.text) < minimum:
            self.fail(what)
        self.pos += 1
        return int(tok.text)

    def parse(self) -> Formula:
        phi = self.formula()
        if self.tok.kind != "eof":
            self.fail("end of input")
        return phi

    def formula(self) -> Formula:
        if self.tok.kind == "ident" and self.tok.text in ("exists", "forall"):
            quant = Exists if self.tok.text == "exists" else Forall
            self.pos += 1
            v = self.var()
            self.expect(".")
            return quant(v, self.formula())
        return self.disj()

    def disj(self) -> Formula:
        phi = self.conj()
        while self.accept("|"):
            phi = Or(phi, self.conj())
        return phi

    def conj(self) -> Formula:
        phi = self.neg()
        while self.accept("&"):
            phi = And(phi, self.neg())
        return phi

    def neg(self) -> Formula:
        if self.accept("!"):
            return Not(self.neg())
        if self.tok.kind == "ident" and self.tok.text in ("exists", "forall"):
            return self.formula()
        return self.atom()

    def atom(self) -> Formula:
        tok = self.tok
        if self.accept("("):
            phi = self.formula()
            self.expect(")")
            return phi
        if self.accept("rel"):
            self.expect("(")
            i = self.integer("field index", 1)
            self.expect(",")
            j = self.integer("field index", 1)
            self.expect(",")
            x = self.var()
            self.expect(",")
            y = self.var()
            self.expect(")")
            return Rel(i, j, x, y)
        if self.accept("loc"):
            self.expect("[")
            r = self.integer("radius", 0)
            self.expect("]")
            self.expect("(")
            x = self.var()
            self.expect(")")
            self.expect("{")
            body = self.formula()
            self.expect("}")
            return Loc(r, x, body)
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            if self.peek().kind == "sym" and self.peek().text == "(":
                self.pos += 2
                x = self.var()
                self.expect(")")
                return Pred(tok.text, x)
            x = self.var()
            if self.accept("="):
                return Eq(x, self.var())
            if self.accept("!="):
                return Not(Eq(x, self.var()))
            self.fail("'=' or '!='")
        self.fail("formula")


def parse_formula(text: str) -> Formula:
    return _FormulaParser(text).parse()


# --------------------------------------------------------------------------
# Structures

_ID = r"[A-Za-z0-9_]+"
_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_HEADER_RE = re.compile(r"\s*dstruct\s+D\s*=\s*([0-9]+)\s*$")
_PREDS_RE = re.compile(r"\s*predicates\b(.*)$")
_ELEM_RE = re.compile(rf"\s*elem\s+({_ID})\s*:([^\[]*)(\[[^\]]*\])?\s*$")
_CENTERS_RE = re.compile(r"#\s*centers\s*:\s*(.*)$")


def _line_span(lines, idx, start=0, length=None) -> SourceSpan:
    text = lines[idx]
    if length is None:
        length = max(1, len(text) - start)
    return SourceSpan(idx + 1, min(start, max(0, len(text) - 1)) + 1, max(1, length))


def _parse_structure_lines(text: str):
    lines = text.split("\n")
    centers = None
    body = []
    for idx, line in enumerate(lines):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            m = _CENTERS_RE.match(stripped)
            if m:
                centers = tuple(c.strip() for c in m.group(1).split(",") if c.strip())
            continue
        body.append(idx)
    if not body:
        raise ParseError(_eof_span(text), "'dstruct D=<int>'", "end of input")

    first = body[0]
    m = _HEADER_RE.match(lines[first])
    if not m:
        raise ParseError(_line_span(lines, first), "'dstruct D=<int>'", repr(lines[first].strip()))
    dim = int(m.group(1))

    declared = []
    rest = body[1:]
    if rest:
        m = _PREDS_RE.match(lines[rest[0]])
        if m:
            for name in m.group(1).split():
                if not re.fullmatch(_NAME, name) or name in KEYWORDS:
                    start = lines[rest[0]].find(name)
                    raise ParseError(_line_span(lines, rest[0], start, len(name)), "predicate name", repr(name))
                declared.append(name)
            rest = rest[1:]

    universe, data = [], {}
    preds = {p: set() for p in declared}
    for idx in rest:
        line = lines[idx]
        m = _ELEM_RE.match(line)
        if not m:
            raise ParseError(_line_span(lines, idx), "'elem <id> : <values> [<preds>]'", repr(line.strip()))
        elem = m.group(1)
        if elem in data:
            raise ParseError(_line_span(lines, idx, m.start(1), len(elem)), "a fresh element id", repr(elem))
        raw = m.group(2).split()
        for tok in raw:
            if not tok.isdigit():
                start = m.start(2) + m.group(2).find(tok)
                raise ParseError(_line_span(lines, idx, start, len(tok)), "nonnegative integer", repr(tok))
        if len(raw) != dim:
            raise ParseError(
                _line_span(lines, idx, m.start(2), max(1, len(m.group(2)))),
                f"{dim} data values (arity mismatch)",
                f"{len(raw)} values",
            )
        if m.group(3):
            inner = m.group(3)[1:-1]
            for name in (n.strip() for n in inner.split(",")):
                if not name:
                    continue
                if name not in preds:
                    start = m.start(3) + m.group(3).find(name)
                    raise ParseError(_line_span(lines, idx, start, len(name)), "declared predicate", repr(name))
                preds[name].add(elem)
        universe.append(elem)
        data[elem] = tuple(int(t) for t in raw)
    if not universe:
        raise ParseError(_eof_span(text), "at least one 'elem' line", "end of input")
    return DataStructure(tuple(universe), dim, preds, data), centers


def parse_structure(text: str) -> DataStructure:
    return _parse_structure_lines(text)[0]


def parse_abstraction(text: str):
    """Parse a structure carrying a ``# centers: a,b`` header line."""
    structure, centers = _parse_structure_lines(text)
    if centers is not None:
        for c in centers:
            structure.check_element(c)
    return structure, centers


# --------------------------------------------------------------------------
# Printers


def serialize_formula(phi: Formula) -> str:
    return _ser(phi, 0)


def _ser(phi, ctx):
    match phi:
        case Exists(v, a) | Forall(v, a):
            kw = "exists" if isinstance(phi, Exists) else "forall"
            s = f"{kw} {v}. {_ser(a, 0)}"
            return f"({s})" if ctx > 0 else s
        case Or(a, b):
            s = f"{_ser(a, 1)} | {_ser(b, 2)}"
            return f"({s})" if ctx > 1 else s
        case And(a, b):
            s = f"{_ser(a, 2)} & {_ser(b, 3)}"
            return f"({s})" if ctx > 2 else s
        case Not(Eq(x, y)):
            return f"{x} != {y}"
        case Not(a):
            return "!" + _ser(a, 3)
        case Eq(x, y):
            return f"{x} = {y}"
        case Pred(name, x):
            return f"{name}({x})"
        case Rel(i, j, x, y):
            return f"rel({i},{j},{x},{y})"
        case Loc(r, x, a):
            return f"loc[{r}]({x}){{{_ser(a, 0)}}}"
    raise TypeError(f"not a formula: {phi!r}")


def serialize_structure(A: DataStructure) -> str:
    names = sorted(A.predicates)
    lines = [f"dstruct D={A.dim}", " ".join(["predicates"] + names)]
    for e in A.universe:
        parts = [f"elem {e} :"] + [str(v) for v in A.data[e]]
        labels = A.labels(e)
        if labels:
            parts.append("[" + ",".join(labels) + "]")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def serialize_abstraction(A: DataStructure, centers: Optional[tuple]) -> str:
    head = f"# centers: {','.join(centers)}\n" if centers else ""
    return head + serialize_structure(A)
