"""Text problem files: a ``polyhedron`` section and a ``set`` section.

    # comment
    polyhedron
    dim 2
    2 3 <= 9/2
    1 0 <= 1
    set
    explicit
    0 0
    1 1

The set section is ``integer_hull`` or ``mixed <n_int>`` followed by a
``dim`` line and rows, or ``explicit`` followed by one point per line.
Numbers are integers or ``p/q``; nothing is ever converted to floating point.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError
from .ratpoly import RELATIONS, Polyhedron, fmt
from .sets import DEFAULT_MAX_ENUM, SSpec

_NUM = re.compile(r"^[+-]?\d+(/[+-]?\d+)?$")


@dataclass(frozen=True)
class Problem:
    P: Polyhedron
    S: SSpec


@dataclass
class _Line:
    no: int
    text: str
    tokens: list[tuple[int, str]]  # (1-based column, token)


def _lex(text: str) -> list[_Line]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", body)]
        if toks:
            out.append(_Line(no, body, toks))
    return out


def _number(tok: tuple[int, str], line: _Line) -> Fraction:
    col, s = tok
    if not _NUM.match(s):
        raise ParseError(f"not a rational number: {s!r}", line.no, col)
    if "/" in s:
        p, q = s.split("/")
        if int(q) == 0:
            raise ParseError(f"zero denominator in {s!r}", line.no, col)
        return Fraction(int(p), int(q))
    return Fraction(int(s))


def _integer(tok, line) -> int:
    x = _number(tok, line)
    if x.denominator != 1:
        raise ParseError(f"expected an integer, got {tok[1]!r}", line.no, tok[0])
    return int(x)


class _Reader:
    def __init__(self, lines: list[_Line]):
        self.lines = lines
        self.i = 0

    def peek(self) -> _Line | None:
        return self.lines[self.i] if self.i < len(self.lines) else None

    def next(self) -> _Line:
        line = self.peek()
        if line is None:
            last = self.lines[-1].no if self.lines else 0
            raise ParseError("unexpected end of file", last + 1, 1)
        self.i += 1
        return line


_KEYWORDS = {"polyhedron", "set", "integer_hull", "explicit", "mixed", "dim"}


def _is_keyword(line: _Line) -> bool:
    return line.tokens[0][1] in _KEYWORDS


def _read_block(rd: _Reader) -> Polyhedron:
    head = rd.next()
    if head.tokens[0][1] != "dim" or len(head.tokens) != 2:
        raise ParseError("expected 'dim n'", head.no, head.tokens[0][0])
    n = _integer(head.tokens[1], head)
    if n < 1:
        raise ParseError("dimension must be positive", head.no, head.tokens[1][0])
    rows = []
    while (line := rd.peek()) is not None and not _is_keyword(line):
        rd.next()
        toks = line.tokens
        if len(toks) != n + 2:
            col = toks[min(len(toks), n + 2) - 1][0]
            raise ParseError(f"expected {n} coefficients, a relation and a right-hand side", line.no, col)
        rel_col, rel = toks[n]
        if rel not in RELATIONS:
            raise ParseError(f"unknown relation {rel!r}", line.no, rel_col)
        a = [_number(t, line) for t in toks[:n]]
        rows.append((a, rel, _number(toks[n + 1], line)))
    return Polyhedron.from_rows(rows, n)


def parse_text(text: str, max_enum: int = DEFAULT_MAX_ENUM) -> Problem:
    rd = _Reader(_lex(text))
    P = None
    S = None
    while (line := rd.peek()) is not None:
        word = line.tokens[0][1]
        if word == "polyhedron" and len(line.tokens) == 1:
            if P is not None:
                raise ParseError("duplicate polyhedron section", line.no, 1)
            rd.next()
            P = _read_block(rd)
        elif word == "set" and len(line.tokens) == 1:
            if S is not None:
                raise ParseError("duplicate set section", line.no, 1)
            rd.next()
            S = _read_set(rd, max_enum)
        else:
            raise ParseError(f"unexpected {word!r}", line.no, line.tokens[0][0])
    if P is None:
        raise ParseError("missing polyhedron section", 1, 1)
    if S is None:
        raise ParseError("missing set section", 1, 1)
    if S.n != P.n:
        raise ParseError(f"set has dimension {S.n}, polyhedron {P.n}", 1, 1)
    return Problem(P, S)


def _read_set(rd: _Reader, max_enum: int) -> SSpec:
    head = rd.next()
    kind = head.tokens[0][1]
    if kind == "integer_hull" and len(head.tokens) == 1:
        return SSpec.integer_hull(_read_block(rd), max_enum)
    if kind == "mixed" and len(head.tokens) == 2:
        n_int = _integer(head.tokens[1], head)
        R = _read_block(rd)
        if not 0 <= n_int <= R.n:
            raise ParseError("n_int out of range", head.no, head.tokens[1][0])
        from .mip import mixed_set

        return mixed_set(R, n_int, max_enum)
    if kind == "explicit" and len(head.tokens) == 1:
        pts = []
        while (line := rd.peek()) is not None and not _is_keyword(line):
            rd.next()
            p = tuple(_integer(t, line) for t in line.tokens)
            if pts and len(p) != len(pts[0]):
                raise ParseError("point of the wrong dimension", line.no, 1)
            pts.append(p)
        if not pts:
            raise ParseError("explicit set without points", head.no, 1)
        return SSpec.explicit(pts)
    raise ParseError(f"unknown set kind {kind!r}", head.no, head.tokens[0][0])


def parse_problem(path, max_enum: int = DEFAULT_MAX_ENUM) -> tuple[Polyhedron, SSpec]:
    with open(path, encoding="utf-8") as fh:
        prob = parse_text(fh.read(), max_enum)
    return prob.P, prob.S


# ---------------------------------------------------------------------------
# writer


def write_block(P: Polyhedron) -> list[str]:
    out = [f"dim {P.n}"]
    for a, rel, b in P.rows():
        out.append(" ".join(fmt(x) for x in a) + f" {rel} {fmt(b)}")
    return out


def write_set(S: SSpec) -> list[str]:
    if S.kind == "explicit":
        return ["explicit"] + [" ".join(str(x) for x in p) for p in S.points]
    if S.kind == "integer_hull":
        return ["integer_hull"] + write_block(S.R)
    return [f"mixed {S.n_int}"] + write_block(S.R)


def write_problem(P: Polyhedron, S: SSpec) -> str:
    return "\n".join(["polyhedron"] + write_block(P) + ["set"] + write_set(S)) + "\n"
