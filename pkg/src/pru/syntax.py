"""Reader and printer for the description DSL.

Grammar (whitespace-insensitive)::

    term  := "z" | "s" | "(pi" INT INT ")"
           | "(comp" term term ")" | "(rec" term term ")" | "(pair" term term ")"
           | macro
    macro := "(id" INT ")" | "(diag" INT ")" | "(tw" INT INT ")"
           | "(proj" INT "[" INT+ "]" ")" | "(prod" term term ")"

Macros expand while reading; the printer only emits core forms, so
``parse(print_term(t)) == t`` for every term.
"""

from __future__ import annotations

import re

from pru.terms import (
    ArityError,
    Comp,
    Pair,
    Proj,
    Rec,
    S,
    SpecError,
    Succ,
    Term,
    Z,
    Zero,
    mk_diagonal,
    mk_identity,
    mk_multi_proj,
    mk_product,
    mk_twist,
)

__all__ = ["ParseError", "parse", "print_term"]


class ParseError(ValueError):
    def __init__(self, message, line, column):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


_TOKEN = re.compile(r"\s*(?:(?P<open>\()|(?P<close>\))|(?P<lbr>\[)|(?P<rbr>\])"
                    r"|(?P<int>-?\d+)|(?P<word>[A-Za-z_][A-Za-z_0-9]*)|(?P<bad>\S))")


class _Reader:
    def __init__(self, text):
        self.text = text
        self.tokens = []
        for m in _TOKEN.finditer(text):
            kind = m.lastgroup
            if kind is None:
                continue
            start = m.start(kind)
            if kind == "bad":
                raise ParseError(f"unexpected character {m.group(kind)!r}", *self._where(start))
            self.tokens.append((kind, m.group(kind), start))
        self.pos = 0

    def _where(self, offset):
        line = self.text.count("\n", 0, offset) + 1
        col = offset - (self.text.rfind("\n", 0, offset) + 1) + 1
        return line, col

    def error(self, message, offset=None):
        if offset is None:
            offset = self.tokens[self.pos][2] if self.pos < len(self.tokens) else len(self.text)
        return ParseError(message, *self._where(offset))

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, kind=None):
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of input")
        if kind is not None and tok[0] != kind:
            raise self.error(f"expected {kind}, found {tok[1]!r}")
        self.pos += 1
        return tok

    def integer(self):
        return int(self.take("int")[1])

    def term(self) -> Term:
        kind, value, offset = self.take()
        if kind == "word":
            if value == "z":
                return Z
            if value == "s":
                return S
            raise self.error(f"unknown atom {value!r}", offset)
        if kind != "open":
            raise self.error(f"unexpected {value!r}", offset)
        head_kind, head, head_offset = self.take()
        if head_kind != "word":
            raise self.error(f"expected an operator, found {head!r}", head_offset)
        try:
            node = self._form(head, head_offset)
        except (ArityError, SpecError) as exc:
            line, col = self._where(offset)
            exc.args = (f"{exc.args[0]} (line {line}, column {col})",)
            raise
        self.take("close")
        return node

    def _form(self, head, offset):
        if head == "pi":
            return Proj(self.integer(), self.integer())
        if head in ("comp", "rec", "pair", "prod"):
            left, right = self.term(), self.term()
            return {"comp": Comp, "rec": Rec, "pair": Pair, "prod": mk_product}[head](left, right)
        if head == "id":
            return mk_identity(self.integer())
        if head == "diag":
            return mk_diagonal(self.integer())
        if head == "tw":
            return mk_twist(self.integer(), self.integer())
        if head == "proj":
            n = self.integer()
            self.take("lbr")
            xs = []
            while self.peek() is not None and self.peek()[0] == "int":
                xs.append(self.integer())
            self.take("rbr")
            if not xs:
                raise self.error("empty projection list")
            return mk_multi_proj(n, xs)
        raise self.error(f"unknown form {head!r}", offset)


def parse(text: str) -> Term:
    """Read a single term; trailing input is an error."""
    reader = _Reader(text)
    if reader.peek() is None:
        raise reader.error("empty input")
    t = reader.term()
    if reader.peek() is not None:
        raise reader.error("trailing input after term")
    return t


def print_term(t: Term) -> str:
    if isinstance(t, Zero):
        return "z"
    if isinstance(t, Succ):
        return "s"
    if isinstance(t, Proj):
        return f"(pi {t.n} {t.i})"
    head = {Comp: "comp", Rec: "rec", Pair: "pair"}[type(t)]
    left, right = t.children
    return f"({head} {left.text} {right.text})"
