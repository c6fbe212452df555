"""Tokenizer and recursive-descent parser for the polynomial/word grammar.

The grammar covers polynomials such as ``2*t1^2*t2 + 1`` and envelope words
such as ``D t`` or ``(1 + t)*x1^2*x2``.  Juxtaposition means multiplication.
Parsing produces a small AST; callers evaluate it into whatever structure
they need (ring elements, envelope elements, formal word sums).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class ParseError(ValueError):
    """Syntax error with a 1-based column."""

    def __init__(self, message: str, column: int):
        super().__init__(f"{message} (column {column})")
        self.message = message
        self.column = column


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Name:
    name: str
    column: int


@dataclass(frozen=True)
class Add:
    terms: tuple  # of (sign, node)


@dataclass(frozen=True)
class Mul:
    factors: tuple


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(0).strip() == "":
            break
        col = m.start(m.lastindex) + 1
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), col))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), col))
        else:
            tokens.append(("op", m.group(3), col))
        pos = m.end()
    tokens.append(("end", None, len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, col = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected '{op}'", col)

    def expr(self):
        terms = []
        kind, val, _ = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        terms.append((sign, self.term()))
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                terms.append((-1 if val == "-" else 1, self.term()))
            else:
                break
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return Add(tuple(terms))

    def term(self):
        factors = [self.factor()]
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                factors.append(self.factor())
            elif kind in ("int", "name") or (kind == "op" and val == "("):
                factors.append(self.factor())
            else:
                break
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def factor(self):
        node = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, col = self.take()
            if kind != "int":
                raise ParseError("exponent must be a non-negative integer", col)
            node = Pow(node, val)
        return node

    def atom(self):
        kind, val, col = self.take()
        if kind == "int":
            return Num(val)
        if kind == "name":
            return Name(val, col)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        if kind == "end":
            raise ParseError("unexpected end of input", col)
        raise ParseError(f"unexpected '{val}'", col)


def parse(text: str):
    """Parse ``text`` into an AST; raise :class:`ParseError` on bad syntax."""
    p = _Parser(text)
    node = p.expr()
    kind, val, col = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected '{val}'", col)
    return node


def evaluate(node, *, num: Callable, name: Callable):
    """Fold an AST.  ``num(int)`` and ``name(Name)`` build atoms; the results
    must support ``+``, unary ``-`` and ``*`` (applied in written order)."""
    if isinstance(node, Num):
        return num(node.value)
    if isinstance(node, Name):
        return name(node)
    if isinstance(node, Pow):
        base = evaluate(node.base, num=num, name=name)
        if node.exponent == 0:
            return num(1)
        out = base
        for _ in range(node.exponent - 1):
            out = out * base
        return out
    if isinstance(node, Mul):
        out = None
        for f in node.factors:
            v = evaluate(f, num=num, name=name)
            out = v if out is None else out * v
        return out
    if isinstance(node, Add):
        out = None
        for sign, t in node.terms:
            v = evaluate(t, num=num, name=name)
            if sign < 0:
                v = -v
            out = v if out is None else out + v
        return out
    raise TypeError(f"unknown node {node!r}")
