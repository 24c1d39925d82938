"""Recursive-descent parser for polynomial expressions.

Grammar (standard precedence, ``^`` binds tightest, no implicit
multiplication)::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := ('+' | '-') factor | atom ('^' INT)?
    atom   := NUMBER ('/' NUMBER)? | NAME | '(' expr ')'

Literals are integers or rationals ``a/b``; variables are resolved against
a caller-supplied name table (``x0 .. x{n-1}`` for forms).
"""

from __future__ import annotations

from fractions import Fraction

from .domains import QQ
from .polynomials import HomogeneousForm, Polynomial


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownVariableError(ParseError):
    pass


_PUNCT = "+-*^/()"


def _tokenize(text: str):
    tokens = []  # (kind, value, pos)
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _PUNCT:
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("num", int(text[i:j]), i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, text: str, names: dict, nvars: int):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.names = names
        self.nvars = nvars

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.advance()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    def parse(self) -> Polynomial:
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.factor()
        while self.peek()[0] == "*":
            self.advance()
            p = p * self.factor()
        return p

    def factor(self) -> Polynomial:
        tok = self.peek()
        if tok[0] in ("+", "-"):
            self.advance()
            p = self.factor()
            return -p if tok[0] == "-" else p
        p = self.atom()
        if self.peek()[0] == "^":
            self.advance()
            etok = self.expect("num")
            p = p**etok[1]
        return p

    def atom(self) -> Polynomial:
        tok = self.advance()
        if tok[0] == "num":
            value = Fraction(tok[1])
            if self.peek()[0] == "/":
                self.advance()
                den = self.expect("num")
                if den[1] == 0:
                    raise ParseError("zero denominator", den[2])
                value = Fraction(tok[1], den[1])
            return Polynomial.constant(self.nvars, value, QQ)
        if tok[0] == "name":
            idx = self.names.get(tok[1])
            if idx is None:
                raise UnknownVariableError(f"unknown variable {tok[1]!r}", tok[2])
            return Polynomial.variable(idx, self.nvars, QQ)
        if tok[0] == "(":
            p = self.expr()
            self.expect(")")
            return p
        raise ParseError(f"unexpected {tok[1]!r}", tok[2])


def parse_polynomial(text: str, names, nvars: int | None = None) -> Polynomial:
    """Parse over Q with an explicit variable table.

    ``names`` is either a dict name -> index or a sequence of names.
    """
    if not isinstance(names, dict):
        names = {name: i for i, name in enumerate(names)}
    if nvars is None:
        nvars = max(names.values()) + 1 if names else 0
    return _Parser(text, names, nvars).parse()


def parse_form(text: str, nvars: int) -> HomogeneousForm:
    """Parse an expression in x0..x{nvars-1} and require homogeneity.

    Inhomogeneous input raises :class:`InhomogeneousError` naming the two
    mismatched degrees.
    """
    names = {f"x{i}": i for i in range(nvars)}
    p = parse_polynomial(text, names, nvars)
    return HomogeneousForm.from_polynomial(p)
