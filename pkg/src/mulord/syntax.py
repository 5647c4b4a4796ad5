"""Concrete syntax: tokenizer, recursive-descent parser and printer.

Grammar (lowest precedence first)::

    formula := or ('->' formula)?                     right associative
    or      := and ('|' and)*
    and     := unary ('&' unary)*
    unary   := '!' unary | ('exists' | 'forall') VAR '.' formula | primary
    primary := 'true' | 'false' | 'R' '[' INT ']' '(' term ')'
             | term ('=' | '<' | '<=') term | '(' formula ')'
    term    := factor ('*' factor)*
    factor  := base ('^' '-'? INT)?
    base    := VAR | '-'? NUM | 'inv' '(' term ')' | '(' term ')'

``t <= u`` is sugar for ``t < u | t = u``.  Quantifier bodies extend as far
right as possible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .formula import (
    And,
    Bottom,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Lt,
    Monomial,
    Not,
    Or,
    Pow,
    Top,
    rename_bound,
)

DOMAINS = ("qpos", "q")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnsupportedConstruct(ValueError):
    """A construct that is well formed but not available in the selected domain."""


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<name>[a-z][a-z0-9_]*)
  | (?P<R>R)
  | (?P<op>->|<=|[<=!&|()\[\]*^.\-])
    """,
    re.VERBOSE,
)

KEYWORDS = {"exists", "forall", "true", "false", "inv"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        chunk = m.group()
        if kind == "ws":
            for i, ch in enumerate(chunk):
                if ch == "\n":
                    line += 1
                    line_start = pos + i + 1
        else:
            if kind == "name" and chunk in KEYWORDS:
                kind = chunk
            elif kind == "op":
                kind = chunk
            tokens.append(Token(kind, chunk, line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, domain: str):
        if domain not in DOMAINS:
            raise ValueError(f"unknown domain {domain!r}")
        self.tokens = tokenize(text)
        self.pos = 0
        self.domain = domain

    # token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.column)

    def accept(self, kind: str) -> Optional[Token]:
        if self.tok.kind == kind:
            t = self.tok
            self.pos += 1
            return t
        return None

    def expect(self, kind: str) -> Token:
        t = self.accept(kind)
        if t is None:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {kind!r}, found {found!r}")
        return t

    # formulas

    def parse(self) -> Formula:
        f = self.formula()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return f

    def formula(self) -> Formula:
        lhs = self.disjunction()
        if self.accept("->"):
            return Implies(lhs, self.formula())
        return lhs

    def disjunction(self) -> Formula:
        args = [self.conjunction()]
        while self.accept("|"):
            args.append(self.conjunction())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conjunction(self) -> Formula:
        args = [self.unary()]
        while self.accept("&"):
            args.append(self.unary())
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary(self) -> Formula:
        if self.accept("!"):
            return Not(self.unary())
        for kind, node in (("exists", Exists), ("forall", Forall)):
            if self.accept(kind):
                var = self.expect("name").text
                self.expect(".")
                return node(var, self.formula())
        return self.primary()

    def primary(self) -> Formula:
        if self.accept("true"):
            return Top()
        if self.accept("false"):
            return Bottom()
        r_tok = self.accept("R")
        if r_tok:
            if self.domain == "q":
                raise UnsupportedConstruct(
                    f"line {r_tok.line}, column {r_tok.column}: power predicates are not part of the full-rational language"
                )
            self.expect("[")
            n_tok = self.expect("num")
            if "/" in n_tok.text or int(n_tok.text) < 2:
                raise self.error("power predicate index must be an integer >= 2", n_tok)
            self.expect("]")
            self.expect("(")
            arg = self.term()
            self.expect(")")
            return Pow(int(n_tok.text), arg)
        if self.tok.kind == "(":
            # either a parenthesized term starting an atom, or a formula group
            saved = self.pos
            try:
                return self.atom()
            except ParseError:
                self.pos = saved
            self.expect("(")
            f = self.formula()
            self.expect(")")
            return f
        return self.atom()

    def atom(self) -> Formula:
        lhs = self.term()
        op = self.tok
        if self.accept("="):
            return Eq(lhs, self.term())
        if self.accept("<"):
            return Lt(lhs, self.term())
        if self.accept("<="):
            rhs = self.term()
            return Or((Lt(lhs, rhs), Eq(lhs, rhs)))
        raise self.error(f"expected '=', '<' or '<=', found {op.text or 'end of input'!r}")

    # terms

    def term(self) -> Monomial:
        m = self.factor()
        while self.accept("*"):
            m = m * self.factor()
        return m

    def factor(self) -> Monomial:
        base = self.base()
        caret = self.accept("^")
        if caret is None:
            return base
        negative = self.accept("-") is not None
        k_tok = self.expect("num")
        if "/" in k_tok.text:
            raise self.error("exponent must be an integer", k_tok)
        k = int(k_tok.text)
        if negative:
            if self.domain == "q" and k:
                raise self._unsupported(caret, "negative exponents")
            k = -k
        return base**k

    def base(self) -> Monomial:
        tok = self.tok
        if self.accept("name"):
            return Monomial.var(tok.text)
        if self.accept("inv"):
            if self.domain == "q":
                raise self._unsupported(tok, "inv")
            self.expect("(")
            m = self.term()
            self.expect(")")
            return m.inverse()
        if self.accept("("):
            m = self.term()
            self.expect(")")
            return m
        negative = self.accept("-") is not None
        num = self.accept("num")
        if num is None:
            raise self.error(f"expected a term, found {self.tok.text or 'end of input'!r}")
        p, _, q = num.text.partition("/")
        if q and int(q) == 0:
            raise self.error("zero denominator", num)
        value = Fraction(int(p), int(q) if q else 1)
        if negative:
            value = -value
        if self.domain == "qpos" and value <= 0:
            raise self._unsupported(tok, "non-positive constants")
        return Monomial.const(value)

    def _unsupported(self, tok: Token, what: str) -> UnsupportedConstruct:
        return UnsupportedConstruct(
            f"line {tok.line}, column {tok.column}: {what} not allowed in domain {self.domain}"
        )


def parse(text: str, domain: str = "qpos") -> Formula:
    """Parse a formula; bound variables come back alpha-renamed apart."""
    return rename_bound(_Parser(text, domain).parse())


def parse_term(text: str, domain: str = "qpos") -> Monomial:
    p = _Parser(text, domain)
    m = p.term()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}")
    return m


# -- printing --------------------------------------------------------------


def _format_rational(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def format_term(m: Monomial) -> str:
    parts = [v if e == 1 else f"{v}^{e}" for v, e in m.powers]
    if m.coeff != 1 or not parts:
        parts.insert(0, _format_rational(m.coeff))
    return "*".join(parts)


_QUANT, _IMPLIES, _OR, _AND, _UNARY, _ATOM = range(6)


def _fmt(f: Formula) -> Tuple[str, int]:
    if isinstance(f, Top):
        return "true", _ATOM
    if isinstance(f, Bottom):
        return "false", _ATOM
    if isinstance(f, Eq):
        return f"{format_term(f.lhs)} = {format_term(f.rhs)}", _ATOM
    if isinstance(f, Lt):
        return f"{format_term(f.lhs)} < {format_term(f.rhs)}", _ATOM
    if isinstance(f, Pow):
        if f.n == 1:
            return "true", _ATOM
        return f"R[{f.n}]({format_term(f.arg)})", _ATOM
    if isinstance(f, Not):
        return "!" + _wrap(f.arg, _UNARY), _UNARY
    if isinstance(f, And):
        if not f.args:
            return "true", _ATOM
        return " & ".join(_wrap(a, _UNARY) for a in f.args), _AND
    if isinstance(f, Or):
        if not f.args:
            return "false", _ATOM
        return " | ".join(_wrap(a, _AND) for a in f.args), _OR
    if isinstance(f, Implies):
        return f"{_wrap(f.lhs, _OR)} -> {_wrap(f.rhs, _IMPLIES)}", _IMPLIES
    if isinstance(f, Exists):
        return f"exists {f.var}. {to_text(f.body)}", _QUANT
    if isinstance(f, Forall):
        return f"forall {f.var}. {to_text(f.body)}", _QUANT
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f: Formula, min_prec: int) -> str:
    text, prec = _fmt(f)
    return f"({text})" if prec < min_prec else text


def to_text(f: Formula) -> str:
    return _fmt(f)[0]
