"""Parsing and evaluation of integrand expressions f(t, x, r).

The grammar is a small calculator language over the three variables t, x, r
with the functions sin, cos, exp, log, sqrt, abs:

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | base ('^' factor)?
    base   := number | ident | ident '(' expr ')' | '(' expr ')'

'^' is right-associative and binds tighter than unary minus, so -x^2 parses
as -(x^2). Evaluation accepts floats or Dual numbers in any variable slot,
which is what powers both the partial derivatives and the solver Jacobian.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Union

from . import dual
from .dual import Dual, Number, primal_value, tangent_of
from .errors import (
    DomainError,
    ExpressionSyntaxError,
    NonDifferentiablePoint,
    UnknownIdentifier,
)

VARIABLES = ("t", "x", "r")

_FUNCTIONS = {
    "sin": dual.sin,
    "cos": dual.cos,
    "exp": dual.exp,
    "log": dual.log,
    "sqrt": dual.sqrt,
    "abs": dual.fabs,
}


# -- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float

    def to_source(self) -> str:
        return repr(self.value)


@dataclass(frozen=True)
class Var:
    name: str

    def to_source(self) -> str:
        return self.name


@dataclass(frozen=True)
class Neg:
    arg: "ExprAst"

    def to_source(self) -> str:
        return f"(-{self.arg.to_source()})"


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "ExprAst"

    def to_source(self) -> str:
        return f"{self.fn}({self.arg.to_source()})"


@dataclass(frozen=True)
class BinOp:
    op: str
    lhs: "ExprAst"
    rhs: "ExprAst"

    def to_source(self) -> str:
        return f"({self.lhs.to_source()} {self.op} {self.rhs.to_source()})"


ExprAst = Union[Num, Var, Neg, Call, BinOp]


# -- tokenizer / parser -------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None or m.end() == pos:
            stripped = src[pos:].lstrip()
            if not stripped:
                break
            at = len(src) - len(stripped)
            raise ExpressionSyntaxError(f"unexpected character {src[at]!r}", at)
        if m.lastgroup is not None:
            tokens.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def advance(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_op(self, op: str):
        tok = self.peek()
        if tok is None or tok[0] != "op" or tok[1] != op:
            pos = tok[2] if tok else len(self.src)
            raise ExpressionSyntaxError(f"expected {op!r}", pos)
        self.advance()

    def parse(self) -> ExprAst:
        node = self.expr()
        tok = self.peek()
        if tok is not None:
            raise ExpressionSyntaxError(f"unexpected trailing input {tok[1]!r}", tok[2])
        return node

    def expr(self) -> ExprAst:
        node = self.term()
        while (tok := self.peek()) and tok[0] == "op" and tok[1] in "+-":
            self.advance()
            node = BinOp(tok[1], node, self.term())
        return node

    def term(self) -> ExprAst:
        node = self.factor()
        while (tok := self.peek()) and tok[0] == "op" and tok[1] in "*/":
            self.advance()
            node = BinOp(tok[1], node, self.factor())
        return node

    def factor(self) -> ExprAst:
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "-":
            self.advance()
            return Neg(self.factor())
        node = self.base()
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.advance()
            return BinOp("^", node, self.factor())
        return node

    def base(self) -> ExprAst:
        tok = self.advance()
        if tok is None:
            raise ExpressionSyntaxError("unexpected end of expression", len(self.src))
        kind, text, pos = tok
        if kind == "number":
            return Num(float(text))
        if kind == "ident":
            nxt = self.peek()
            if nxt and nxt[0] == "op" and nxt[1] == "(":
                if text not in _FUNCTIONS:
                    raise UnknownIdentifier(f"unknown function {text!r} at position {pos}")
                self.advance()
                arg = self.expr()
                self.expect_op(")")
                return Call(text, arg)
            if text not in VARIABLES:
                raise UnknownIdentifier(
                    f"unknown identifier {text!r} at position {pos}; variables are t, x, r"
                )
            return Var(text)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExpressionSyntaxError(f"unexpected token {text!r}", pos)


# -- evaluation ---------------------------------------------------------------


def eval_ast(node: ExprAst, env: Mapping[str, Number]) -> Number:
    """Evaluate an AST over float/Dual values, with per-node domain checks."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        try:
            return env[node.name]
        except KeyError:
            raise UnknownIdentifier(f"variable {node.name!r} is not available here") from None
    if isinstance(node, Neg):
        return -eval_ast(node.arg, env)
    if isinstance(node, Call):
        arg = eval_ast(node.arg, env)
        try:
            return _FUNCTIONS[node.fn](arg)
        except (DomainError, NonDifferentiablePoint) as e:
            raise type(e)(f"{e.args[0]} in '{node.to_source()}'") from None
    lhs = eval_ast(node.lhs, env)
    rhs = eval_ast(node.rhs, env)
    try:
        if node.op == "+":
            return lhs + rhs
        if node.op == "-":
            return lhs - rhs
        if node.op == "*":
            return lhs * rhs
        if node.op == "/":
            if primal_value(rhs) == 0.0:
                raise DomainError("division by zero")
            return lhs / rhs
        if node.op == "^":
            return _power(lhs, rhs)
    except (DomainError, NonDifferentiablePoint) as e:
        raise type(e)(f"{e.args[0]} in '{node.to_source()}'") from None
    raise AssertionError(f"unhandled operator {node.op!r}")


def _power(lhs: Number, rhs: Number) -> Number:
    if isinstance(rhs, Dual):
        if isinstance(lhs, Dual):
            return lhs**rhs
        if lhs <= 0.0:
            raise DomainError("power with varying exponent requires a positive base")
        return rhs.__rpow__(lhs)
    if isinstance(lhs, Dual):
        return lhs ** float(rhs)
    base, n = float(lhs), float(rhs)
    if base == 0.0 and n < 0.0:
        raise DomainError("zero base with negative exponent")
    if base < 0.0 and n != round(n):
        raise DomainError("negative base with non-integer exponent")
    return base**n


@dataclass(frozen=True)
class Lagrangian:
    """A parsed integrand f(t, x, r) with dual-number partial derivatives."""

    ast: ExprAst
    source: str

    def eval(self, t: Number, x: Number, r: Number) -> Number:
        return eval_ast(self.ast, {"t": t, "x": x, "r": r})

    def partials(self, t: Number, x: Number, r: Number) -> tuple[Number, Number, Number]:
        """(f, f_x, f_r) at (t, x, r) via two forward passes.

        Every argument is wrapped at a fresh seeding level, so the inputs may
        themselves be Dual; the returned partials then carry the callers'
        tangents (nested differentiation).
        """
        fx_pass = eval_ast(
            self.ast, {"t": Dual(t), "x": Dual(x, 1.0), "r": Dual(r)}
        )
        fr_pass = eval_ast(
            self.ast, {"t": Dual(t), "x": Dual(x), "r": Dual(r, 1.0)}
        )
        f = fx_pass.primal if isinstance(fx_pass, Dual) else fx_pass
        return f, tangent_of(fx_pass), tangent_of(fr_pass)

    def to_source(self) -> str:
        """Parenthesized rendering that re-parses to an equivalent AST."""
        return self.ast.to_source()

    def __repr__(self):
        return f"Lagrangian({self.source!r})"


def parse_lagrangian(src: str) -> Lagrangian:
    """Parse expression text into a Lagrangian.

    Raises ExpressionSyntaxError (with position) or UnknownIdentifier.
    """
    if not src or not src.strip():
        raise ExpressionSyntaxError("empty expression", 0)
    return Lagrangian(ast=_Parser(src).parse(), source=src)
