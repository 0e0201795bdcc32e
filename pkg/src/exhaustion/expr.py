"""Pratt parser for single-variable integrand expressions.

Grammar: numbers, the variable ``x``, constants ``pi`` and ``e``, the calls
``sin cos tan exp ln sqrt abs`` (one argument each), binary ``+ - * / ^`` and
unary minus, with parentheses for grouping.  ``^`` binds tightest and is
right-associative, then unary minus (so ``-2^2 == -4``), then ``* /``, then
``+ -``.  Evaluation follows IEEE semantics: ``1/0`` is inf and ``ln(-1)`` is
nan, which the quadrature engine reports as a non-finite sample.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .core import Integrand

__all__ = [
    "BinOp",
    "Call",
    "Const",
    "ExprError",
    "Neg",
    "Num",
    "Var",
    "eval_ast",
    "integrand_from_text",
    "parse",
    "to_text",
]

FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "exp": np.exp,
    "ln": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
}
CONSTANTS = {"pi": np.pi, "e": np.e}


class ExprError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: Ast


@dataclass(frozen=True)
class BinOp:
    op: str
    left: Ast
    right: Ast


@dataclass(frozen=True)
class Call:
    func: str
    arg: Ast


Ast = Union[Num, Var, Const, Neg, BinOp, Call]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)

# left binding powers
_INFIX = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 40}
_UNARY = 30


@dataclass(frozen=True)
class _Tok:
    kind: str  # num | name | op | end
    text: str
    offset: int


def _tokens(text: str) -> list[_Tok]:
    out = []
    pos = 0
    while text[pos:].strip():
        match = _TOKEN.match(text, pos)
        if match is None:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprError(f"unexpected character {text[bad]!r}", len(text[:bad].encode()))
        kind = match.lastgroup
        out.append(_Tok(kind, match.group(kind), len(text[: match.start(kind)].encode())))
        pos = match.end()
    out.append(_Tok("end", "", len(text.encode())))
    return out


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokens(text)
        self.pos = 0

    @property
    def tok(self) -> _Tok:
        return self.tokens[self.pos]

    def advance(self) -> _Tok:
        tok = self.tok
        if tok.kind != "end":
            self.pos += 1
        return tok

    def expect(self, text: str) -> None:
        if self.tok.text != text or self.tok.kind != "op":
            found = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
            raise ExprError(f"expected {text!r}, found {found}", self.tok.offset)
        self.advance()

    def expression(self, rbp: int = 0) -> Ast:
        left = self.nud(self.advance())
        while self.tok.kind == "op" and _INFIX.get(self.tok.text, 0) > rbp:
            op = self.advance().text
            # ^ is right-associative
            right = self.expression(_INFIX[op] - 1 if op == "^" else _INFIX[op])
            left = BinOp(op, left, right)
        return left

    def nud(self, tok: _Tok) -> Ast:
        if tok.kind == "num":
            return Num(float(tok.text))
        if tok.kind == "name":
            if tok.text == "x":
                return Var()
            if tok.text in CONSTANTS:
                return Const(tok.text)
            if tok.text in FUNCTIONS:
                self.expect("(")
                arg = self.expression()
                self.expect(")")
                return Call(tok.text, arg)
            raise ExprError(f"unknown identifier {tok.text!r}", tok.offset)
        if tok.kind == "op" and tok.text == "(":
            inner = self.expression()
            self.expect(")")
            return inner
        if tok.kind == "op" and tok.text == "-":
            return Neg(self.expression(_UNARY))
        if tok.kind == "op" and tok.text == "+":
            return self.expression(_UNARY)
        if tok.kind == "end":
            raise ExprError("unexpected end of input", tok.offset)
        raise ExprError(f"unexpected {tok.text!r}", tok.offset)


def parse(text: str) -> Ast:
    if not text or not text.strip():
        raise ExprError("empty expression", 0)
    parser = _Parser(text)
    ast = parser.expression()
    if parser.tok.kind != "end":
        raise ExprError(f"unexpected {parser.tok.text!r}", parser.tok.offset)
    return ast


def to_text(ast: Ast) -> str:
    """Fully parenthesized source text; ``parse(to_text(a)) == a`` for parser-built trees."""
    if isinstance(ast, Num):
        text = repr(ast.value)
        return f"({text})" if ast.value < 0 else text
    if isinstance(ast, Var):
        return "x"
    if isinstance(ast, Const):
        return ast.name
    if isinstance(ast, Neg):
        return f"(-{to_text(ast.operand)})"
    if isinstance(ast, BinOp):
        return f"({to_text(ast.left)} {ast.op} {to_text(ast.right)})"
    if isinstance(ast, Call):
        return f"{ast.func}({to_text(ast.arg)})"
    raise TypeError(f"not an expression node: {ast!r}")


def _eval(ast: Ast, x):
    if isinstance(ast, Num):
        return ast.value
    if isinstance(ast, Var):
        return x
    if isinstance(ast, Const):
        return CONSTANTS[ast.name]
    if isinstance(ast, Neg):
        return -_eval(ast.operand, x)
    if isinstance(ast, Call):
        return FUNCTIONS[ast.func](_eval(ast.arg, x))
    left, right = _eval(ast.left, x), _eval(ast.right, x)
    if ast.op == "+":
        return np.add(left, right)
    if ast.op == "-":
        return np.subtract(left, right)
    if ast.op == "*":
        return np.multiply(left, right)
    if ast.op == "/":
        return np.divide(left, right)
    return np.power(left, right)


def eval_ast(ast: Ast, x):
    """Evaluate at a float (returns float) or a float64 array (returns an array)."""
    with np.errstate(all="ignore"):
        out = _eval(ast, np.asarray(x, dtype=np.float64) if not np.isscalar(x) else np.float64(x))
    if np.ndim(out) == 0 and np.isscalar(x):
        return float(out)
    return np.broadcast_to(np.asarray(out, dtype=np.float64), np.shape(x))


def integrand_from_text(text: str) -> Integrand:
    ast = parse(text)
    return Integrand(lambda x: eval_ast(ast, x), label=text, vectorized=True)
