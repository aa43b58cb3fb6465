"""Parser and jet evaluator for a small complex-function language.

Grammar (ASCII only, no implicit multiplication)::

    expr     := term (("+" | "-") term)*
    term     := unary (("*" | "/") unary)*
    unary    := "-" unary | power
    power    := atom ("^" ["-"] INTEGER)?
    atom     := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"
    NUMBER   := DIGITS ["." DIGITS] [("e" | "E") ["+" | "-"] DIGITS] ["i"]

``z`` is the free variable; any other bare identifier is a named parameter.
A trailing ``i`` makes a numeric literal imaginary, so ``1+2i`` denotes the
complex constant 1 + 2i.  ``^`` takes a literal integer exponent only; write
``exp(w*log(u))`` for general powers.  Callable names: exp, log, sin, cos,
tan, cot, sinh, cosh, tanh, sqrt, inv.

Offsets in errors are 0-based byte positions; end-of-input is reported at
``len(text)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Union

from . import jets
from .errors import (
    DivisionByZeroJet,
    DomainErrorJet,
    ExprSyntaxError,
    MissingParameter,
    UnknownFunction,
)

KNOWN_FUNCTIONS = ("exp", "log", "sin", "cos", "tan", "cot",
                   "sinh", "cosh", "tanh", "sqrt", "inv")

ParamEnv = Mapping[str, complex]

Span = tuple[int, int]


@dataclass(frozen=True)
class Num:
    value: complex
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Var:
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Param:
    name: str
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Neg:
    arg: "Node"
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    lhs: "Node"
    rhs: "Node"
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class PowInt:
    base: "Node"
    exponent: int
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Node"
    span: Span = field(default=(0, 0), compare=False)


Node = Union[Num, Var, Param, Neg, BinOp, PowInt, Call]


@dataclass(frozen=True)
class FnExpr:
    """Parsed expression with its free-parameter set."""

    root: Node
    params: frozenset[str]
    text: str = field(default="", compare=False)


# --- lexer ---------------------------------------------------------------

_OPS = "+-*/^()"


def _lex(text: str) -> list[tuple[str, str, int]]:
    """Tokens as (kind, lexeme, start).  kind: num, ident, op, end."""
    toks: list[tuple[str, str, int]] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if not ch.isascii():
            raise ExprSyntaxError(i, {"ASCII character"}, ch)
        if ch in " \t\r\n":
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            start = i
            while i < n and text[i].isdigit():
                i += 1
            if i < n and text[i] == ".":
                i += 1
                while i < n and text[i].isdigit():
                    i += 1
            if i < n and text[i] in "eE":
                j = i + 1
                if j < n and text[j] in "+-":
                    j += 1
                if j < n and text[j].isdigit():
                    i = j
                    while i < n and text[i].isdigit():
                        i += 1
            # an 'i' suffix not followed by more identifier characters
            if i < n and text[i] == "i" and (i + 1 >= n or not (text[i + 1].isalnum() or text[i + 1] == "_")):
                i += 1
            toks.append(("num", text[start:i], start))
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            toks.append(("ident", text[start:i], start))
            continue
        if ch in _OPS:
            toks.append(("op", ch, i))
            i += 1
            continue
        raise ExprSyntaxError(i, {"number", "identifier", "operator"}, ch)
    toks.append(("end", "", n))
    return toks


# --- parser --------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _lex(text)
        self.pos = 0
        self.params: set[str] = set()

    def peek(self):
        return self.toks[self.pos]

    def advance(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, lexeme, start = self.peek()
        if kind == "op" and lexeme == op:
            return self.advance()
        raise ExprSyntaxError(start, {op}, lexeme)

    def parse(self) -> Node:
        node = self.expr()
        kind, lexeme, start = self.peek()
        if kind != "end":
            raise ExprSyntaxError(start, {"+", "-", "*", "/", "^", "end of input"}, lexeme)
        return node

    def expr(self) -> Node:
        node = self.term()
        while True:
            kind, lexeme, _ = self.peek()
            if kind == "op" and lexeme in "+-":
                self.advance()
                rhs = self.term()
                node = BinOp(lexeme, node, rhs, (node.span[0], rhs.span[1]))
            else:
                return node

    def term(self) -> Node:
        node = self.unary()
        while True:
            kind, lexeme, _ = self.peek()
            if kind == "op" and lexeme in "*/":
                self.advance()
                rhs = self.unary()
                node = BinOp(lexeme, node, rhs, (node.span[0], rhs.span[1]))
            else:
                return node

    def unary(self) -> Node:
        kind, lexeme, start = self.peek()
        if kind == "op" and lexeme == "-":
            self.advance()
            arg = self.unary()
            return Neg(arg, (start, arg.span[1]))
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        kind, lexeme, _ = self.peek()
        if kind == "op" and lexeme == "^":
            self.advance()
            sign = 1
            kind, lexeme, start = self.peek()
            if kind == "op" and lexeme == "-":
                self.advance()
                sign = -1
                kind, lexeme, start = self.peek()
            if kind != "num" or not lexeme.isdigit():
                raise ExprSyntaxError(start, {"integer exponent"}, lexeme)
            self.advance()
            return PowInt(base, sign * int(lexeme), (base.span[0], start + len(lexeme)))
        return base

    def atom(self) -> Node:
        kind, lexeme, start = self.peek()
        if kind == "num":
            self.advance()
            if lexeme.endswith("i"):
                value = complex(0.0, float(lexeme[:-1]) if lexeme[:-1] else 1.0)
            else:
                value = complex(float(lexeme))
            return Num(value, (start, start + len(lexeme)))
        if kind == "ident":
            self.advance()
            nxt_kind, nxt_lexeme, _ = self.peek()
            if nxt_kind == "op" and nxt_lexeme == "(":
                if lexeme not in KNOWN_FUNCTIONS:
                    raise UnknownFunction(lexeme, start)
                self.advance()
                arg = self.expr()
                closer = self.expect_op(")")
                return Call(lexeme, arg, (start, closer[2] + 1))
            if lexeme == "z":
                return Var((start, start + 1))
            self.params.add(lexeme)
            return Param(lexeme, (start, start + len(lexeme)))
        if kind == "op" and lexeme == "(":
            self.advance()
            node = self.expr()
            closer = self.expect_op(")")
            return _respan(node, (start, closer[2] + 1))
        raise ExprSyntaxError(start, {"number", "identifier", "("}, lexeme)


def _respan(node: Node, span: Span) -> Node:
    cls = type(node)
    kwargs = {f: getattr(node, f) for f in node.__dataclass_fields__}
    kwargs["span"] = span
    return cls(**kwargs)


def parse(text: str) -> FnExpr:
    """Parse the expression language into an FnExpr."""
    if not text.strip():
        raise ExprSyntaxError(0, {"expression"}, "")
    p = _Parser(text)
    root = p.parse()
    return FnExpr(root, frozenset(p.params), text)


# --- evaluation ----------------------------------------------------------


def eval_jet(e: FnExpr, z0: complex, env: ParamEnv | None = None) -> jets.Jet3:
    """Evaluate the denoted function as a Jet3 at the point z0.

    Jet-domain errors are re-raised carrying the source span of the
    offending subexpression.
    """
    env = env or {}
    zjet = jets.variable(z0)

    def walk(node: Node) -> jets.Jet3:
        if isinstance(node, Num):
            return jets.constant(node.value)
        if isinstance(node, Var):
            return zjet
        if isinstance(node, Param):
            try:
                return jets.constant(complex(env[node.name]))
            except KeyError:
                raise MissingParameter(node.name, node.span) from None
        if isinstance(node, Neg):
            return -walk(node.arg)
        if isinstance(node, BinOp):
            lhs, rhs = walk(node.lhs), walk(node.rhs)
            try:
                if node.op == "+":
                    return lhs + rhs
                if node.op == "-":
                    return lhs - rhs
                if node.op == "*":
                    return lhs * rhs
                return lhs / rhs
            except (DivisionByZeroJet, DomainErrorJet) as err:
                err.span = err.span or node.span
                raise
        if isinstance(node, PowInt):
            base = walk(node.base)
            try:
                return jets.powi(base, node.exponent)
            except (DivisionByZeroJet, DomainErrorJet) as err:
                err.span = err.span or node.span
                raise
        if isinstance(node, Call):
            arg = walk(node.arg)
            try:
                return jets.elementary(node.fn, arg)
            except (DivisionByZeroJet, DomainErrorJet) as err:
                err.span = err.span or node.span
                raise
        raise TypeError(f"unknown node {node!r}")

    return walk(e.root)


# --- printing ------------------------------------------------------------


def _fmt_number(v: complex) -> str:
    def real_str(x: float) -> str:
        if x == int(x) and abs(x) < 1e15:
            return str(int(x))
        return repr(x)

    if v.imag == 0.0:
        return real_str(v.real)
    if v.real == 0.0:
        return real_str(v.imag) + "i"
    return f"({real_str(v.real)}+{real_str(v.imag)}i)"


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "pow": 4, "atom": 5}


def _print(node: Node) -> tuple[str, int]:
    if isinstance(node, Num):
        return _fmt_number(node.value), _PREC["atom"]
    if isinstance(node, Var):
        return "z", _PREC["atom"]
    if isinstance(node, Param):
        return node.name, _PREC["atom"]
    if isinstance(node, Neg):
        inner, prec = _print(node.arg)
        if prec < _PREC["neg"]:
            inner = f"({inner})"
        return f"-{inner}", _PREC["neg"]
    if isinstance(node, BinOp):
        lhs, lp = _print(node.lhs)
        rhs, rp = _print(node.rhs)
        myp = _PREC[node.op]
        if lp < myp:
            lhs = f"({lhs})"
        # binary ops are left-associative, so a right operand at the same
        # precedence level must keep its parentheses to round-trip
        if rp <= myp:
            rhs = f"({rhs})"
        return f"{lhs} {node.op} {rhs}", myp
    if isinstance(node, PowInt):
        base, bp = _print(node.base)
        if bp < _PREC["atom"]:
            base = f"({base})"
        return f"{base}^{node.exponent}", _PREC["pow"]
    if isinstance(node, Call):
        inner, _ = _print(node.arg)
        return f"{node.fn}({inner})", _PREC["atom"]
    raise TypeError(f"unknown node {node!r}")


def pretty(e: FnExpr) -> str:
    """Canonical text form; parse(pretty(e)) recovers the same tree."""
    return _print(e.root)[0]
