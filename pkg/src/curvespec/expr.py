"""Expression trees for the coordinate functions of parametric curves.

Grammar (standard precedence, left-associative binaries)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := primary ('^' exponent)*
    exponent:= ['-'] INT | '(' ['-'] INT ')'
    primary := NUMBER | 't' | 'pi' | ('sin' | 'cos') '(' expr ')' | '(' expr ')'

Implicit multiplication is rejected, so ``3t`` is a syntax error.
Constants stored in a tree are always non-negative; a negative value is
represented as ``Neg(Const(...))``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "Const",
    "Var",
    "Pi",
    "Unary",
    "Binary",
    "Pow",
    "ExprNode",
    "ExprError",
    "ExprSyntaxError",
    "UnknownIdentifierError",
    "NonIntegerExponentError",
    "ExprDivisionByZero",
    "parse_expr",
    "to_source",
    "differentiate",
    "evaluate",
    "const",
    "substitute_t",
    "depends_on_t",
]


class ExprError(ValueError):
    pass


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownIdentifierError(ExprSyntaxError):
    pass


class NonIntegerExponentError(ExprSyntaxError):
    pass


class ExprDivisionByZero(ArithmeticError):
    """Raised by `evaluate` when a denominator vanishes."""

    def __init__(self, subtree: "ExprNode"):
        super().__init__(f"division by zero in subtree '{to_source(subtree)}'")
        self.subtree = subtree


@dataclass(frozen=True)
class Const:
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value) or self.value < 0:
            raise ValueError(f"Const requires a finite non-negative value, got {self.value!r}")


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Pi:
    pass


@dataclass(frozen=True)
class Unary:
    op: str  # 'neg' | 'sin' | 'cos'
    arg: "ExprNode"

    def __post_init__(self):
        if self.op not in ("neg", "sin", "cos"):
            raise ValueError(f"unknown unary operator {self.op!r}")


@dataclass(frozen=True)
class Binary:
    op: str  # '+' | '-' | '*' | '/'
    left: "ExprNode"
    right: "ExprNode"

    def __post_init__(self):
        if self.op not in ("+", "-", "*", "/"):
            raise ValueError(f"unknown binary operator {self.op!r}")


@dataclass(frozen=True)
class Pow:
    base: "ExprNode"
    exponent: int

    def __post_init__(self):
        if isinstance(self.exponent, bool) or not isinstance(self.exponent, (int, np.integer)):
            raise TypeError(f"Pow exponent must be an integer, got {self.exponent!r}")


ExprNode = Union[Const, Var, Pi, Unary, Binary, Pow]



def const(value: float) -> ExprNode:
    """Literal node for any finite real, wrapping negatives in ``neg``."""
    value = float(value)
    if value < 0:
        return Unary("neg", Const(-value))
    return Const(value + 0.0)  # drops the sign of -0.0


# --------------------------------------------------------------------------
# tokenizer / parser

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(source)
    while pos < n:
        if source[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(source, pos)
        if m is None or m.end() == pos:
            start = pos + (len(source[pos:]) - len(source[pos:].lstrip()))
            raise ExprSyntaxError(f"unexpected character {source[start]!r}", start)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, text, pos = self.take()
        if kind != "op" or text != op:
            shown = text if kind != "end" else "end of input"
            raise ExprSyntaxError(f"expected {op!r}, found {shown!r}", pos)

    def parse(self) -> ExprNode:
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected token {text!r}", pos)
        return node

    def expr(self) -> ExprNode:
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = Binary(op, node, self.term())
        return node

    def term(self) -> ExprNode:
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            node = Binary(op, node, self.unary())
        return node

    def unary(self) -> ExprNode:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Unary("neg", self.unary())
        return self.power()

    def power(self) -> ExprNode:
        node = self.primary()
        while self.peek()[:2] == ("op", "^"):
            self.take()
            node = Pow(node, self.exponent())
        return node

    def exponent(self) -> int:
        paren = self.peek()[:2] == ("op", "(")
        if paren:
            self.take()
        sign = 1
        if self.peek()[:2] == ("op", "-"):
            self.take()
            sign = -1
        kind, text, pos = self.take()
        if kind != "num":
            raise NonIntegerExponentError("exponent must be an integer literal", pos)
        value = float(text)
        if not value.is_integer():
            raise NonIntegerExponentError(f"non-integer exponent {text!r}", pos)
        if paren:
            self.expect_op(")")
        return sign * int(value)

    def primary(self) -> ExprNode:
        kind, text, pos = self.take()
        if kind == "num":
            return Const(float(text))
        if kind == "name":
            if text == "t":
                return Var()
            if text == "pi":
                return Pi()
            if text in ("sin", "cos"):
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Unary(text, arg)
            raise UnknownIdentifierError(f"unknown identifier {text!r}", pos)
        if (kind, text) == ("op", "("):
            node = self.expr()
            self.expect_op(")")
            return node
        shown = text if kind != "end" else "end of input"
        raise ExprSyntaxError(f"unexpected token {shown!r}", pos)


def parse_expr(source: str) -> ExprNode:
    """Parse ``source`` into an expression tree.

    Raises
    ------
    ExprSyntaxError
        With the 0-based character position of the offending token.
        `UnknownIdentifierError` and `NonIntegerExponentError` are subclasses.
    """
    return _Parser(source).parse()


# --------------------------------------------------------------------------
# printing

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _fmt_number(value: float) -> str:
    if value.is_integer() and value < 1e15:
        return str(int(value))
    return repr(value)


def _prec(e: ExprNode) -> int:
    if isinstance(e, Binary):
        return _PREC_ADD if e.op in "+-" else _PREC_MUL
    if isinstance(e, Unary) and e.op == "neg":
        return _PREC_NEG
    if isinstance(e, Pow):
        return _PREC_POW
    return _PREC_ATOM


def to_source(e: ExprNode) -> str:
    """Render ``e`` with the minimal parentheses needed to parse back to ``e``."""

    def wrap(child: ExprNode, min_prec: int) -> str:
        s = to_source(child)
        return s if _prec(child) >= min_prec else f"({s})"

    if isinstance(e, Const):
        return _fmt_number(e.value)
    if isinstance(e, Var):
        return "t"
    if isinstance(e, Pi):
        return "pi"
    if isinstance(e, Unary):
        if e.op == "neg":
            return "-" + wrap(e.arg, _PREC_NEG)
        return f"{e.op}({to_source(e.arg)})"
    if isinstance(e, Binary):
        own = _prec(e)
        return f"{wrap(e.left, own)}{e.op}{wrap(e.right, own + 1)}"
    if isinstance(e, Pow):
        exp = str(e.exponent) if e.exponent >= 0 else f"({e.exponent})"
        return f"{wrap(e.base, _PREC_POW)}^{exp}"
    raise TypeError(f"not an expression node: {e!r}")


# --------------------------------------------------------------------------
# construction helpers with literal folding


def _literal(e: ExprNode):
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Unary) and e.op == "neg" and isinstance(e.arg, Const):
        return -e.arg.value
    return None


def _neg(a: ExprNode) -> ExprNode:
    va = _literal(a)
    if va is not None:
        return const(-va)
    if isinstance(a, Unary) and a.op == "neg":
        return a.arg
    return Unary("neg", a)


def _add(a: ExprNode, b: ExprNode) -> ExprNode:
    va, vb = _literal(a), _literal(b)
    if va is not None and vb is not None:
        return const(va + vb)
    if va == 0:
        return b
    if vb == 0:
        return a
    return Binary("+", a, b)


def _sub(a: ExprNode, b: ExprNode) -> ExprNode:
    va, vb = _literal(a), _literal(b)
    if va is not None and vb is not None:
        return const(va - vb)
    if vb == 0:
        return a
    if va == 0:
        return _neg(b)
    return Binary("-", a, b)


def _mul(a: ExprNode, b: ExprNode) -> ExprNode:
    va, vb = _literal(a), _literal(b)
    if va is not None and vb is not None:
        return const(va * vb)
    if va == 0 or vb == 0:
        return Const(0.0)
    if va == 1:
        return b
    if vb == 1:
        return a
    if va == -1:
        return _neg(b)
    if vb == -1:
        return _neg(a)
    return Binary("*", a, b)


def _div(a: ExprNode, b: ExprNode) -> ExprNode:
    va, vb = _literal(a), _literal(b)
    if va is not None and vb is not None and vb != 0:
        return const(va / vb)
    if va == 0 and vb is None:
        return Const(0.0)
    if vb == 1:
        return a
    return Binary("/", a, b)


def _pow(a: ExprNode, k: int) -> ExprNode:
    if k == 0:
        return Const(1.0)
    if k == 1:
        return a
    return Pow(a, k)


# --------------------------------------------------------------------------
# calculus and evaluation


def differentiate(e: ExprNode) -> ExprNode:
    """Symbolic d/dt by the structural rules (chain, product, quotient, power)."""
    if isinstance(e, (Const, Pi)):
        return Const(0.0)
    if isinstance(e, Var):
        return Const(1.0)
    if isinstance(e, Unary):
        du = differentiate(e.arg)
        if e.op == "neg":
            return _neg(du)
        if e.op == "sin":
            return _mul(du, Unary("cos", e.arg))
        return _neg(_mul(du, Unary("sin", e.arg)))
    if isinstance(e, Binary):
        da, db = differentiate(e.left), differentiate(e.right)
        if e.op == "+":
            return _add(da, db)
        if e.op == "-":
            return _sub(da, db)
        if e.op == "*":
            return _add(_mul(da, e.right), _mul(e.left, db))
        # (a/b)' = a'/b - a b'/b^2
        return _sub(_div(da, e.right), _div(_mul(e.left, db), _pow(e.right, 2)))
    if isinstance(e, Pow):
        k = e.exponent
        if k == 0:
            return Const(0.0)
        return _mul(_mul(const(k), _pow(e.base, k - 1)), differentiate(e.base))
    raise TypeError(f"not an expression node: {e!r}")


def _has_zero(x) -> bool:
    return bool(np.any(np.asarray(x) == 0))


def evaluate(e: ExprNode, t):
    """Evaluate ``e`` at ``t``; ``t`` may be a float or a numpy array.

    Raises `ExprDivisionByZero` naming the subtree whose denominator
    vanished (for arrays: at any element).
    """
    if isinstance(e, Const):
        return e.value if np.ndim(t) == 0 else np.full(np.shape(t), e.value)
    if isinstance(e, Var):
        return float(t) if np.ndim(t) == 0 else np.asarray(t, dtype=float)
    if isinstance(e, Pi):
        return math.pi if np.ndim(t) == 0 else np.full(np.shape(t), math.pi)
    if isinstance(e, Unary):
        x = evaluate(e.arg, t)
        if e.op == "neg":
            return -x
        return np.sin(x) if e.op == "sin" else np.cos(x)
    if isinstance(e, Binary):
        a = evaluate(e.left, t)
        b = evaluate(e.right, t)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if _has_zero(b):
            raise ExprDivisionByZero(e)
        return a / b
    if isinstance(e, Pow):
        x = evaluate(e.base, t)
        if e.exponent < 0:
            if _has_zero(x):
                raise ExprDivisionByZero(e)
            return 1.0 / x ** (-e.exponent)
        return x**e.exponent
    raise TypeError(f"not an expression node: {e!r}")


def substitute_t(e: ExprNode, replacement: ExprNode) -> ExprNode:
    """Replace every occurrence of ``t`` in ``e`` by ``replacement``."""
    if isinstance(e, Var):
        return replacement
    if isinstance(e, Unary):
        return Unary(e.op, substitute_t(e.arg, replacement))
    if isinstance(e, Binary):
        return Binary(e.op, substitute_t(e.left, replacement), substitute_t(e.right, replacement))
    if isinstance(e, Pow):
        return Pow(substitute_t(e.base, replacement), e.exponent)
    return e


def depends_on_t(e: ExprNode) -> bool:
    if isinstance(e, Var):
        return True
    if isinstance(e, Unary):
        return depends_on_t(e.arg)
    if isinstance(e, Binary):
        return depends_on_t(e.left) or depends_on_t(e.right)
    if isinstance(e, Pow):
        return depends_on_t(e.base)
    return False
