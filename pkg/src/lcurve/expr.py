"""Scalar functions of arc length: parser, evaluator, symbolic derivative.

Grammar (``^`` binds tighter than unary minus, which binds tighter than
``*`` and ``/``; binary operators are left associative except ``^``)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := primary ("^" unary)?
    primary := NUMBER | "s" | FUNC "(" expr ")" | "(" expr ")"
    FUNC    := sin | cos | tan | sinh | cosh | exp | log | sqrt

Numbers accept the usual decimal/exponent forms (``2``, ``.5``, ``1e-3``).
Literals are never negative in the tree: ``-3`` parses as ``Neg(Num(3))``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParseError

FUNCTIONS = ("sin", "cos", "tan", "sinh", "cosh", "exp", "log", "sqrt")


class Node:
    __slots__ = ()


@dataclass(frozen=True)
class Num(Node):
    value: float


@dataclass(frozen=True)
class Var(Node):
    pass


@dataclass(frozen=True)
class Neg(Node):
    arg: Node


@dataclass(frozen=True)
class BinOp(Node):
    op: str  # one of + - * / ^
    left: Node
    right: Node


@dataclass(frozen=True)
class Call(Node):
    name: str
    arg: Node


S = Var()
ZERO = Num(0.0)
ONE = Num(1.0)


# --------------------------------------------------------------------------
# lexer / parser

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[start]!r}", _byte_offset(text, start),
                             {"number", "s", "function", "(", "-"})
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def _byte_offset(text, index):
    return len(text[:index].encode("utf-8"))


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected):
        kind, value, pos = self.peek()
        found = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"unexpected {found}", _byte_offset(self.text, pos), expected)

    def expect(self, op):
        kind, value, _ = self.peek()
        if kind != "op" or value != op:
            self.fail({op})
        self.advance()

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail({"+", "-", "*", "/", "^", "end of input"})
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.primary()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def primary(self):
        kind, value, _ = self.peek()
        if kind == "num":
            self.advance()
            return Num(float(value))
        if kind == "name":
            if value == "s":
                self.advance()
                return S
            if value in FUNCTIONS:
                self.advance()
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(value, arg)
            self.fail({"number", "s", "function", "("})
        if kind == "op" and value == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        self.fail({"number", "s", "function", "(", "-"})


# --------------------------------------------------------------------------
# printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}
_PREC_UNARY = 3
_PREC_ATOM = 5


def _prec(node):
    if isinstance(node, BinOp):
        return 4 if node.op == "^" else _PREC[node.op]
    if isinstance(node, Neg):
        return _PREC_UNARY
    return _PREC_ATOM


def _fmt_num(x):
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def to_text(node):
    """Print ``node`` with the minimal parentheses that re-parse to the same tree."""

    def wrap(child, min_prec):
        text = to_text(child)
        return f"({text})" if _prec(child) < min_prec else text

    if isinstance(node, Num):
        if node.value < 0 or not math.isfinite(node.value):
            raise ValueError(f"literal {node.value!r} has no textual form")
        return _fmt_num(node.value)
    if isinstance(node, Var):
        return "s"
    if isinstance(node, Neg):
        return "-" + wrap(node.arg, _PREC_UNARY)
    if isinstance(node, Call):
        return f"{node.name}({to_text(node.arg)})"
    if node.op == "^":
        return f"{wrap(node.left, _PREC_ATOM)}^{wrap(node.right, _PREC_UNARY)}"
    p = _PREC[node.op]
    sep = f" {node.op} " if p == 1 else node.op
    return f"{wrap(node.left, p)}{sep}{wrap(node.right, p + 1)}"


# --------------------------------------------------------------------------
# evaluation


def _evaluate(node, s):
    if isinstance(node, Num):
        return np.full(np.shape(s), node.value) if np.ndim(s) else node.value
    if isinstance(node, Var):
        return s
    if isinstance(node, Neg):
        return -_evaluate(node.arg, s)
    if isinstance(node, Call):
        x = _evaluate(node.arg, s)
        name = node.name
        if name == "log" and np.any(np.asarray(x) <= 0):
            raise DomainError("log of non-positive argument")
        if name == "sqrt" and np.any(np.asarray(x) < 0):
            raise DomainError("sqrt of negative argument")
        return getattr(np, name)(x)
    a = _evaluate(node.left, s)
    b = _evaluate(node.right, s)
    op = node.op
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if np.any(np.asarray(b) == 0):
            raise DomainError("division by zero")
        return a / b
    # power: non-integer exponents need a positive base
    aa, bb = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    integral = bb == np.round(bb)
    if np.any((aa < 0) & ~integral) or np.any((aa == 0) & ~integral & (bb <= 0)):
        raise DomainError("non-integer power of a non-positive base")
    if np.any((aa == 0) & (bb < 0)):
        raise DomainError("division by zero in negative power")
    return np.power(aa, bb)


def evaluate(node, s):
    """Evaluate ``node`` at scalar or array ``s``; non-finite results raise."""
    with np.errstate(all="ignore"):
        out = _evaluate(node, np.asarray(s, dtype=float) if np.ndim(s) else float(s))
    if not np.all(np.isfinite(out)):
        raise DomainError("expression evaluates to a non-finite value")
    return float(out) if np.ndim(out) == 0 else out


# --------------------------------------------------------------------------
# constant-folding constructors


def num(x):
    """Literal for ``x``; negative values become ``Neg(Num(|x|))``."""
    x = float(x)
    return Neg(Num(-x)) if x < 0 else Num(x)


def const_value(node):
    """The value of a constant subtree, or ``None``."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Neg) and isinstance(node.arg, Num):
        return -node.arg.value
    return None


def _fold(node):
    try:
        v = evaluate(node, 0.0)
    except DomainError:
        return node
    return num(v)


def add(a, b):
    ca, cb = const_value(a), const_value(b)
    if ca == 0:
        return b
    if cb == 0:
        return a
    if ca is not None and cb is not None:
        return _fold(BinOp("+", a, b))
    if isinstance(b, Neg):
        return BinOp("-", a, b.arg)
    return BinOp("+", a, b)


def sub(a, b):
    ca, cb = const_value(a), const_value(b)
    if cb == 0:
        return a
    if ca == 0:
        return neg(b)
    if ca is not None and cb is not None:
        return _fold(BinOp("-", a, b))
    if isinstance(b, Neg):
        return BinOp("+", a, b.arg)
    return BinOp("-", a, b)


def neg(a):
    ca = const_value(a)
    if ca is not None:
        return num(-ca)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def mul(a, b):
    ca, cb = const_value(a), const_value(b)
    if ca == 0 or cb == 0:
        return ZERO
    if ca == 1:
        return b
    if cb == 1:
        return a
    if ca == -1:
        return neg(b)
    if cb == -1:
        return neg(a)
    if ca is not None and cb is not None:
        return _fold(BinOp("*", a, b))
    return BinOp("*", a, b)


def div(a, b):
    ca, cb = const_value(a), const_value(b)
    if ca == 0 and cb != 0:
        return ZERO
    if cb == 1:
        return a
    if cb == -1:
        return neg(a)
    if ca is not None and cb is not None and cb != 0:
        return _fold(BinOp("/", a, b))
    return BinOp("/", a, b)


def power(a, b):
    ca, cb = const_value(a), const_value(b)
    if cb == 0:
        return ONE
    if cb == 1:
        return a
    if ca is not None and cb is not None:
        return _fold(BinOp("^", a, b))
    return BinOp("^", a, b)


def call(name, a):
    if const_value(a) is not None:
        return _fold(Call(name, a))
    return Call(name, a)


# --------------------------------------------------------------------------
# differentiation


def differentiate(node):
    """Symbolic d/ds of ``node``."""
    if isinstance(node, Num):
        return ZERO
    if isinstance(node, Var):
        return ONE
    if isinstance(node, Neg):
        return neg(differentiate(node.arg))
    if isinstance(node, Call):
        u = node.arg
        du = differentiate(u)
        name = node.name
        if name == "sin":
            outer = call("cos", u)
        elif name == "cos":
            outer = neg(call("sin", u))
        elif name == "tan":
            outer = div(ONE, power(call("cos", u), Num(2.0)))
        elif name == "sinh":
            outer = call("cosh", u)
        elif name == "cosh":
            outer = call("sinh", u)
        elif name == "exp":
            outer = call("exp", u)
        elif name == "log":
            return div(du, u)
        elif name == "sqrt":
            return div(du, mul(Num(2.0), call("sqrt", u)))
        else:  # pragma: no cover - parser rejects unknown names
            raise ValueError(name)
        return mul(outer, du)
    u, v = node.left, node.right
    du, dv = differentiate(u), differentiate(v)
    op = node.op
    if op == "+":
        return add(du, dv)
    if op == "-":
        return sub(du, dv)
    if op == "*":
        return add(mul(du, v), mul(u, dv))
    if op == "/":
        return div(sub(mul(du, v), mul(u, dv)), power(v, Num(2.0)))
    cv = const_value(v)
    if cv is not None:
        return mul(mul(v, power(u, num(cv - 1.0))), du)
    # general u^v = exp(v log u)
    return mul(node, add(mul(dv, call("log", u)), div(mul(v, du), u)))


# --------------------------------------------------------------------------
# public wrapper


@dataclass(frozen=True)
class ScalarFn:
    """A parsed scalar function of ``s``; callable on floats and arrays."""

    ast: Node
    source_text: str

    def __call__(self, s):
        return evaluate(self.ast, s)

    def derivative(self):
        return derive_scalar_fn(self)

    def __str__(self):
        return self.source_text

    @classmethod
    def from_ast(cls, ast):
        return cls(ast, to_text(ast))

    @classmethod
    def constant(cls, value):
        return cls.from_ast(num(value))


def parse_scalar_fn(text):
    """Parse ``text`` into a :class:`ScalarFn`.

    Raises :class:`~lcurve.errors.ParseError` carrying the byte offset and
    the set of acceptable tokens.
    """
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty expression", 0, {"number", "s", "function", "(", "-"})
    return ScalarFn(_Parser(text).parse(), text)


def eval_scalar_fn(f, s):
    return f(s)


def derive_scalar_fn(f):
    return ScalarFn.from_ast(differentiate(f.ast))


def as_scalar_fn(f):
    """Coerce strings and numbers to :class:`ScalarFn`."""
    if isinstance(f, ScalarFn):
        return f
    if isinstance(f, (int, float)):
        return ScalarFn.constant(f)
    return parse_scalar_fn(f)
