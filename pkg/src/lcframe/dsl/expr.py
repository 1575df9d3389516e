"""Arithmetic expression language over the variable ``t`` and named parameters.

Grammar (lowest to highest precedence)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("-" | "+") unary | power
    power  := atom ("^" unary)?
    atom   := NUMBER | NAME | NAME "(" expr ")" | "(" expr ")"

``^`` is right-associative and binds tighter than unary minus, so ``-t^2``
means ``-(t^2)``. The name ``t`` is the variable, ``pi`` is the constant,
and any other bare name is a parameter.
"""

import math
import re
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, ExprSyntaxError, UnboundParameterError, UnknownFunctionError

FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "tanh": np.tanh,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
}

VARIABLE = "t"
_NAMED_CONSTANTS = {"pi": math.pi}


@dataclass(frozen=True)
class Const:
    value: float
    label: str | None = None


@dataclass(frozen=True)
class Var:
    name: str = VARIABLE


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    func: str
    arg: object


# ---------------------------------------------------------------- tokenizer

_TOKEN_RE = re.compile(
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()])"
)


@dataclass
class _Tok:
    kind: str  # "num", "name", "op", "end"
    text: str
    offset: int  # byte offset


def _tokenize(src):
    toks = []
    byte_at = _byte_offsets(src)
    pos = 0
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos == len(src):
            break
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", byte_at[pos], ("number", "name", "operator"))
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), byte_at[pos]))
        pos = m.end()
    toks.append(_Tok("end", "", byte_at[len(src)]))
    return toks


def _byte_offsets(src):
    out = [0] * (len(src) + 1)
    acc = 0
    for i, ch in enumerate(src):
        out[i] = acc
        acc += len(ch.encode("utf-8"))
    out[len(src)] = acc
    return out


# ---------------------------------------------------------------- parser

_OPERAND_START = ("number", "name", "'('", "'-'")


class _Parser:
    def __init__(self, src):
        self.toks = _tokenize(src)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def _is(self, text):
        return self.tok.kind == "op" and self.tok.text == text

    def _advance(self):
        t = self.tok
        self.i += 1
        return t

    def _fail(self, expected):
        t = self.tok
        what = "end of input" if t.kind == "end" else repr(t.text)
        raise ExprSyntaxError(f"unexpected {what}", t.offset, expected)

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            self._fail(("operator", "end of input"))
        return node

    def expr(self):
        node = self.term()
        while self._is("+") or self._is("-"):
            op = self._advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self._is("*") or self._is("/"):
            op = self._advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self._is("-"):
            self._advance()
            return Neg(self.unary())
        if self._is("+"):
            self._advance()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self._is("^"):
            self._advance()
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self._advance()
            return Const(float(t.text))
        if t.kind == "name":
            self._advance()
            if self._is("("):
                if t.text not in FUNCTIONS:
                    raise UnknownFunctionError(f"unknown function {t.text!r}", t.offset, tuple(sorted(FUNCTIONS)))
                self._advance()
                arg = self.expr()
                if not self._is(")"):
                    self._fail(("')'",))
                self._advance()
                return Call(t.text, arg)
            if t.text in FUNCTIONS:
                self._fail(("'('",))
            if t.text == VARIABLE:
                return Var()
            if t.text in _NAMED_CONSTANTS:
                return Const(_NAMED_CONSTANTS[t.text], t.text)
            return Param(t.text)
        if self._is("("):
            self._advance()
            node = self.expr()
            if not self._is(")"):
                self._fail(("')'", "operator"))
            self._advance()
            return node
        self._fail(_OPERAND_START)


def parse_expr(src):
    """Parse expression text into an AST; raises ExprSyntaxError with a byte offset."""
    if not isinstance(src, str):
        raise TypeError("expression source must be a string")
    return _Parser(src).parse()


# ---------------------------------------------------------------- printer

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
_UNARY_PREC = 3
_ATOM_PREC = 5


def _fmt_number(v):
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def _prec(node):
    if isinstance(node, Const):
        return _UNARY_PREC if (node.value < 0 or math.copysign(1.0, node.value) < 0) and node.label is None else _ATOM_PREC
    if isinstance(node, Neg):
        return _UNARY_PREC
    if isinstance(node, BinOp):
        return _PREC[node.op]
    return _ATOM_PREC


def _wrap(node, min_prec):
    s = pretty(node)
    return f"({s})" if _prec(node) < min_prec else s


def pretty(node):
    """Render an AST with the fewest parentheses that re-parse to the same tree."""
    if isinstance(node, Const):
        if node.label is not None:
            return node.label
        if math.copysign(1.0, node.value) < 0:
            return "-" + _fmt_number(-node.value)
        return _fmt_number(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Param):
        return node.name
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, _UNARY_PREC)
    if isinstance(node, Call):
        return f"{node.func}({pretty(node.arg)})"
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        if node.op == "^":
            return f"{_wrap(node.left, _ATOM_PREC)}^{_wrap(node.right, _UNARY_PREC)}"
        left = _wrap(node.left, p)
        right = _wrap(node.right, p + 1)
        if p == 1:
            return f"{left} {node.op} {right}"
        return f"{left}{node.op}{right}"
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------- evaluation


def free_params(node):
    """Set of parameter names referenced by the tree."""
    if isinstance(node, Param):
        return {node.name}
    if isinstance(node, Neg):
        return free_params(node.operand)
    if isinstance(node, Call):
        return free_params(node.arg)
    if isinstance(node, BinOp):
        return free_params(node.left) | free_params(node.right)
    return set()


def depends_on_t(node):
    if isinstance(node, Var):
        return True
    if isinstance(node, Neg):
        return depends_on_t(node.operand)
    if isinstance(node, Call):
        return depends_on_t(node.arg)
    if isinstance(node, BinOp):
        return depends_on_t(node.left) or depends_on_t(node.right)
    return False


def _check(values, what):
    if not np.all(np.isfinite(values)):
        raise DomainError(f"{what} produced a non-finite value")
    return values


def evaluate(node, t, params=None):
    """Evaluate a tree at ``t`` (scalar or array) with parameter bindings."""
    params = params or {}
    t = np.asarray(t, dtype=float)
    with np.errstate(all="ignore"):
        out = _eval(node, t, params)
    return np.array(np.broadcast_to(out, t.shape), dtype=float)


def _eval(node, t, params):
    if isinstance(node, Const):
        return np.float64(node.value)
    if isinstance(node, Var):
        return t
    if isinstance(node, Param):
        if node.name not in params:
            raise UnboundParameterError(f"parameter {node.name!r} is not bound")
        return np.float64(params[node.name])
    if isinstance(node, Neg):
        return -_eval(node.operand, t, params)
    if isinstance(node, Call):
        x = _eval(node.arg, t, params)
        if node.func == "log" and np.any(x <= 0):
            raise DomainError("log of a non-positive number")
        if node.func == "sqrt" and np.any(x < 0):
            raise DomainError("sqrt of a negative number")
        return _check(FUNCTIONS[node.func](x), node.func)
    if isinstance(node, BinOp):
        a = _eval(node.left, t, params)
        b = _eval(node.right, t, params)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            if np.any(b == 0):
                raise DomainError("division by zero")
            return _check(a / b, "division")
        if node.op == "^":
            bad = (np.asarray(a) < 0) & (np.asarray(b) != np.round(b))
            if np.any(bad):
                raise DomainError("negative base raised to a non-integer power")
            if np.any((np.asarray(a) == 0) & (np.asarray(b) < 0)):
                raise DomainError("zero raised to a negative power")
            return _check(np.power(a, b), "power")
    raise TypeError(f"not an expression node: {node!r}")
