"""Tiny expression language for residuals and map components.

Grammar: identifiers, real literals, + - * /, unary -, and the call forms
sin(e), cos(e), sqrt(e), exp(e), bump(e).  bump(x) = exp(-1/x) for x > 0 and
0 otherwise; its derivative bump(x)/x^2 (0 for x <= 0) is supplied
analytically so the flat joint at 0 differentiates exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ExprParseError

FUNCTIONS = ("sin", "cos", "sqrt", "exp", "bump")

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?"
    r"|\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[()+\-*/]))"
)


class Expr:
    """Base node. Subclasses are value types; printing is canonical."""

    def __str__(self):
        return _print(self, 0)

    def __repr__(self):
        return f"{type(self).__name__}({_print(self, 0)!r})"

    def __eq__(self, other):
        return isinstance(other, Expr) and _print(self, 0) == _print(other, 0)

    def __hash__(self):
        return hash(_print(self, 0))


@dataclass(frozen=True, eq=False)
class Const(Expr):
    value: float


@dataclass(frozen=True, eq=False)
class Var(Expr):
    name: str


@dataclass(frozen=True, eq=False)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True, eq=False)
class BinOp(Expr):
    op: str  # one of + - * /
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=False)
class Call(Expr):
    fn: str  # one of FUNCTIONS
    arg: Expr


def tokenize(text):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise ExprParseError(f"bad character {text[pos]!r} at {pos} in {text!r}")
        pos = m.end()
        if m.group("num") is not None:
            out.append(("num", m.group("num")))
        elif m.group("name") is not None:
            out.append(("name", m.group("name")))
        else:
            out.append(("op", m.group("op")))
    return out


class _Parser:
    def __init__(self, tokens, text):
        self.toks = tokens
        self.pos = 0
        self.text = text

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, val = self.next()
        if kind != "op" or val != op:
            raise ExprParseError(f"expected {op!r}, got {val!r} in {self.text!r}")

    # expr := term (('+'|'-') term)*
    def expr(self):
        node = self.term()
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            _, op = self.next()
            node = BinOp(op, node, self.term())
        return node

    # term := factor (('*'|'/') factor)*
    def term(self):
        node = self.factor()
        while self.peek() == ("op", "*") or self.peek() == ("op", "/"):
            _, op = self.next()
            node = BinOp(op, node, self.factor())
        return node

    # factor := '-' factor | atom
    def factor(self):
        if self.peek() == ("op", "-"):
            self.next()
            return Neg(self.factor())
        return self.atom()

    def atom(self):
        kind, val = self.next()
        if kind == "num":
            return Const(float(val))
        if kind == "name":
            if self.peek() == ("op", "("):
                if val not in FUNCTIONS:
                    raise ExprParseError(f"unknown function {val!r} in {self.text!r}")
                self.next()
                arg = self.expr()
                self.expect_op(")")
                return Call(val, arg)
            return Var(val)
        if (kind, val) == ("op", "("):
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExprParseError(f"unexpected token {val!r} in {self.text!r}")


def parse(text):
    """Parse one expression string into an Expr tree."""
    if isinstance(text, Expr):
        return text
    p = _Parser(tokenize(text), text)
    node = p.expr()
    if p.pos != len(p.toks):
        raise ExprParseError(f"trailing tokens after expression in {text!r}")
    return node


# precedence levels for the printer: + - at 1, * / at 2, unary at 3
def _print(node, parent_prec):
    if isinstance(node, Const):
        v = node.value
        if v == int(v) and abs(v) < 1e15:
            s = str(int(v))
        else:
            s = repr(v)
        # a leading minus sign needs the unary treatment
        return s if not s.startswith("-") else _wrap(s, 3, parent_prec)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.fn}({_print(node.arg, 0)})"
    if isinstance(node, Neg):
        return _wrap("-" + _print(node.arg, 3), 3, parent_prec)
    if isinstance(node, BinOp):
        prec = 1 if node.op in "+-" else 2
        left = _print(node.left, prec - 1 if node.op in "+*" else prec - 1)
        # right side binds tighter for - and / (non-associative direction)
        right = _print(node.right, prec if node.op in "-/" else prec - 1)
        # '+' and '*' are printed left-associatively too, so same-level right
        # operands of + and * need no parens; for - and / they do
        return _wrap(f"{left} {node.op} {right}", prec, parent_prec)
    raise TypeError(f"not an Expr: {node!r}")


def _wrap(text, prec, parent_prec):
    return f"({text})" if prec <= parent_prec else text


def variables(node):
    """Sorted variable names appearing in the expression."""
    seen = set()

    def walk(n):
        if isinstance(n, Var):
            seen.add(n.name)
        elif isinstance(n, Neg):
            walk(n.arg)
        elif isinstance(n, Call):
            walk(n.arg)
        elif isinstance(n, BinOp):
            walk(n.left)
            walk(n.right)

    walk(node)
    return sorted(seen)


def substitute(node, mapping):
    """Replace variables by expressions (mapping: name -> Expr or str)."""
    if isinstance(node, Var):
        repl = mapping.get(node.name)
        if repl is None:
            return node
        return parse(repl) if isinstance(repl, str) else repl
    if isinstance(node, Const):
        return node
    if isinstance(node, Neg):
        return Neg(substitute(node.arg, mapping))
    if isinstance(node, Call):
        return Call(node.fn, substitute(node.arg, mapping))
    if isinstance(node, BinOp):
        return BinOp(node.op, substitute(node.left, mapping), substitute(node.right, mapping))
    raise TypeError(f"not an Expr: {node!r}")


def rename(node, mapping):
    """Rename variables (mapping: old name -> new name)."""
    return substitute(node, {k: Var(v) for k, v in mapping.items()})
