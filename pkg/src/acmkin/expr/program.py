"""Compile expression trees into flat stack programs.

A program evaluates k expressions over a shared variable vector in one pass.
Both kernels (compiled and numpy fallback) interpret the same opcode stream,
propagating forward-mode derivative vectors alongside values when asked.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .parse import BinOp, Call, Const, Expr, Neg, Var, parse

OP_LOAD_VAR = 0
OP_LOAD_CONST = 1
OP_ADD = 2
OP_SUB = 3
OP_MUL = 4
OP_DIV = 5
OP_NEG = 6
OP_SIN = 7
OP_COS = 8
OP_SQRT = 9
OP_EXP = 10
OP_BUMP = 11
OP_OUTPUT = 12

_CALL_OPS = {"sin": OP_SIN, "cos": OP_COS, "sqrt": OP_SQRT, "exp": OP_EXP, "bump": OP_BUMP}


@dataclass
class Program:
    code: np.ndarray  # int64, flat [op, arg, op, arg, ...]
    consts: np.ndarray  # float64
    n_in: int
    n_out: int
    max_stack: int
    var_names: tuple

    def __repr__(self):
        return f"Program({self.n_in}->{self.n_out}, {len(self.code) // 2} ops)"


def compile_program(exprs, var_names):
    """Compile a sequence of expressions (or strings) over named variables."""
    var_names = tuple(var_names)
    index = {name: i for i, name in enumerate(var_names)}
    code = []
    consts = []

    def emit(node):
        if isinstance(node, Const):
            consts.append(float(node.value))
            code.append((OP_LOAD_CONST, len(consts) - 1))
        elif isinstance(node, Var):
            if node.name not in index:
                raise KeyError(f"unknown variable {node.name!r}; have {var_names}")
            code.append((OP_LOAD_VAR, index[node.name]))
        elif isinstance(node, Neg):
            emit(node.arg)
            code.append((OP_NEG, 0))
        elif isinstance(node, Call):
            emit(node.arg)
            code.append((_CALL_OPS[node.fn], 0))
        elif isinstance(node, BinOp):
            emit(node.left)
            emit(node.right)
            op = {"+": OP_ADD, "-": OP_SUB, "*": OP_MUL, "/": OP_DIV}[node.op]
            code.append((op, 0))
        else:
            raise TypeError(f"not an Expr: {node!r}")

    n_out = 0
    for e in exprs:
        emit(parse(e) if not isinstance(e, Expr) else e)
        code.append((OP_OUTPUT, n_out))
        n_out += 1

    # stack depth by simulation
    depth = peak = 0
    for op, _ in code:
        if op in (OP_LOAD_VAR, OP_LOAD_CONST):
            depth += 1
        elif op in (OP_ADD, OP_SUB, OP_MUL, OP_DIV):
            depth -= 1
        elif op == OP_OUTPUT:
            depth -= 1
        peak = max(peak, depth)

    flat = np.asarray([v for pair in code for v in pair], dtype=np.int64)
    return Program(
        code=flat,
        consts=np.asarray(consts, dtype=np.float64),
        n_in=len(var_names),
        n_out=n_out,
        max_stack=max(peak, 1),
        var_names=var_names,
    )
