"""Pure numpy interpreter for expression programs (fallback kernel).

Vectorized over the batch axis; mirrors the opcode semantics of the compiled
kernel exactly, including the analytic bump derivative.
"""

import numpy as np

from .program import (
    OP_ADD,
    OP_BUMP,
    OP_COS,
    OP_DIV,
    OP_EXP,
    OP_LOAD_CONST,
    OP_LOAD_VAR,
    OP_MUL,
    OP_NEG,
    OP_OUTPUT,
    OP_SIN,
    OP_SQRT,
    OP_SUB,
)

BACKEND = "python"


def _bump(x):
    out = np.zeros_like(x)
    pos = x > 0.0
    with np.errstate(divide="ignore", over="ignore", under="ignore"):
        out[pos] = np.exp(-1.0 / x[pos])
    return out


def eval_values(program, X):
    X = np.ascontiguousarray(X, dtype=np.float64)
    m = X.shape[0]
    out = np.empty((m, program.n_out))
    stack = [None] * program.max_stack
    sp = 0
    code, consts = program.code, program.consts
    with np.errstate(all="ignore"):
        for k in range(0, len(code), 2):
            op, arg = int(code[k]), int(code[k + 1])
            if op == OP_LOAD_VAR:
                stack[sp] = X[:, arg].copy()
                sp += 1
            elif op == OP_LOAD_CONST:
                stack[sp] = np.full(m, consts[arg])
                sp += 1
            elif op == OP_OUTPUT:
                sp -= 1
                out[:, arg] = stack[sp]
            elif op == OP_NEG:
                stack[sp - 1] = -stack[sp - 1]
            elif op == OP_SIN:
                stack[sp - 1] = np.sin(stack[sp - 1])
            elif op == OP_COS:
                stack[sp - 1] = np.cos(stack[sp - 1])
            elif op == OP_SQRT:
                stack[sp - 1] = np.sqrt(stack[sp - 1])
            elif op == OP_EXP:
                stack[sp - 1] = np.exp(stack[sp - 1])
            elif op == OP_BUMP:
                stack[sp - 1] = _bump(stack[sp - 1])
            else:
                sp -= 1
                b = stack[sp]
                a = stack[sp - 1]
                if op == OP_ADD:
                    stack[sp - 1] = a + b
                elif op == OP_SUB:
                    stack[sp - 1] = a - b
                elif op == OP_MUL:
                    stack[sp - 1] = a * b
                elif op == OP_DIV:
                    stack[sp - 1] = a / b
    return out


def eval_with_jac(program, X):
    X = np.ascontiguousarray(X, dtype=np.float64)
    m = X.shape[0]
    n = program.n_in
    out = np.empty((m, program.n_out))
    jac = np.empty((m, program.n_out, n))
    vstack = [None] * program.max_stack
    gstack = [None] * program.max_stack
    sp = 0
    code, consts = program.code, program.consts
    with np.errstate(all="ignore"):
        for k in range(0, len(code), 2):
            op, arg = int(code[k]), int(code[k + 1])
            if op == OP_LOAD_VAR:
                vstack[sp] = X[:, arg].copy()
                g = np.zeros((m, n))
                g[:, arg] = 1.0
                gstack[sp] = g
                sp += 1
            elif op == OP_LOAD_CONST:
                vstack[sp] = np.full(m, consts[arg])
                gstack[sp] = np.zeros((m, n))
                sp += 1
            elif op == OP_OUTPUT:
                sp -= 1
                out[:, arg] = vstack[sp]
                jac[:, arg, :] = gstack[sp]
            elif op == OP_NEG:
                vstack[sp - 1] = -vstack[sp - 1]
                gstack[sp - 1] = -gstack[sp - 1]
            elif op == OP_SIN:
                a = vstack[sp - 1]
                vstack[sp - 1] = np.sin(a)
                gstack[sp - 1] = np.cos(a)[:, None] * gstack[sp - 1]
            elif op == OP_COS:
                a = vstack[sp - 1]
                vstack[sp - 1] = np.cos(a)
                gstack[sp - 1] = -np.sin(a)[:, None] * gstack[sp - 1]
            elif op == OP_SQRT:
                v = np.sqrt(vstack[sp - 1])
                vstack[sp - 1] = v
                gstack[sp - 1] = (0.5 / v)[:, None] * gstack[sp - 1]
            elif op == OP_EXP:
                v = np.exp(vstack[sp - 1])
                vstack[sp - 1] = v
                gstack[sp - 1] = v[:, None] * gstack[sp - 1]
            elif op == OP_BUMP:
                a = vstack[sp - 1]
                v = _bump(a)
                d = np.zeros_like(a)
                pos = a > 0.0
                d[pos] = v[pos] / (a[pos] * a[pos])
                vstack[sp - 1] = v
                gstack[sp - 1] = d[:, None] * gstack[sp - 1]
            else:
                sp -= 1
                b, gb = vstack[sp], gstack[sp]
                a, ga = vstack[sp - 1], gstack[sp - 1]
                if op == OP_ADD:
                    vstack[sp - 1] = a + b
                    gstack[sp - 1] = ga + gb
                elif op == OP_SUB:
                    vstack[sp - 1] = a - b
                    gstack[sp - 1] = ga - gb
                elif op == OP_MUL:
                    vstack[sp - 1] = a * b
                    gstack[sp - 1] = b[:, None] * ga + a[:, None] * gb
                elif op == OP_DIV:
                    v = a / b
                    vstack[sp - 1] = v
                    gstack[sp - 1] = (ga - v[:, None] * gb) / b[:, None]
    return out, jac
