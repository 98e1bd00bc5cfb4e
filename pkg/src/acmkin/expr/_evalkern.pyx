# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled stack-machine kernel for expression programs.

Same opcode stream and semantics as the numpy fallback, but iterates points
in C. Forward-mode derivative vectors ride along on a parallel stack.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, exp, sin, sqrt

cnp.import_array()

DEF OP_LOAD_VAR = 0
DEF OP_LOAD_CONST = 1
DEF OP_ADD = 2
DEF OP_SUB = 3
DEF OP_MUL = 4
DEF OP_DIV = 5
DEF OP_NEG = 6
DEF OP_SIN = 7
DEF OP_COS = 8
DEF OP_SQRT = 9
DEF OP_EXP = 10
DEF OP_BUMP = 11
DEF OP_OUTPUT = 12

BACKEND = "compiled"


def eval_values(program, X):
    X = np.ascontiguousarray(X, dtype=np.float64)
    cdef cnp.int64_t[::1] code = program.code
    cdef double[::1] consts = program.consts
    cdef double[:, ::1] xv = X
    cdef Py_ssize_t m = X.shape[0]
    cdef int n_out = program.n_out
    out_arr = np.empty((m, n_out), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    stack_arr = np.empty(program.max_stack, dtype=np.float64)
    cdef double[::1] stack = stack_arr
    cdef Py_ssize_t p, k, ncode = code.shape[0]
    cdef int op, arg, sp
    cdef double a, b

    for p in range(m):
        sp = 0
        for k in range(0, ncode, 2):
            op = <int> code[k]
            arg = <int> code[k + 1]
            if op == OP_LOAD_VAR:
                stack[sp] = xv[p, arg]
                sp += 1
            elif op == OP_LOAD_CONST:
                stack[sp] = consts[arg]
                sp += 1
            elif op == OP_OUTPUT:
                sp -= 1
                out[p, arg] = stack[sp]
            elif op == OP_NEG:
                stack[sp - 1] = -stack[sp - 1]
            elif op == OP_SIN:
                stack[sp - 1] = sin(stack[sp - 1])
            elif op == OP_COS:
                stack[sp - 1] = cos(stack[sp - 1])
            elif op == OP_SQRT:
                stack[sp - 1] = sqrt(stack[sp - 1])
            elif op == OP_EXP:
                stack[sp - 1] = exp(stack[sp - 1])
            elif op == OP_BUMP:
                a = stack[sp - 1]
                stack[sp - 1] = exp(-1.0 / a) if a > 0.0 else 0.0
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
    return out_arr


def eval_with_jac(program, X):
    X = np.ascontiguousarray(X, dtype=np.float64)
    cdef cnp.int64_t[::1] code = program.code
    cdef double[::1] consts = program.consts
    cdef double[:, ::1] xv = X
    cdef Py_ssize_t m = X.shape[0]
    cdef int n_out = program.n_out
    cdef int n = program.n_in
    out_arr = np.empty((m, n_out), dtype=np.float64)
    jac_arr = np.empty((m, n_out, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double[:, :, ::1] jac = jac_arr
    vstack_arr = np.empty(program.max_stack, dtype=np.float64)
    gstack_arr = np.zeros((program.max_stack, n), dtype=np.float64)
    cdef double[::1] vstack = vstack_arr
    cdef double[:, ::1] gstack = gstack_arr
    cdef Py_ssize_t p, k, t, ncode = code.shape[0]
    cdef int op, arg, sp
    cdef double a, b, v, d

    for p in range(m):
        sp = 0
        for k in range(0, ncode, 2):
            op = <int> code[k]
            arg = <int> code[k + 1]
            if op == OP_LOAD_VAR:
                vstack[sp] = xv[p, arg]
                for t in range(n):
                    gstack[sp, t] = 0.0
                gstack[sp, arg] = 1.0
                sp += 1
            elif op == OP_LOAD_CONST:
                vstack[sp] = consts[arg]
                for t in range(n):
                    gstack[sp, t] = 0.0
                sp += 1
            elif op == OP_OUTPUT:
                sp -= 1
                out[p, arg] = vstack[sp]
                for t in range(n):
                    jac[p, arg, t] = gstack[sp, t]
            elif op == OP_NEG:
                vstack[sp - 1] = -vstack[sp - 1]
                for t in range(n):
                    gstack[sp - 1, t] = -gstack[sp - 1, t]
            elif op == OP_SIN:
                a = vstack[sp - 1]
                vstack[sp - 1] = sin(a)
                d = cos(a)
                for t in range(n):
                    gstack[sp - 1, t] *= d
            elif op == OP_COS:
                a = vstack[sp - 1]
                vstack[sp - 1] = cos(a)
                d = -sin(a)
                for t in range(n):
                    gstack[sp - 1, t] *= d
            elif op == OP_SQRT:
                v = sqrt(vstack[sp - 1])
                vstack[sp - 1] = v
                d = 0.5 / v
                for t in range(n):
                    gstack[sp - 1, t] *= d
            elif op == OP_EXP:
                v = exp(vstack[sp - 1])
                vstack[sp - 1] = v
                for t in range(n):
                    gstack[sp - 1, t] *= v
            elif op == OP_BUMP:
                a = vstack[sp - 1]
                if a > 0.0:
                    v = exp(-1.0 / a)
                    d = v / (a * a)
                else:
                    v = 0.0
                    d = 0.0
                vstack[sp - 1] = v
                for t in range(n):
                    gstack[sp - 1, t] *= d
            else:
                sp -= 1
                b = vstack[sp]
                a = vstack[sp - 1]
                if op == OP_ADD:
                    vstack[sp - 1] = a + b
                    for t in range(n):
                        gstack[sp - 1, t] += gstack[sp, t]
                elif op == OP_SUB:
                    vstack[sp - 1] = a - b
                    for t in range(n):
                        gstack[sp - 1, t] -= gstack[sp, t]
                elif op == OP_MUL:
                    vstack[sp - 1] = a * b
                    for t in range(n):
                        gstack[sp - 1, t] = b * gstack[sp - 1, t] + a * gstack[sp, t]
                elif op == OP_DIV:
                    v = a / b
                    vstack[sp - 1] = v
                    for t in range(n):
                        gstack[sp - 1, t] = (gstack[sp - 1, t] - v * gstack[sp, t]) / b
    return out_arr, jac_arr
