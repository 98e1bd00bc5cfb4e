from .backend import BACKEND, backends, eval_values, eval_with_jac
from .parse import Expr, parse, rename, substitute, variables
from .program import Program, compile_program

__all__ = [
    "BACKEND",
    "Expr",
    "Program",
    "backends",
    "compile_program",
    "eval_values",
    "eval_with_jac",
    "parse",
    "rename",
    "substitute",
    "variables",
]
