"""Expression layer: parsing, canonical printing, evaluation, derivatives."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from acmkin.errors import ExprParseError
from acmkin.expr import (
    compile_program,
    eval_values,
    eval_with_jac,
    parse,
    rename,
    substitute,
    variables,
)


def test_parse_round_trip_is_canonical():
    e = parse("px + 2 * c - sin(py)")
    assert str(parse(str(e))) == str(e)


def test_whitespace_and_parens_normalize_away():
    assert str(parse("( px+2*c )")) == str(parse("px + 2 * c"))


@pytest.mark.parametrize("bad", ["", "px +", "foo(px)", "1..2", "px $ py", "(px"])
def test_malformed_input_is_rejected(bad):
    with pytest.raises(ExprParseError):
        parse(bad)


def test_variables_are_sorted_and_deduplicated():
    assert variables(parse("b * a + cos(b) - d")) == ["a", "b", "d"]


def test_substitute_replaces_subtrees():
    e = substitute(parse("x + y"), {"y": parse("2 * x")})
    prog = compile_program((e,), ("x",))
    assert eval_values(prog, np.array([[3.0]]))[0, 0] == 9.0


def test_rename_is_pure_relabelling():
    e = rename(parse("x + sin(y)"), {"x": "u", "y": "v"})
    assert variables(e) == ["u", "v"]


# evaluation oracle: a handful of expressions computed by hand at fixed points
HAND_CASES = [
    ("2 + 3 * 4", {}, 14.0),
    ("(2 + 3) * 4", {}, 20.0),
    ("-x * x", {"x": 3.0}, -9.0),
    ("sin(0) + cos(0)", {}, 1.0),
    ("sqrt(x)", {"x": 16.0}, 4.0),
    ("exp(0) + x / 4", {"x": 2.0}, 1.5),
    ("x - y - z", {"x": 10.0, "y": 3.0, "z": 2.0}, 5.0),  # left associativity
]


@pytest.mark.parametrize("src,env,expected", HAND_CASES)
def test_evaluation_against_hand_values(src, env, expected):
    e = parse(src)
    names = tuple(env) or ("x",)
    prog = compile_program((e,), names)
    row = np.array([[env.get(n, 0.0) for n in names]])
    assert eval_values(prog, row)[0, 0] == pytest.approx(expected, abs=1e-15)


def test_bump_is_zero_on_the_left_and_smooth_on_the_right():
    prog = compile_program((parse("bump(x)"),), ("x",))
    xs = np.array([[-1.0], [0.0], [1.0]])
    vals, jac = eval_with_jac(prog, xs)
    assert vals[0, 0] == 0.0 and vals[1, 0] == 0.0
    assert vals[2, 0] == pytest.approx(np.exp(-1.0))
    # derivative: 0 for x <= 0, bump(x)/x^2 for x > 0
    assert jac[0, 0, 0] == 0.0 and jac[1, 0, 0] == 0.0
    assert jac[2, 0, 0] == pytest.approx(np.exp(-1.0))


def _fd(prog, X, step=1e-6):
    J = np.empty((X.shape[0], prog.n_out, X.shape[1]))
    for k in range(X.shape[1]):
        h = np.zeros_like(X)
        h[:, k] = step
        J[:, :, k] = (eval_values(prog, X + h) - eval_values(prog, X - h)) / (2 * step)
    return J


def test_forward_derivatives_match_central_differences():
    srcs = ("x * sin(y) + exp(x / 3)", "sqrt(x * x + y * y + 1)", "bump(x) * y")
    prog = compile_program(tuple(parse(s) for s in srcs), ("x", "y"))
    X = np.random.default_rng(3).normal(size=(40, 2))
    _, ad = eval_with_jac(prog, X)
    fd = _fd(prog, X)
    denom = np.maximum(1.0, np.maximum(np.abs(ad), np.abs(fd)))
    assert np.max(np.abs(ad - fd) / denom) < 1e-6


@given(st.lists(st.sampled_from("xy"), min_size=1, max_size=6),
       st.sampled_from(["+", "-", "*"]))
def test_printer_idempotence_on_small_random_expressions(names, op):
    src = f" {op} ".join(names)
    e = parse(src)
    assert str(parse(str(e))) == str(e)


def test_python_fallback_matches_active_kernel():
    from acmkin.expr import _evalkern_py
    from acmkin.expr import backend

    prog = compile_program(
        tuple(parse(s) for s in ("x * y - bump(x)", "cos(x) / (y * y + 1)")),
        ("x", "y"))
    X = np.random.default_rng(11).normal(size=(25, 2))
    v_active, j_active = eval_with_jac(prog, X)
    v_py = _evalkern_py.eval_values(prog, X)
    j_py = _evalkern_py.eval_with_jac(prog, X)[1]
    assert np.allclose(v_active, v_py, atol=1e-14)
    assert np.allclose(j_active, j_py, atol=1e-14)
    assert backend.BACKEND in ("compiled", "python")
