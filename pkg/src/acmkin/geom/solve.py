"""Damped Gauss-Newton solver for residual systems on embedded spaces.

Levenberg-style damping, at most 100 iterations per attempt and 20 random
restarts, all randomness through an explicit seeded Generator. Solutions
violating a space's orientation guards are rejected and the attempt restarts
(this is how e.g. the det R > 0 sheet of the rotation group is selected).
"""

from __future__ import annotations

import numpy as np

from ..errors import SolveDiverged
from ..expr import eval_with_jac
from .space import SOLVE_TOL, FeasiblePoint

MAX_ITER = 100
MAX_RESTARTS = 20


def as_rng(seed_or_rng):
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


class ResidualStack:
    """Concatenation of program blocks, each optionally shifted by a target."""

    def __init__(self, n, blocks):
        # blocks: list of (program, offset-or-None)
        self.n = n
        self.blocks = blocks
        self.k = sum(p.n_out for p, _ in blocks)

    def eval(self, x):
        rs, js = [], []
        X = x[None, :]
        for prog, off in self.blocks:
            if prog.n_out == 0:
                continue
            v, j = eval_with_jac(prog, X)
            r = v[0] if off is None else v[0] - off
            rs.append(r)
            js.append(j[0])
        if not rs:
            return np.zeros(0), np.zeros((0, self.n))
        return np.concatenate(rs), np.vstack(js)


def _lm_attempt(stack, x0, tol, max_iter):
    x = x0.copy()
    lam = 1e-3
    r, J = stack.eval(x)
    if not np.all(np.isfinite(r)):
        return x, np.inf, False
    norm = np.linalg.norm(r)
    for _ in range(max_iter):
        if norm <= tol:
            return x, norm, True
        if not np.all(np.isfinite(J)):
            return x, norm, False
        A = J.T @ J
        g = J.T @ r
        accepted = False
        for _ in range(12):
            try:
                step = np.linalg.solve(A + lam * np.eye(stack.n), -g)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            x_new = x + step
            r_new, J_new = stack.eval(x_new)
            if np.all(np.isfinite(r_new)):
                norm_new = np.linalg.norm(r_new)
                if norm_new < norm:
                    x, r, J, norm = x_new, r_new, J_new, norm_new
                    lam = max(lam * 0.35, 1e-12)
                    accepted = True
                    break
            lam *= 6.0
            if lam > 1e12:
                break
        if not accepted:
            break
    return x, norm, norm <= tol


def solve_feasible(space, rng, extra=(), scale=1.0, tol=SOLVE_TOL,
                   max_iter=MAX_ITER, restarts=MAX_RESTARTS, init=None):
    """Find a point on `space` also satisfying the extra (program, offset) blocks.

    Returns a FeasiblePoint; raises SolveDiverged when the restart budget is
    exhausted. `init` pins the first attempt's starting point.
    """
    rng = as_rng(rng)
    n = space.ambient_dim
    blocks = []
    if space.residuals:
        blocks.append((space.program(), None))
    blocks.extend(extra)
    stack = ResidualStack(n, blocks)
    center = space.init_center()
    best = np.inf
    for attempt in range(restarts + 1):
        if attempt == 0 and init is not None:
            x0 = np.asarray(init, dtype=np.float64).copy()
        else:
            x0 = center + scale * rng.standard_normal(n)
        if stack.k == 0:
            if space.guards_ok(x0):
                return FeasiblePoint(space, x0, 0.0)
            continue
        x, norm, ok = _lm_attempt(stack, x0, tol, max_iter)
        if ok and space.guards_ok(x):
            return FeasiblePoint(space, x, float(norm))
        best = min(best, norm)
    raise SolveDiverged(
        f"no feasible point on {space.name!r} after {restarts + 1} attempts "
        f"(best residual {best:.3e})",
        best_norm=best,
    )


def sample_point(space, rng=0, scale=1.0, tol=SOLVE_TOL):
    """One random feasible point on the space."""
    return solve_feasible(space, rng, scale=scale, tol=tol)


def sample_points(space, n, rng=0, scale=1.0, tol=SOLVE_TOL):
    rng = as_rng(rng)
    return [solve_feasible(space, rng, scale=scale, tol=tol) for _ in range(n)]


def preimage_point(smap, y, rng=0, scale=1.0, tol=SOLVE_TOL, restarts=MAX_RESTARTS):
    """Solve smap(x) = y on the source manifold."""
    y = np.asarray(y, dtype=np.float64)
    extra = [(smap.program(), y)]
    return solve_feasible(smap.source, rng, extra=extra, scale=scale, tol=tol,
                          restarts=restarts)
