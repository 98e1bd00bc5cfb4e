"""Embedded smooth manifolds presented by ambient coordinates + residuals.

A Space is the zero set of residual expressions inside R^(ambient). For
independently-built spaces dim == ambient - len(residuals) and the residual
Jacobian has full row rank on the zero set; fiber products instead declare
their dimension and carry redundant residual rows, so `dim` is stored
explicitly and checked by numerical rank where needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import TargetMismatch
from ..expr import compile_program, parse, variables

SOLVE_TOL = 1e-9  # absolute residual norm accepted as "on the manifold"


@dataclass
class Space:
    name: str
    coords: tuple  # ambient coordinate names
    residuals: tuple  # Expr
    dim: int
    guards: tuple = ()  # expressions required > 0 (orientation selection)
    anchor: tuple = None  # preferred solver init center, defaults to 0
    blocks: dict = field(default_factory=dict)  # original actor id -> coord names

    def __post_init__(self):
        self.coords = tuple(self.coords)
        self.residuals = tuple(parse(r) for r in self.residuals)
        self.guards = tuple(parse(g) for g in self.guards)
        if self.anchor is not None:
            self.anchor = tuple(float(a) for a in self.anchor)
            if len(self.anchor) != len(self.coords):
                raise TargetMismatch(f"anchor length != ambient dim on {self.name!r}")
        seen = set(self.coords)
        if len(seen) != len(self.coords):
            raise TargetMismatch(f"duplicate coordinate names on {self.name!r}")
        for r in self.residuals + self.guards:
            extra = set(variables(r)) - seen
            if extra:
                raise TargetMismatch(f"residual on {self.name!r} uses unknown {sorted(extra)}")
        self._program = None
        self._guard_program = None

    @property
    def ambient_dim(self):
        return len(self.coords)

    def program(self):
        if self._program is None:
            self._program = compile_program(self.residuals, self.coords)
        return self._program

    def guard_program(self):
        if self._guard_program is None and self.guards:
            self._guard_program = compile_program(self.guards, self.coords)
        return self._guard_program

    def residual_values(self, x):
        """Residuals at one point (1-d) or a batch (2-d)."""
        from ..expr import eval_values

        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        if not self.residuals:
            return np.zeros((x.shape[0], 0))
        return eval_values(self.program(), x)

    def residual_norm(self, x):
        r = self.residual_values(x)
        return float(np.linalg.norm(r[0])) if r.shape[0] == 1 else np.linalg.norm(r, axis=1)

    def guards_ok(self, x):
        if not self.guards:
            return True
        from ..expr import eval_values

        vals = eval_values(self.guard_program(), np.atleast_2d(np.asarray(x, dtype=np.float64)))
        return bool(np.all(vals > 0.0))

    def contains(self, x, tol=SOLVE_TOL):
        return self.residual_norm(np.asarray(x)) <= tol and self.guards_ok(x)

    def init_center(self):
        if self.anchor is not None:
            return np.asarray(self.anchor, dtype=np.float64)
        return np.zeros(self.ambient_dim)

    def signature(self):
        """Structural identity used for equality and manifests."""
        return (
            self.coords,
            tuple(str(r) for r in self.residuals),
            self.dim,
            tuple(str(g) for g in self.guards),
            self.anchor,
        )

    def __eq__(self, other):
        return isinstance(other, Space) and self.signature() == other.signature()

    def __hash__(self):
        return hash(self.signature())

    def __repr__(self):
        return f"Space({self.name!r}, dim={self.dim}, ambient={self.ambient_dim})"


@dataclass
class FeasiblePoint:
    space: Space
    x: np.ndarray
    residual_norm: float

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=np.float64)

    def block(self, actor_id):
        """Coordinates of one original actor block (for welded apexes)."""
        names = self.space.blocks[actor_id]
        idx = [self.space.coords.index(n) for n in names]
        return self.x[idx]


# --- factories ---------------------------------------------------------------


def point_space(name="point"):
    """The terminal manifold: zero ambient coordinates."""
    return Space(name, (), (), dim=0)


def euclidean(n, name=None, prefix="x"):
    coords = tuple(f"{prefix}{i + 1}" for i in range(n))
    return Space(name or f"R{n}", coords, (), dim=n)


def plane(name="plane", coords=("u1", "u2")):
    return Space(name, coords, (), dim=2)


def circle(name="circle", coords=("c", "s")):
    c, s = coords
    return Space(name, coords, (f"{c} * {c} + {s} * {s} - 1",), dim=1, anchor=(1.0, 0.0))


def se2_space(name="se2"):
    """Planar rigid placements embedded as (px, py, c, s) with c^2+s^2=1."""
    return Space(
        name,
        ("px", "py", "c", "s"),
        ("c * c + s * s - 1",),
        dim=3,
        anchor=(0.0, 0.0, 1.0, 0.0),
    )


def se3_space(name="se3"):
    """Spatial rigid placements as (a, R) in R^3 x R^9 (row-major rotation).

    Residuals are the six independent entries of R^T R - I; the det R > 0
    component is selected by the guard plus identity-anchored solver inits.
    """
    coords = ("ax", "ay", "az") + tuple(f"r{i}{j}" for i in range(3) for j in range(3))
    res = []
    for i in range(3):
        for j in range(i, 3):
            dot = " + ".join(f"r{k}{i} * r{k}{j}" for k in range(3))
            res.append(f"{dot} - 1" if i == j else dot)
    det = (
        "r00 * (r11 * r22 - r12 * r21) - r01 * (r10 * r22 - r12 * r20)"
        " + r02 * (r10 * r21 - r11 * r20)"
    )
    anchor = (0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0)
    return Space(name, coords, tuple(res), dim=6, guards=(det,), anchor=anchor)


def slide_space(name="slide"):
    """Slider constraint target: offsets {(v, th): v . th = 0} ~ R x S^1."""
    return Space(
        name,
        ("vx", "vy", "c", "s"),
        ("c * c + s * s - 1", "vx * c + vy * s"),
        dim=2,
        anchor=(0.0, 0.0, 1.0, 0.0),
    )


def line_space(name="lines"):
    """Pointed lines in R^3: {(x, v): |v| = 1, x . v = 0} (dim 4)."""
    return Space(
        name,
        ("x1", "x2", "x3", "v1", "v2", "v3"),
        ("v1 * v1 + v2 * v2 + v3 * v3 - 1", "x1 * v1 + x2 * v2 + x3 * v3"),
        dim=4,
        anchor=(0.0, 0.0, 0.0, 0.0, 0.0, 1.0),
    )
