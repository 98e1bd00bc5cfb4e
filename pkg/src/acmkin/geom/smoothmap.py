"""Maps between embedded spaces, one expression per target ambient coordinate."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, TargetMismatch
from ..expr import compile_program, eval_values, eval_with_jac, parse, rename, substitute


@dataclass
class SmoothMap:
    name: str
    source: "Space"
    target: "Space"
    components: tuple  # Expr per target ambient coordinate, over source coords

    def __post_init__(self):
        self.components = tuple(parse(c) for c in self.components)
        if len(self.components) != self.target.ambient_dim:
            raise TargetMismatch(
                f"{self.name!r}: {len(self.components)} components for target "
                f"ambient dim {self.target.ambient_dim}"
            )
        self._program = None

    def program(self):
        if self._program is None:
            self._program = compile_program(self.components, self.source.coords)
        return self._program

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        one = x.ndim == 1
        y = eval_values(self.program(), np.atleast_2d(x))
        if not np.all(np.isfinite(y)):
            raise DomainError(f"{self.name!r} undefined at sampled point")
        return y[0] if one else y

    def jacobian(self, x):
        """Forward-mode Jacobian(s): (k, n) at a point, (m, k, n) for a batch."""
        x = np.asarray(x, dtype=np.float64)
        one = x.ndim == 1
        vals, jac = eval_with_jac(self.program(), np.atleast_2d(x))
        if not (np.all(np.isfinite(vals)) and np.all(np.isfinite(jac))):
            raise DomainError(f"{self.name!r}: derivative undefined at point")
        return (vals[0], jac[0]) if one else (vals, jac)

    def compose(self, inner, name=None):
        """self o inner (inner: A -> source, result: A -> target)."""
        if inner.target.coords != self.source.coords:
            raise TargetMismatch(
                f"cannot compose {self.name!r} after {inner.name!r}: "
                f"{inner.target.name!r} vs {self.source.name!r}"
            )
        sub = dict(zip(self.source.coords, inner.components))
        comps = tuple(substitute(c, sub) for c in self.components)
        return SmoothMap(name or f"{self.name}.{inner.name}", inner.source, self.target, comps)

    def renamed_source(self, mapping, new_source):
        """Same map with source coordinates renamed (mapping: old -> new)."""
        comps = tuple(rename(c, mapping) for c in self.components)
        return SmoothMap(self.name, new_source, self.target, comps)

    def well_typed_at(self, x, tol=1e-9):
        return self.target.residual_norm(self(x)) <= tol

    def signature(self):
        return (
            tuple(str(c) for c in self.components),
            self.source.signature(),
            self.target.signature(),
        )

    def __repr__(self):
        return f"SmoothMap({self.name!r}: {self.source.name} -> {self.target.name})"


def identity_map(space):
    from .space import Space  # noqa: F401 (typing aid)

    return SmoothMap(f"id_{space.name}", space, space, tuple(space.coords))


def coordinate_restriction(space, names, target, name=None):
    """Project an apex onto the block of coordinates `names` (target's coords)."""
    if len(names) != target.ambient_dim:
        raise TargetMismatch("restriction block size != target ambient dim")
    return SmoothMap(name or f"{space.name}->{target.name}", space, target, tuple(names))


def tuple_map(maps, target, name=None):
    """Pair/tuple maps with a common source into a product target."""
    if not maps:
        raise TargetMismatch("tuple_map needs at least one factor")
    src = maps[0].source
    for m in maps[1:]:
        if m.source is not src and m.source.coords != src.coords:
            raise TargetMismatch("tuple_map factors must share a source")
    comps = tuple(c for m in maps for c in m.components)
    return SmoothMap(name or "tuple", src, target, comps)
