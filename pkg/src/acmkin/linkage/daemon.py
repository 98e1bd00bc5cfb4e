"""Driving constraints along a prescribed path and slicing configurations.

A daemon picks a nonempty set of constraints and a time-parametrized target
for their combined leg. At each instant the slice is the configuration
submanifold where the driven legs hit the target; its dimension drops by the
total driven-constraint dimension (the combined leg is checked to be a
surjective submersion, so the drop is uniform).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptySlice, ShapeError, SolveDiverged, SubmersionViolated
from ..expr import compile_program, eval_values, parse
from ..geom import Space, check_surjective_submersion, solve_feasible, tuple_map


@dataclass
class Daemon:
    limit: "ConfigurationSpace"
    constraint_ids: tuple
    path: tuple  # one expression in t per driven ambient coordinate
    smoothness: int = 1  # declared regularity of the path, metadata only

    def __post_init__(self):
        self.constraint_ids = tuple(self.constraint_ids)
        diagram = self.limit.diagram
        if not self.constraint_ids:
            raise ShapeError("a daemon must drive at least one constraint")
        unknown = [c for c in self.constraint_ids
                   if c not in diagram.shape.constraints]
        if unknown:
            raise ShapeError(f"no such constraints: {unknown}")
        self.path = tuple(parse(p) for p in self.path)
        width = sum(diagram.spaces[c].ambient_dim for c in self.constraint_ids)
        if len(self.path) != width:
            raise ShapeError(f"path has {len(self.path)} components for "
                             f"{width} driven ambient coordinates")
        self._program = compile_program(self.path, ("t",))
        self._pi = None

    @property
    def driven_dim(self):
        return sum(self.limit.diagram.spaces[c].dim for c in self.constraint_ids)

    def projection(self, n_samples=20, seed=0):
        """Combined driven leg, verified once to be a surjective submersion."""
        if self._pi is None:
            target, _ = self.limit.diagram.shared_product(self.constraint_ids)
            pi = tuple_map([self.limit.legs[c] for c in sorted(self.constraint_ids)],
                           target, name="daemon_pi")
            verdict = check_surjective_submersion(pi, n_samples=n_samples, seed=seed)
            if not verdict.ok:
                raise SubmersionViolated(f"driven legs are not a surjective "
                                         f"submersion: {verdict}")
            self._pi = pi
        return self._pi

    def target_at(self, t):
        return eval_values(self._program, np.array([[float(t)]]))[0]


@dataclass
class DaemonSlice:
    t: float
    space: Space
    sample: np.ndarray
    declared_dim: int


def daemon_slice(daemon, t, seed=0):
    """The configuration slice at time t, with one feasible witness point."""
    pi = daemon.projection(seed=seed)
    apex = daemon.limit.apex
    values = daemon.target_at(t)
    rows = tuple(parse(f"({comp}) - ({value!r})")
                 for comp, value in zip(pi.components, values.tolist()))
    dim = apex.dim - daemon.driven_dim
    sliced = Space(f"{apex.name}@t={t:g}", apex.coords,
                   tuple(apex.residuals) + rows, dim=dim,
                   guards=apex.guards, anchor=apex.anchor)
    try:
        point = solve_feasible(sliced, np.random.default_rng(seed))
    except SolveDiverged as exc:
        raise EmptySlice(f"no configuration meets the driven target at "
                         f"t={t:g}: {exc}") from exc
    return DaemonSlice(t=float(t), space=sliced, sample=point.x, declared_dim=dim)
