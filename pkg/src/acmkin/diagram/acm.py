"""Diagrams: spaces and constraint morphisms hung on an index shape.

A diagram assigns an embedded space to every actor and constraint index, a
map A_i -> D(c) to every membership c in C_i, sends star to the terminal
Point, and realizes every interaction index as the fiber product of the two
product morphisms over the shared constraints. Validation checks the axioms
with sampled numerical evidence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ShapeError, SolveDiverged, ValidationFailure
from ..geom import (
    SmoothMap,
    check_surjective_submersion,
    fiber_product,
    preimage_point,
    product,
    sample_points,
    solve_feasible,
    tuple_map,
)
from .shape import STAR, Skeleton


@dataclass
class Interaction:
    pair: tuple
    shared: tuple  # nontrivial shared constraint ids, sorted
    product_space: "Space"
    cospan_left: SmoothMap  # A_i -> product of shared constraints
    cospan_right: SmoothMap
    apex: "Space"
    proj_left: SmoothMap
    proj_right: SmoothMap


class ACMDiagram:
    def __init__(self, shape, spaces, morphisms):
        """shape: ActorIndexCategory; spaces: id -> Space (actors and
        constraints); morphisms: (actor, constraint) -> SmoothMap."""
        self.shape = shape
        self.spaces = dict(spaces)
        self.morphisms = dict(morphisms)
        self._interactions = {}
        self._check_structure()

    # -- structural wiring -----------------------------------------------------

    def _check_structure(self):
        sh = self.shape
        for a in sh.actors:
            if a not in self.spaces:
                raise ShapeError(f"no space for actor {a!r}")
        for c in sh.constraints:
            if c not in self.spaces:
                raise ShapeError(f"no space for constraint {c!r}")
        for a in sh.actors:
            for c in sh.constraints_of(a):
                m = self.morphisms.get((a, c))
                if m is None:
                    raise ShapeError(f"missing constraint morphism ({a!r}, {c!r})")
                if m.source.signature() != self.spaces[a].signature():
                    raise ShapeError(f"morphism ({a!r}, {c!r}) source is not D({a!r})")
                if m.target.signature() != self.spaces[c].signature():
                    raise ShapeError(f"morphism ({a!r}, {c!r}) target is not D({c!r})")
        extra = set(self.morphisms) - {
            (a, c) for a in sh.actors for c in sh.constraints_of(a)
        }
        if extra:
            raise ShapeError(f"morphisms not in the shape: {sorted(extra)}")

    def space(self, idx):
        return self.spaces[idx]

    # -- derived maps ------------------------------------------------------------

    def shared_product(self, constraint_ids, name=None):
        """Product of constraint spaces over sorted ids (empty -> Point)."""
        ids = tuple(sorted(constraint_ids))
        entries = [(self.spaces[c], f"{c}_", c) for c in ids]
        space, projs = product(entries, name=name or ("*".join(ids) if ids else "point"))
        return space, dict(zip(ids, projs))

    def product_morphism(self, actor, constraint_ids, prod_space=None):
        """The tuple map A_actor -> prod of the given constraints."""
        ids = tuple(sorted(constraint_ids))
        if prod_space is None:
            prod_space, _ = self.shared_product(ids)
        maps = [self.morphisms[(actor, c)] for c in ids]
        if not ids:
            return SmoothMap(f"{actor}->point", self.spaces[actor], prod_space, ())
        return tuple_map(maps, prod_space, name=f"{actor}->" + "*".join(ids))

    def _side_spec(self, actor):
        """Fiber-product renaming: welded apexes keep their flat coords."""
        space = self.spaces[actor]
        if space.blocks:
            return None, None
        return f"{actor}_", actor

    def interaction(self, i, j):
        key = tuple(sorted((i, j)))
        got = self._interactions.get(key)
        if got is not None:
            return got
        i, j = key
        shared = self.shape.shared(i, j)
        prod_space, _ = self.shared_product(shared)
        pm_i = self.product_morphism(i, shared, prod_space)
        pm_j = self.product_morphism(j, shared, prod_space)
        lspec, lblock = self._side_spec(i)
        rspec, rblock = self._side_spec(j)
        fp = fiber_product(
            pm_i,
            pm_j,
            name=f"K({i},{j})",
            left_rename=lspec,
            right_rename=rspec,
            left_block=lblock or i,
            right_block=rblock or j,
        )
        inter = Interaction(key, shared, prod_space, pm_i, pm_j,
                            fp.space, fp.proj_left, fp.proj_right)
        self._interactions[key] = inter
        return inter

    def skeleton(self):
        return Skeleton.of(self.shape)

    def is_acyclic(self):
        return self.skeleton().is_acyclic()

    # -- validation ---------------------------------------------------------------

    def validate(self, n_samples=5, seed=0):
        checks = []

        def add(axiom, subject, ok, detail=""):
            checks.append(AxiomCheck(axiom, subject, bool(ok), str(detail)))

        rng_seed = seed
        # (i) index assignment is total (construction enforces it; record it)
        add("i", "indices", True, f"{len(self.shape.actors)} actors, "
                                  f"{len(self.shape.constraints)} constraints")
        # (ii) constraint morphisms well typed, sampled
        for (a, c), m in sorted(self.morphisms.items()):
            try:
                worst = 0.0
                for fp in sample_points(self.spaces[a], n_samples, rng_seed):
                    worst = max(worst, self.spaces[c].residual_norm(m(fp.x)))
                add("ii", f"{a}->{c}", worst <= 1e-8, f"image residual {worst:.2e}")
            except SolveDiverged as exc:
                add("ii", f"{a}->{c}", False, exc)
        # (iii) only the star index is terminal
        for idx in self.shape.actors + self.shape.constraints:
            if self.spaces[idx].dim == 0:
                add("iii", idx, False, "zero-dimensional space on a non-star index")
        add("iii", STAR, True, "star -> Point (implicit)")
        # (iv) product morphisms over shared constraints exist for every pair
        for (i, j) in self.shape.interactions():
            shared = self.shape.shared(i, j)
            prod_space, _ = self.shared_product(shared)
            for actor in (i, j):
                pm = self.product_morphism(actor, shared, prod_space)
                try:
                    verdict = check_surjective_submersion(pm, n_samples, rng_seed)
                    add("iv", f"{actor}=>{i},{j}", verdict.ok, verdict)
                except SolveDiverged as exc:
                    add("iv", f"{actor}=>{i},{j}", False, exc)
        # (v) interactions are the fiber products, and are inhabited
        for (i, j) in self.shape.interactions():
            try:
                inter = self.interaction(i, j)
                fp = solve_feasible(inter.apex, rng_seed)
                add("v", f"{i},{j}", True,
                    f"apex dim {inter.apex.dim}, residual {fp.residual_norm:.2e}")
            except SolveDiverged as exc:
                add("v", f"{i},{j}", False, exc)
        return ValidationReport(tuple(checks))

    def validate_or_raise(self, n_samples=5, seed=0):
        report = self.validate(n_samples, seed)
        if not report.ok:
            raise ValidationFailure(report)
        return report

    # -- decomposition checks -------------------------------------------------------

    def decomposes_external(self, n_samples=5, seed=0):
        """Every actor submerges onto the product of its external constraints."""
        verdicts = {}
        for a in self.shape.actors:
            ext = self.shape.ext_set(a, nontrivial=True)
            pm = self.product_morphism(a, ext)
            try:
                verdicts[a] = check_surjective_submersion(pm, n_samples, seed)
            except SolveDiverged as exc:
                verdicts[a] = FailedCoverage(str(exc))
        return DecompositionReport(verdicts)

    def decomposes_into_constraints(self, n_samples=5, seed=0):
        """Every actor's full constraint tuple map is an isomorphism (sampled)."""
        verdicts = {}
        for a in self.shape.actors:
            cs = self.shape.constraints_of(a)
            prod_space, _ = self.shared_product(cs)
            if prod_space.dim != self.spaces[a].dim:
                verdicts[a] = FailedCoverage(
                    f"dim {self.spaces[a].dim} != product dim {prod_space.dim}"
                )
                continue
            pm = self.product_morphism(a, cs, prod_space)
            try:
                verdict = check_surjective_submersion(pm, n_samples, seed)
                if verdict.ok:
                    verdict = _sampled_injectivity(pm, n_samples, seed) or verdict
                verdicts[a] = verdict
            except SolveDiverged as exc:
                verdicts[a] = FailedCoverage(str(exc))
        return DecompositionReport(verdicts)

    def with_changes(self, shape=None, spaces=None, morphisms=None):
        return ACMDiagram(shape or self.shape, spaces or self.spaces,
                          morphisms or self.morphisms)

    def __repr__(self):
        return f"ACMDiagram({self.shape!r})"


def _sampled_injectivity(pm, n_samples, seed, tol=1e-6):
    """Evidence against injectivity: preimages of one target from several
    restarts landing at distinct points."""
    rng = np.random.default_rng(seed)
    for fp in sample_points(pm.target, max(2, n_samples // 2), rng):
        hits = [preimage_point(pm, fp.x, rng).x for _ in range(3)]
        for other in hits[1:]:
            if np.linalg.norm(other - hits[0]) > tol:
                return FailedCoverage("distinct preimages for one target (not injective)")
    return None


@dataclass(frozen=True)
class AxiomCheck:
    axiom: str
    subject: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.ok]

    def __str__(self):
        if self.ok:
            return f"valid ({len(self.checks)} checks)"
        lines = [f"axiom ({c.axiom}) fails at {c.subject}: {c.detail}" for c in self.failures()]
        return "; ".join(lines)


@dataclass(frozen=True)
class FailedCoverage:
    detail: str
    ok = False

    def __str__(self):
        return self.detail


@dataclass(frozen=True)
class DecompositionReport:
    verdicts: dict

    @property
    def ok(self):
        return all(v.ok for v in self.verdicts.values())

    def __str__(self):
        parts = [f"{a}: {v}" for a, v in sorted(self.verdicts.items())]
        return "; ".join(parts)
