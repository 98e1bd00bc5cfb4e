"""Welding: replace a pair of actors by their interaction apex.

The welded diagram keeps every other actor untouched; the new actor is the
cached fiber-product apex of the pair, its constraint maps are composites
with the apex projections (the first actor's branch wins for constraints
both carried). The product-morphism axiom is re-checked for every pair the
new actor participates in; a failure raises WeldObstruction naming the
witnessing neighbor.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..diagram import ACMDiagram
from ..diagram.acm import FailedCoverage
from ..errors import ShapeError, SolveDiverged, WeldObstruction
from ..geom import check_surjective_submersion


@dataclass
class WeldStep:
    before: ACMDiagram
    after: ACMDiagram
    pair: tuple
    new_actor_id: str
    apex: "Space"
    proj_first: "SmoothMap"  # apex -> space of the lexicographically first actor
    proj_second: "SmoothMap"
    verdicts: dict  # (actor, neighbor) -> submersion verdict for the new pairs

    def record(self):
        return {
            "pair": list(self.pair),
            "new_actor": self.new_actor_id,
            "apex_dim": self.apex.dim,
            "apex_ambient": self.apex.ambient_dim,
        }

    def __repr__(self):
        return (f"WeldStep({self.pair[0]}+{self.pair[1]} -> {self.new_actor_id}, "
                f"dim {self.apex.dim})")


def weld(diagram, i, j, n_samples=5, seed=0):
    """Weld actors i and j; returns a WeldStep or raises WeldObstruction."""
    if i == j:
        raise ShapeError("cannot weld an actor with itself")
    for a in (i, j):
        if a not in diagram.shape.actors:
            raise ShapeError(f"unknown actor {a!r}")
    i, j = sorted((i, j))
    inter = diagram.interaction(i, j)
    new_shape, new_id = diagram.shape.weld(i, j)

    spaces = {a: diagram.spaces[a] for a in new_shape.actors if a != new_id}
    spaces.update({c: diagram.spaces[c] for c in new_shape.constraints})
    spaces[new_id] = inter.apex
    morphisms = {}
    for a in new_shape.actors:
        if a == new_id:
            continue
        for c in new_shape.constraints_of(a):
            morphisms[(a, c)] = diagram.morphisms[(a, c)]
    first_owns = set(diagram.shape.constraints_of(i))
    for c in new_shape.constraints_of(new_id):
        if c in first_owns:
            base, proj = diagram.morphisms[(i, c)], inter.proj_left
        else:
            base, proj = diagram.morphisms[(j, c)], inter.proj_right
        morphisms[(new_id, c)] = base.compose(proj, name=f"{new_id}->{c}")
    after = ACMDiagram(new_shape, spaces, morphisms)

    # Re-establish the product-morphism axiom for every pair touching new_id.
    verdicts = {}
    for k in new_shape.actors:
        if k == new_id:
            continue
        shared = after.shape.shared(new_id, k)
        prod_space, _ = after.shared_product(shared)
        for actor in (new_id, k):
            pm = after.product_morphism(actor, shared, prod_space)
            try:
                verdict = check_surjective_submersion(pm, n_samples, seed)
            except SolveDiverged as exc:
                verdict = FailedCoverage(f"sampling failed: {exc}")
            verdicts[(actor, k)] = verdict
            if not verdict.ok:
                raise WeldObstruction(i, j, witness=k, verdict=verdict)
    return WeldStep(diagram, after, (i, j), new_id, inter.apex,
                    inter.proj_left, inter.proj_right, verdicts)
