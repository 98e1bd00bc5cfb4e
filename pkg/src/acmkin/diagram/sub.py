"""Subdiagrams, inclusions, intersections, and unions of diagrams.

A subdiagram is picked out by a subset of actors together with a (possibly
trimmed) constraint selection per actor; the inclusion records the object
map. Intersections exist when every kept constraint still has an owner;
unions must regenerate every interaction of the combined shape.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ShapeError
from .acm import ACMDiagram


@dataclass(frozen=True)
class Inclusion:
    """Structure-preserving injection of a subdiagram into a diagram."""

    source: ACMDiagram
    target: ACMDiagram
    actor_map: tuple  # (source actor, target actor) pairs
    constraint_map: tuple

    def actors(self):
        return dict(self.actor_map)

    def constraints(self):
        return dict(self.constraint_map)

    def is_identity_on_names(self):
        return all(a == b for a, b in self.actor_map) and all(
            a == b for a, b in self.constraint_map
        )


def restrict_diagram(diagram, actor_subset, constraint_selection=None):
    """Subdiagram on the given actors (optionally trimming constraint sets).

    Returns (subdiagram, inclusion into `diagram`).
    """
    sub_shape = diagram.shape.restrict(actor_subset, constraint_selection)
    spaces = {a: diagram.spaces[a] for a in sub_shape.actors}
    spaces.update({c: diagram.spaces[c] for c in sub_shape.constraints})
    morphisms = {
        (a, c): diagram.morphisms[(a, c)]
        for a in sub_shape.actors
        for c in sub_shape.constraints_of(a)
    }
    sub = ACMDiagram(sub_shape, spaces, morphisms)
    inc = Inclusion(
        sub,
        diagram,
        tuple((a, a) for a in sub_shape.actors),
        tuple((c, c) for c in sub_shape.constraints),
    )
    return sub, inc


@dataclass(frozen=True)
class SubdiagramSpec:
    """A subdiagram named inside a common ambient diagram."""

    actors: tuple
    selection: tuple = None  # optional ((actor, kept constraints), ...)

    def selection_dict(self):
        return None if self.selection is None else {a: set(cs) for a, cs in self.selection}


def intersect(diagram, spec1, spec2):
    """Intersection of two subdiagrams of a common diagram.

    The graph-theoretic intersection always exists; it is itself a diagram
    precisely when every constraint surviving the intersection is owned by a
    surviving actor — otherwise this raises ShapeError naming the orphans.
    """
    sub1, _ = restrict_diagram(diagram, spec1.actors, spec1.selection_dict())
    sub2, _ = restrict_diagram(diagram, spec2.actors, spec2.selection_dict())
    actors = sorted(set(sub1.shape.actors) & set(sub2.shape.actors))
    kept1 = {a: set(sub1.shape.constraints_of(a)) for a in sub1.shape.actors}
    kept2 = {a: set(sub2.shape.constraints_of(a)) for a in sub2.shape.actors}
    constraints = set(sub1.shape.constraints) & set(sub2.shape.constraints)
    orphans = set()
    for c in constraints:
        if not any(c in kept1[a] and c in kept2[a] for a in actors):
            orphans.add(c)
    if orphans:
        raise ShapeError(
            f"intersection drops every owner of {sorted(orphans)}; not a diagram"
        )
    if not actors:
        raise ShapeError("intersection has no actors; not a diagram")
    selection = {a: kept1[a] & kept2[a] for a in actors}
    return restrict_diagram(diagram, actors, selection)


def union_over(diagram, spec1, spec2, require_cover=True):
    """Union of two subdiagrams inside a common diagram.

    Checks the covering conditions (every actor and every constraint of the
    ambient diagram comes from one of the pieces) and returns the union
    diagram with all interactions regenerated, plus the two inclusions.
    """
    sub1, _ = restrict_diagram(diagram, spec1.actors, spec1.selection_dict())
    sub2, _ = restrict_diagram(diagram, spec2.actors, spec2.selection_dict())
    actors = sorted(set(sub1.shape.actors) | set(sub2.shape.actors))
    selection = {}
    for a in actors:
        cs = set()
        if a in sub1.shape.actors:
            cs |= set(sub1.shape.constraints_of(a))
        if a in sub2.shape.actors:
            cs |= set(sub2.shape.constraints_of(a))
        selection[a] = cs
    if require_cover:
        if set(actors) != set(diagram.shape.actors):
            raise ShapeError("pieces do not cover the diagram's actors")
        covered = set()
        for cs in selection.values():
            covered |= cs
        if covered != set(diagram.shape.constraints):
            raise ShapeError("pieces do not cover the diagram's constraints")
    union, inc = restrict_diagram(diagram, actors, selection)
    inc1 = Inclusion(
        sub1,
        union,
        tuple((a, a) for a in sub1.shape.actors),
        tuple((c, c) for c in sub1.shape.constraints),
    )
    inc2 = Inclusion(
        sub2,
        union,
        tuple((a, a) for a in sub2.shape.actors),
        tuple((c, c) for c in sub2.shape.constraints),
    )
    return union, inc1, inc2
