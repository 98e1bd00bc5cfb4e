"""Rigid inclusions: composable step lists between diagrams.

Each step is one clause of the simple-inclusion trichotomy — an index
isomorphism, one added constraint membership on an existing actor, or one
added actor carrying only the trivial constraint. Composition concatenates
step lists; equality compares normalized lists (adjacent isos fused,
identity isos dropped), which makes the category laws exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..diagram import ACMDiagram, build_shape
from ..errors import NotDecomposing, ShapeError, TargetMismatch
from ..geom import SmoothMap, sample_points
from .flimit import ConfigurationSpace  # noqa: F401  (systems carry limits)


@dataclass(frozen=True, eq=False)
class IsoStep:
    """Bijective renaming of actor and constraint indices."""

    mapping: tuple  # sorted (old, new) pairs over all indices

    @staticmethod
    def identity(diagram):
        ids = diagram.shape.actors + diagram.shape.constraints
        return IsoStep(tuple((i, i) for i in ids))

    def as_dict(self):
        return dict(self.mapping)

    def is_identity(self):
        return all(a == b for a, b in self.mapping)

    def then(self, other):
        m1, m2 = self.as_dict(), other.as_dict()
        if set(m1.values()) != set(m2.keys()):
            raise ShapeError("iso steps do not chain (index sets differ)")
        return IsoStep(tuple(sorted((k, m2[v]) for k, v in m1.items())))

    def __eq__(self, other):
        return isinstance(other, IsoStep) and self.mapping == other.mapping

    def __hash__(self):
        return hash(("iso", self.mapping))


@dataclass(frozen=True, eq=False)
class AddConstraintStep:
    """One new membership c <= actor (the constraint index may be new)."""

    actor: str
    constraint: str
    space: "Space"
    morphism: SmoothMap

    def key(self):
        return ("addc", self.actor, self.constraint, self.space.signature(),
                self.morphism.signature())

    def __eq__(self, other):
        return isinstance(other, AddConstraintStep) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


@dataclass(frozen=True, eq=False)
class AddActorStep:
    """One new actor whose only constraint is the trivial one."""

    actor: str
    space: "Space"

    def key(self):
        return ("adda", self.actor, self.space.signature())

    def __eq__(self, other):
        return isinstance(other, AddActorStep) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def classify(step):
    if isinstance(step, IsoStep):
        return "iso"
    if isinstance(step, AddConstraintStep):
        return "add-constraint"
    if isinstance(step, AddActorStep):
        return "add-actor"
    raise TypeError(f"not a rigid step: {step!r}")


def apply_step(diagram, step):
    """The diagram obtained by performing one simple step."""
    shape = diagram.shape
    if isinstance(step, IsoStep):
        m = step.as_dict()
        ids = set(shape.actors) | set(shape.constraints)
        if set(m) != ids:
            raise ShapeError("iso step does not cover the diagram's indices")
        if len(set(m.values())) != len(m):
            raise ShapeError("iso step is not injective")
        assignment = {m[a]: [m[c] for c in shape.constraints_of(a)]
                      for a in shape.actors}
        spaces = {m[i]: sp for i, sp in diagram.spaces.items()}
        morphisms = {(m[a], m[c]): f for (a, c), f in diagram.morphisms.items()}
        return ACMDiagram(build_shape(assignment), spaces, morphisms)
    if isinstance(step, AddActorStep):
        if step.actor in shape.actors or step.actor in shape.constraints:
            raise ShapeError(f"id {step.actor!r} already in use")
        assignment = shape.to_assignment()
        assignment[step.actor] = []
        spaces = dict(diagram.spaces)
        spaces[step.actor] = step.space
        return ACMDiagram(build_shape(assignment), spaces, dict(diagram.morphisms))
    if isinstance(step, AddConstraintStep):
        if step.actor not in shape.actors:
            raise ShapeError(f"unknown actor {step.actor!r}")
        if step.constraint in shape.actors:
            raise ShapeError(f"{step.constraint!r} is an actor id")
        assignment = shape.to_assignment()
        if step.constraint in assignment[step.actor]:
            raise ShapeError(f"{step.actor!r} already carries {step.constraint!r}")
        assignment[step.actor] = assignment[step.actor] + [step.constraint]
        spaces = dict(diagram.spaces)
        prior = spaces.get(step.constraint)
        if prior is not None and prior.signature() != step.space.signature():
            raise ShapeError(f"constraint {step.constraint!r} exists with another space")
        spaces[step.constraint] = prior or step.space
        morphisms = dict(diagram.morphisms)
        morphisms[(step.actor, step.constraint)] = step.morphism
        return ACMDiagram(build_shape(assignment), spaces, morphisms)
    raise TypeError(f"not a rigid step: {step!r}")


def same_diagram(d1, d2):
    """Structural equality: shape, space signatures, morphism signatures."""
    if d1.shape != d2.shape:
        return False
    for i in d1.shape.actors + d1.shape.constraints:
        if d1.spaces[i].signature() != d2.spaces[i].signature():
            return False
    for key, f in d1.morphisms.items():
        if f.signature() != d2.morphisms[key].signature():
            return False
    return True


@dataclass(frozen=True)
class RigidInclusion:
    source: ACMDiagram
    target: ACMDiagram
    steps: tuple

    def normalized(self):
        out = []
        for s in self.steps:
            if isinstance(s, IsoStep):
                if out and isinstance(out[-1], IsoStep):
                    s = out.pop().then(s)
                if s.is_identity():
                    continue
            out.append(s)
        return RigidInclusion(self.source, self.target, tuple(out))

    def is_identity(self):
        return not self.normalized().steps

    def replay(self):
        """Apply the steps to source; must land on target."""
        current = self.source
        for s in self.steps:
            current = apply_step(current, s)
        if not same_diagram(current, self.target):
            raise ShapeError("steps do not take source to target")
        return current

    def __eq__(self, other):
        if not isinstance(other, RigidInclusion):
            return NotImplemented
        return self.normalized().steps == other.normalized().steps

    def __hash__(self):
        return hash(self.normalized().steps)

    def __repr__(self):
        kinds = ",".join(classify(s) for s in self.steps) or "empty"
        return f"RigidInclusion({kinds})"


def identity_rigid(diagram):
    return RigidInclusion(diagram, diagram, (IsoStep.identity(diagram),))


def compose_rigid(g, f):
    """g after f (f: A -> B, g: B -> C)."""
    if not same_diagram(f.target, g.source):
        raise TargetMismatch("compose_rigid: f.target differs from g.source")
    return RigidInclusion(f.source, g.target, f.steps + g.steps)


def include_subsystem(sub, n_samples=3, seed=0):
    """Factor a subdiagram inclusion into simple rigid steps.

    The target must decompose external constraints; new actors enter first
    (sorted), then one membership at a time (sorted), re-validating every
    intermediate diagram.
    """
    source, target = sub.source, sub.target
    dec = target.decomposes_external(n_samples, seed)
    if not dec.ok:
        raise NotDecomposing(f"target does not decompose external constraints ({dec})")
    steps = []
    current = source
    if not sub.is_identity_on_names():
        iso = IsoStep(tuple(sorted(sub.actor_map + sub.constraint_map)))
        steps.append(iso)
        current = apply_step(current, iso)
    for a in sorted(set(target.shape.actors) - set(current.shape.actors)):
        step = AddActorStep(a, target.spaces[a])
        steps.append(step)
        current = apply_step(current, step)
        current.validate_or_raise(n_samples, seed)
    have = {(a, c) for a in current.shape.actors
            for c in current.shape.constraints_of(a)}
    want = {(a, c) for a in target.shape.actors
            for c in target.shape.constraints_of(a)}
    for (a, c) in sorted(want - have):
        step = AddConstraintStep(a, c, target.spaces[c], target.morphisms[(a, c)])
        steps.append(step)
        current = apply_step(current, step)
        current.validate_or_raise(n_samples, seed)
    if not same_diagram(current, target):
        raise ShapeError("inclusion is not a subdiagram inclusion")
    return RigidInclusion(source, target, tuple(steps))


# -- systems and representative comparison ---------------------------------------


@dataclass
class ACMSystem:
    """A diagram together with a chosen limit (configuration space)."""

    diagram: ACMDiagram
    limit: object = None  # ConfigurationSpace, when one has been computed

    def __repr__(self):
        tail = f", apex dim {self.limit.apex.dim}" if self.limit else ""
        return f"ACMSystem({self.diagram.shape!r}{tail})"


@dataclass
class IsoWitness:
    max_deviation: float
    n_samples: int
    ok: bool

    def __str__(self):
        verdict = "natural" if self.ok else "NOT natural"
        return f"{verdict} (max deviation {self.max_deviation:.2e})"


def iso_witness(d1, d2, index_map=None, isos=None, n_samples=5, seed=0, tol=1e-8):
    """Sampled naturality check for a claimed isomorphism of representatives.

    index_map: d1 index -> d2 index (default identity); isos: d1 index ->
    SmoothMap D1(i) -> D2(index_map[i]) (default coordinatewise identity).
    Verifies f2 o iso_actor = iso_constraint o f1 on samples, per membership.
    """
    ids = d1.shape.actors + d1.shape.constraints
    index_map = dict(index_map or {i: i for i in ids})
    isos = dict(isos or {})
    for i in ids:
        if i not in isos:
            src, dst = d1.spaces[i], d2.spaces[index_map[i]]
            if src.ambient_dim != dst.ambient_dim:
                raise TargetMismatch(f"index {i!r}: ambient dims differ")
            isos[i] = SmoothMap(f"iso:{i}", src, dst, src.coords)
    worst = 0.0
    for a in d1.shape.actors:
        pts = sample_points(d1.spaces[a], n_samples, seed)
        X = np.array([p.x for p in pts])
        for c in d1.shape.constraints_of(a):
            f1 = d1.morphisms[(a, c)]
            f2 = d2.morphisms[(index_map[a], index_map[c])]
            lhs = np.atleast_2d(f2(np.atleast_2d(isos[a](X))))
            rhs = np.atleast_2d(isos[c](f1(X)))
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return IsoWitness(worst, n_samples, worst <= tol)
