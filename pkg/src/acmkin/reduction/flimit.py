"""Reduction chains, configuration spaces (limits), and their diagnostics.

A chain of welds ends in a one-actor diagram; its actor space is the limit
apex and every original index gets a leg out of it. Three strategies are
tried in order of cost: weld anywhere (external decomposition), leaf-peel an
acyclic skeleton, or the product-union route when the caller declares a
two-piece decomposition. When none applies we hand back the raw equalizer
system with a local-dimension histogram instead of an apex.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..diagram import SubdiagramSpec, restrict_diagram, union_over
from ..errors import (
    AcyclicityRequired,
    InvalidOrder,
    NotDecomposing,
    ShapeError,
    SolveDiverged,
    WeldObstruction,
)
from ..expr.parse import BinOp
from ..geom import (
    SmoothMap,
    Space,
    coordinate_restriction,
    fiber_product,
    identity_map,
    local_dimension_estimate,
    preimage_point,
    product,
    sample_points,
    tuple_map,
)
from .weld import weld


@dataclass
class ReductionChain:
    start: "ACMDiagram"
    steps: tuple  # WeldSteps, consecutive

    @property
    def terminal(self):
        return self.steps[-1].after if self.steps else self.start

    @property
    def complete(self):
        return len(self.terminal.shape.actors) == 1

    @property
    def terminal_actor_id(self):
        actors = self.terminal.shape.actors
        if len(actors) != 1:
            raise ShapeError(f"chain is not terminal ({len(actors)} actors left)")
        return actors[0]

    def transcript(self):
        """Replayable step records (pairs welded + resulting dims)."""
        return [s.record() for s in self.steps]

    def order(self):
        return tuple(s.pair for s in self.steps)


def replay_order(diagram, order, n_samples=5, seed=0):
    """Run the welds named by `order` (pairs of evolving actor ids)."""
    current, steps = diagram, []
    for pair in order:
        if len(pair) != 2:
            raise InvalidOrder(f"not a pair: {pair!r}")
        for a in pair:
            if a not in current.shape.actors:
                raise InvalidOrder(f"{a!r} is not an actor at step {len(steps)}")
        step = weld(current, pair[0], pair[1], n_samples=n_samples, seed=seed)
        steps.append(step)
        current = step.after
    return ReductionChain(diagram, tuple(steps))


def reduce_acyclic(diagram, n_samples=5, seed=0):
    """Leaf-peeling reduction; welds isolated components over star at the end."""
    if not diagram.is_acyclic():
        raise AcyclicityRequired("constraint skeleton has a cycle")
    current, steps = diagram, []
    while len(current.shape.actors) > 1:
        sk = current.skeleton()
        if sk.edges:
            leaf = min(v for v in sk.vertices if sk.degree(v) == 1)
            pair = tuple(sorted((leaf, sk.neighbors(leaf)[0])))
        else:
            pair = current.shape.actors[:2]
        step = weld(current, pair[0], pair[1], n_samples=n_samples, seed=seed)
        steps.append(step)
        current = step.after
    return ReductionChain(diagram, tuple(steps))


def _weld_lexicographic(diagram, n_samples, seed):
    current, steps = diagram, []
    while len(current.shape.actors) > 1:
        i, j = current.shape.actors[:2]
        step = weld(current, i, j, n_samples=n_samples, seed=seed)
        steps.append(step)
        current = step.after
    return ReductionChain(diagram, tuple(steps))


# -- configuration spaces -----------------------------------------------------


class PreimageLeg:
    """Actor leg realized by numerically inverting the constraint-tuple map.

    Used on the product-union route, where the actor's tuple map is an
    isomorphism but has no closed-form inverse; the preimage is unique, so
    any converged solve returns the leg value.
    """

    def __init__(self, name, source, target, picks, iso, seed=0):
        self.name = name
        self.source = source
        self.target = target
        self.picks = picks  # SmoothMap apex -> product of the actor's constraints
        self.iso = iso  # SmoothMap actor -> same product
        self.seed = seed

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        one = x.ndim == 1
        rows = np.atleast_2d(x)
        out = np.empty((rows.shape[0], self.target.ambient_dim))
        for k, row in enumerate(rows):
            y = self.picks(row)
            out[k] = preimage_point(self.iso, y, np.random.default_rng(self.seed)).x
        return out[0] if one else out

    def __repr__(self):
        return f"PreimageLeg({self.name!r}: {self.source.name} -> {self.target.name})"


@dataclass
class ConfigurationSpace:
    """Limit apex plus one leg per original actor/constraint index."""

    apex: Space
    legs: dict  # index id -> map apex -> space of the index
    provenance: ReductionChain
    strategy: str
    diagram: "ACMDiagram"
    ok = True

    def interaction_leg(self, i, j):
        k_space = self.diagram.interaction(i, j).apex
        return coordinate_restriction(self.apex, k_space.coords, k_space,
                                      name=f"leg:K({i},{j})")

    def cone_check(self, n_samples=100, seed=0, tol=1e-9):
        """Max deviation of leg_c vs constraint-map-after-actor-leg, all owners."""
        worst = 0.0
        pts = sample_points(self.apex, n_samples, seed)
        X = np.array([p.x for p in pts])
        for c in self.diagram.shape.constraints:
            via_c = np.atleast_2d(self.legs[c](X))
            for a in self.diagram.shape.owners(c):
                ax = np.atleast_2d(self.legs[a](X))
                via_a = np.atleast_2d(self.diagram.morphisms[(a, c)](ax))
                worst = max(worst, float(np.max(np.abs(via_a - via_c))))
        return worst, worst <= tol

    def summary(self):
        return (f"apex dim {self.apex.dim} (ambient {self.apex.ambient_dim}) "
                f"via {self.strategy}, {len(self.provenance.steps)} welds")


def configuration_space(diagram, chain, strategy):
    """Package a complete chain as apex + legs (restrictions/composites)."""
    apex = chain.terminal.spaces[chain.terminal_actor_id]
    legs = {}
    for a in diagram.shape.actors:
        sp = diagram.spaces[a]
        if not chain.steps:
            legs[a] = identity_map(sp)
        else:
            names = sp.coords if sp.blocks else tuple(f"{a}_{c}" for c in sp.coords)
            legs[a] = coordinate_restriction(apex, names, sp, name=f"leg:{a}")
    for c in diagram.shape.constraints:
        rep = diagram.shape.owners(c)[0]
        legs[c] = diagram.morphisms[(rep, c)].compose(legs[rep], name=f"leg:{c}")
    return ConfigurationSpace(apex, legs, chain, strategy, diagram)


# -- raw equalizer diagnostics --------------------------------------------------


def raw_equalizer(diagram, name=None):
    """The equalizer system cut out in the product of all actor ambients.

    One glue row per extra owner per constraint coordinate, comparing each
    owner's map against the first owner's. Returns (space, expected_dim);
    the space's declared dim is the expected value, which the zero set need
    not attain (that is what the diagnostics are for).
    """
    entries = []
    for a in diagram.shape.actors:
        sp = diagram.spaces[a]
        entries.append((sp, None if sp.blocks else f"{a}_", a))
    prod_space, projs = product(entries, name=name or "equalizer")
    proj_of = dict(zip(diagram.shape.actors, projs))
    glue = ()
    expected = sum(diagram.spaces[a].dim for a in diagram.shape.actors)
    for c in diagram.shape.constraints:
        owners = diagram.shape.owners(c)
        rep = diagram.morphisms[(owners[0], c)].compose(proj_of[owners[0]])
        for o in owners[1:]:
            other = diagram.morphisms[(o, c)].compose(proj_of[o])
            glue += tuple(
                BinOp("-", x, y) for x, y in zip(other.components, rep.components)
            )
            expected -= diagram.spaces[c].dim
    space = Space(
        prod_space.name,
        prod_space.coords,
        tuple(prod_space.residuals) + glue,
        dim=expected,
        guards=prod_space.guards,
        anchor=prod_space.anchor,
        blocks=dict(prod_space.blocks),
    )
    return space, expected


@dataclass
class ObstructionReport:
    """Why no limit strategy applied, plus raw-equalizer evidence."""

    reasons: dict  # strategy name -> reason it did not produce a limit
    equalizer: Space
    expected_dim: int
    local_dims: object  # LocalDimEstimate, or None if sampling failed
    ok = False

    def summary(self):
        why = "; ".join(f"{k}: {v}" for k, v in self.reasons.items())
        if self.local_dims is None or not self.local_dims.values:
            hist = "no converged equalizer samples"
        else:
            hist = f"equalizer local dims {self.local_dims.histogram}"
        return f"no limit strategy applied ({why}); {hist}"

    def __str__(self):
        return self.summary()


def f_limit(diagram, strategy="auto", declared_union=None, n_samples=5, seed=0,
            diag_samples=50):
    """Configuration space of a diagram, or an ObstructionReport.

    Strategies, cheapest first when strategy="auto": (a) every actor
    submerges onto its external constraints -> weld in lexicographic order;
    (b) acyclic skeleton -> leaf-peeling; (c) a declared two-piece
    decomposition of a diagram that decomposes into constraints -> fiber
    product of constraint products. Pass strategy="external" | "acyclic" |
    "union" to force one route.
    """
    if strategy not in ("auto", "external", "acyclic", "union"):
        raise ValueError(f"unknown strategy {strategy!r}")
    reasons = {}
    if strategy in ("auto", "external"):
        dec = diagram.decomposes_external(n_samples, seed)
        if dec.ok:
            try:
                chain = _weld_lexicographic(diagram, n_samples, seed)
                return configuration_space(diagram, chain, "decomposes-external")
            except WeldObstruction as exc:
                reasons["decomposes-external"] = str(exc)
        else:
            bad = sorted(a for a, v in dec.verdicts.items() if not v.ok)
            reasons["decomposes-external"] = f"actors {bad} fail the external check"

    if strategy in ("auto", "acyclic"):
        if diagram.is_acyclic():
            try:
                chain = reduce_acyclic(diagram, n_samples, seed)
                return configuration_space(diagram, chain, "acyclic")
            except WeldObstruction as exc:
                reasons["acyclic"] = str(exc)
        else:
            reasons["acyclic"] = "constraint skeleton has a cycle"

    if strategy in ("auto", "union"):
        if declared_union is not None:
            try:
                return _union_route(diagram, declared_union, n_samples, seed)
            except (NotDecomposing, ShapeError, SolveDiverged) as exc:
                reasons["declared-union"] = str(exc)
        else:
            reasons["declared-union"] = "no decomposition declared"

    eq_space, expected = raw_equalizer(diagram)
    try:
        est = local_dimension_estimate(eq_space, n_samples=diag_samples, seed=seed)
    except SolveDiverged:
        est = None
    return ObstructionReport(reasons, eq_space, expected, est)


def _union_route(diagram, declared, n_samples, seed):
    """Limit via X1 x_{X12} X2 with X_i the product of piece i's constraints.

    Valid when the diagram decomposes into constraints and the declared
    pieces cover it; every actor leg is then a numeric inverse of the
    actor's constraint-tuple isomorphism.
    """
    spec1, spec2 = declared
    if not isinstance(spec1, SubdiagramSpec):
        spec1 = SubdiagramSpec(tuple(spec1))
    if not isinstance(spec2, SubdiagramSpec):
        spec2 = SubdiagramSpec(tuple(spec2))
    dec = diagram.decomposes_into_constraints(n_samples, seed)
    if not dec.ok:
        raise NotDecomposing(f"diagram does not decompose into constraints ({dec})")
    sub1, _ = restrict_diagram(diagram, spec1.actors, spec1.selection_dict())
    sub2, _ = restrict_diagram(diagram, spec2.actors, spec2.selection_dict())
    union_over(diagram, spec1, spec2)  # covering check
    c1 = tuple(sub1.shape.constraints)
    c2 = tuple(sub2.shape.constraints)
    shared = tuple(sorted(set(c1) & set(c2)))

    x1, _ = diagram.shared_product(c1, name="X1")
    x2, _ = diagram.shared_product(c2, name="X2")
    x12, _ = diagram.shared_product(shared, name="X12")
    x1 = _without_blocks(x1)
    x2 = _without_blocks(x2)
    shared_coords = tuple(f"{c}_{k}" for c in shared for k in diagram.spaces[c].coords)
    p1 = SmoothMap("X1->X12", x1, x12, shared_coords)
    p2 = SmoothMap("X2->X12", x2, x12, shared_coords)
    rmap = {n: (f"dup_{n}" if n in set(shared_coords) else n) for n in x2.coords}
    fp = fiber_product(p1, p2, name="union-apex", left_rename=None,
                       right_rename=rmap, left_block="piece1", right_block="piece2")
    apex = fp.space

    legs = {}
    for c in diagram.shape.constraints:
        names = tuple(f"{c}_{k}" for k in diagram.spaces[c].coords)
        legs[c] = coordinate_restriction(apex, names, diagram.spaces[c],
                                         name=f"leg:{c}")
    for a in diagram.shape.actors:
        cs = diagram.shape.constraints_of(a)
        prod_space, _ = diagram.shared_product(cs)
        picks = tuple_map([legs[c] for c in cs], prod_space, name=f"picks:{a}")
        iso = diagram.product_morphism(a, cs, prod_space)
        legs[a] = PreimageLeg(f"leg:{a}", apex, diagram.spaces[a], picks, iso,
                              seed=seed)
    chain = ReductionChain(diagram, ())
    cs_obj = ConfigurationSpace(apex, legs, chain, "declared-union", diagram)
    return cs_obj


def _without_blocks(space):
    return Space(space.name, space.coords, space.residuals, dim=space.dim,
                 guards=space.guards, anchor=space.anchor, blocks={})


# -- weld-order invariance --------------------------------------------------------


@dataclass
class OrderInvarianceReport:
    dim_first: int
    dim_second: int
    max_leg_deviation: float
    max_cross_residual: float
    n_samples: int
    ok: bool

    def __str__(self):
        verdict = "agree" if self.ok else "DISAGREE"
        return (f"orders {verdict}: dims {self.dim_first}/{self.dim_second}, "
                f"leg dev {self.max_leg_deviation:.2e}, "
                f"cross residual {self.max_cross_residual:.2e}")


def weld_order_invariance_check(diagram, order1, order2, n_samples=100,
                                seed=0, tol=1e-9, cross_tol=1e-7,
                                check_samples=5):
    """Compare two complete weld orders: apex dims, coordinate matching,
    cross-feasibility of samples, and agreement of every original-index leg."""
    chain1 = replay_order(diagram, order1, n_samples=check_samples, seed=seed)
    chain2 = replay_order(diagram, order2, n_samples=check_samples, seed=seed)
    for name, ch in (("first", chain1), ("second", chain2)):
        if not ch.complete:
            raise InvalidOrder(f"{name} order does not reduce to one actor")
    cs1 = configuration_space(diagram, chain1, "order1")
    cs2 = configuration_space(diagram, chain2, "order2")
    a1, a2 = cs1.apex, cs2.apex
    if set(a1.coords) != set(a2.coords):
        raise InvalidOrder("terminal apices name different coordinates")
    perm = [a1.coords.index(c) for c in a2.coords]

    pts = sample_points(a1, n_samples, seed)
    X1 = np.array([p.x for p in pts])
    X2 = X1[:, perm]
    cross = max(float(a2.residual_norm(x)) for x in X2)
    worst = 0.0
    for idx in diagram.shape.actors + diagram.shape.constraints:
        v1 = np.atleast_2d(cs1.legs[idx](X1))
        v2 = np.atleast_2d(cs2.legs[idx](X2))
        worst = max(worst, float(np.max(np.abs(v1 - v2))))
    ok = (a1.dim == a2.dim) and worst <= tol and cross <= cross_tol
    return OrderInvarianceReport(a1.dim, a2.dim, worst, cross, n_samples, ok)


def enumerate_weld_orders(diagram, n_samples=3, seed=0):
    """All complete weld orders (obstructed branches pruned). Exponential;
    intended for diagrams with at most four or five actors."""
    orders = []

    def walk(current, prefix):
        actors = current.shape.actors
        if len(actors) == 1:
            orders.append(tuple(prefix))
            return
        for p in range(len(actors)):
            for q in range(p + 1, len(actors)):
                pair = (actors[p], actors[q])
                try:
                    step = weld(current, *pair, n_samples=n_samples, seed=seed)
                except WeldObstruction:
                    continue
                walk(step.after, prefix + [pair])

    walk(diagram, [])
    return orders
