"""Actor/constraint index shapes and their external-constraint calculus.

A shape is the finite poset underlying a diagram: actor indices, the
nontrivial constraint indices each actor carries (every actor implicitly
also carries the distinguished index `star`), and one interaction index per
unordered pair of distinct actors. The order is generated by c <= i for
c in C_i and i <= {i,j}.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ShapeError

STAR = "star"


@dataclass(frozen=True)
class ActorIndexCategory:
    actors: tuple
    membership: tuple  # tuple of (actor, frozenset of constraint ids), aligned with actors

    # -- construction ---------------------------------------------------------

    @staticmethod
    def build(assignment):
        """Build from {actor_id: iterable of constraint ids}; validates ids."""
        if not assignment:
            raise ShapeError("a shape needs at least one actor")
        actors = tuple(sorted(assignment))
        seen_constraints = set()
        membership = []
        for a in actors:
            if not isinstance(a, str) or not a:
                raise ShapeError(f"bad actor id {a!r}")
            if a == STAR:
                raise ShapeError(f"{STAR!r} is reserved")
            cs = frozenset(assignment[a])
            for c in cs:
                if not isinstance(c, str) or not c:
                    raise ShapeError(f"bad constraint id {c!r}")
                if c == STAR:
                    raise ShapeError(f"{STAR!r} is reserved; it is implicit on every actor")
            seen_constraints |= cs
            membership.append((a, cs))
        overlap = seen_constraints & set(actors)
        if overlap:
            raise ShapeError(f"ids used as both actor and constraint: {sorted(overlap)}")
        return ActorIndexCategory(actors, tuple(membership))

    def _members(self):
        return dict(self.membership)

    # -- basic accessors ------------------------------------------------------

    @property
    def constraints(self):
        out = set()
        for _, cs in self.membership:
            out |= cs
        return tuple(sorted(out))

    def constraints_of(self, actor, with_star=False):
        cs = self._members()[actor]
        return tuple(sorted(cs)) + ((STAR,) if with_star else ())

    def owners(self, constraint):
        return tuple(a for a, cs in self.membership if constraint in cs)

    def interactions(self):
        n = len(self.actors)
        return tuple(
            (self.actors[p], self.actors[q])
            for p in range(n)
            for q in range(p + 1, n)
        )

    def shared(self, i, j, with_star=False):
        m = self._members()
        if i not in m or j not in m:
            raise ShapeError(f"unknown actor in pair ({i!r}, {j!r})")
        if i == j:
            raise ShapeError("an interaction needs two distinct actors")
        out = tuple(sorted(m[i] & m[j]))
        return out + ((STAR,) if with_star else ())

    def objects(self):
        """All poset objects: star, constraints, actors, interactions."""
        return (STAR,) + self.constraints + self.actors + self.interactions()

    def leq(self, x, y):
        """Generated order: star <= actors/interactions via membership."""
        if x == y:
            return True
        m = self._members()
        if isinstance(y, tuple):  # interaction
            i, j = y
            if x == STAR:
                return True
            if x in (i, j):
                return True
            return x in m.get(i, frozenset()) | m.get(j, frozenset())
        if y in m:  # actor
            return x == STAR or x in m[y]
        return False

    # -- external constraint sets ---------------------------------------------

    def ext_set(self, actor, nontrivial=False):
        """C_i intersected with the union of every other actor's constraints.

        With nontrivial=False the distinguished star index participates (it
        lies in every actor's constraint set, so it appears whenever the
        shape has a second actor); nontrivial=True drops it.
        """
        m = self._members()
        if actor not in m:
            raise ShapeError(f"unknown actor {actor!r}")
        others = set()
        star_elsewhere = False
        for a, cs in self.membership:
            if a != actor:
                others |= cs
                star_elsewhere = True
        ext = m[actor] & others
        out = tuple(sorted(ext))
        if not nontrivial and star_elsewhere:
            out += (STAR,)
        return out

    def ext_set_sub(self, actor_subset, nontrivial=False):
        """Ext of a full subshape on `actor_subset` inside this shape."""
        inside = set(actor_subset)
        unknown = inside - set(self.actors)
        if unknown:
            raise ShapeError(f"unknown actors {sorted(unknown)}")
        m = self._members()
        c_in, c_out = set(), set()
        outside_nonempty = False
        for a in self.actors:
            if a in inside:
                c_in |= m[a]
            else:
                c_out |= m[a]
                outside_nonempty = True
        out = tuple(sorted(c_in & c_out))
        if not nontrivial and inside and outside_nonempty:
            out += (STAR,)
        return out

    # -- welding at the shape level --------------------------------------------

    def welded_id(self, i, j):
        return "".join(sorted((i, j)))

    def weld(self, i, j):
        """Replace actors i, j by a single actor carrying C_i | C_j."""
        m = self._members()
        if i not in m or j not in m or i == j:
            raise ShapeError(f"cannot weld ({i!r}, {j!r})")
        new_id = self.welded_id(i, j)
        taken = set(self.actors) | set(self.constraints)
        if new_id in taken - {i, j}:
            raise ShapeError(f"welded id {new_id!r} collides with an existing id")
        assignment = {a: set(cs) for a, cs in self.membership if a not in (i, j)}
        assignment[new_id] = set(m[i]) | set(m[j])
        return ActorIndexCategory.build(assignment), new_id

    def restrict(self, actor_subset, constraint_selection=None):
        """Subshape on some actors; optionally trim their constraint sets."""
        inside = sorted(set(actor_subset))
        m = self._members()
        unknown = set(inside) - set(self.actors)
        if unknown:
            raise ShapeError(f"unknown actors {sorted(unknown)}")
        assignment = {}
        for a in inside:
            cs = set(m[a])
            if constraint_selection is not None:
                cs &= set(constraint_selection.get(a, cs))
            assignment[a] = cs
        return ActorIndexCategory.build(assignment)

    def to_assignment(self):
        return {a: sorted(cs) for a, cs in self.membership}

    def __repr__(self):
        parts = ", ".join(f"{a}:{sorted(cs)}" for a, cs in self.membership)
        return f"Shape({parts})"


def build_shape(assignment):
    return ActorIndexCategory.build(assignment)


# -- constraint skeleton -------------------------------------------------------


class _DSU:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:  # path compression
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


@dataclass(frozen=True)
class Skeleton:
    """Undirected graph on actors; edge iff a nontrivial constraint is shared."""

    vertices: tuple
    edges: tuple  # sorted pairs

    @staticmethod
    def of(shape):
        edges = tuple(
            (i, j) for (i, j) in shape.interactions() if shape.shared(i, j)
        )
        return Skeleton(shape.actors, edges)

    def degree(self, v):
        return sum(1 for e in self.edges if v in e)

    def neighbors(self, v):
        out = [w for (a, b) in self.edges for w in ((b,) if a == v else (a,) if b == v else ())]
        return tuple(sorted(out))

    def is_acyclic(self):
        dsu = _DSU(self.vertices)
        for a, b in self.edges:
            if not dsu.union(a, b):
                return False
        return True

    def components(self):
        dsu = _DSU(self.vertices)
        for a, b in self.edges:
            dsu.union(a, b)
        groups = {}
        for v in self.vertices:
            groups.setdefault(dsu.find(v), []).append(v)
        return tuple(tuple(sorted(g)) for g in sorted(groups.values()))

    def leaves(self):
        return tuple(v for v in self.vertices if self.degree(v) == 1)
