"""The linkage catalog: planar bars, joints, a spatial pair, and a
counterexample with no configuration space.

Every builder returns a validated diagram. Planar actors live in SE(2)
ambient (px, py, c, s); a body's physical pose enters only through the
constraint morphisms, so e.g. a revolute arm of length L is the map
p - L*theta into the joint plane.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..diagram import ACMDiagram, build_shape
from ..geom import SmoothMap, Space, line_space, plane, se2_space, se3_space, slide_space
from ..lie import cylindrical_projection
from ..reduction import weld


def _positive(**lengths):
    for label, value in lengths.items():
        if not value > 0:
            raise ValueError(f"{label} must be positive, got {value!r}")
    return {k: float(v) for k, v in lengths.items()}


def rigid_bar(L=1.0):
    """Two planar bodies a distance L apart with frames locked: one shared
    SE(2)-valued constraint whose legs are both diffeomorphisms."""
    (L,) = _positive(L=L).values()
    a1, a2, c = se2_space("A1"), se2_space("A2"), se2_space("C")
    shape = build_shape({"a1": ("c",), "a2": ("c",)})
    morphisms = {
        ("a1", "c"): SmoothMap("f_a1_c", a1, c,
                               (f"px + {L!r} * c", f"py + {L!r} * s", "c", "s")),
        ("a2", "c"): SmoothMap("f_a2_c", a2, c, ("-px", "-py", "-c", "-s")),
    }
    return ACMDiagram(shape, {"a1": a1, "a2": a2, "c": c}, morphisms)


def revolute(L=1.0):
    """A pin joint: the tip of a length-L arm on a1 coincides with a2's
    origin. The constraint space is the joint's plane position."""
    (L,) = _positive(L=L).values()
    a1, a2, c = se2_space("A1"), se2_space("A2"), plane("C")
    shape = build_shape({"a1": ("c",), "a2": ("c",)})
    morphisms = {
        ("a1", "c"): SmoothMap("f_a1_c", a1, c, (f"px - {L!r} * c", f"py - {L!r} * s")),
        ("a2", "c"): SmoothMap("f_a2_c", a2, c, ("px", "py")),
    }
    return ACMDiagram(shape, {"a1": a1, "a2": a2, "c": c}, morphisms)


_PERP = ("px - (px * c + py * s) * c", "py - (px * c + py * s) * s")


def slider():
    """A prismatic joint: both bodies share the sliding line. Each leg
    forgets the coordinate along the line (keeping the perpendicular
    offset) and reports the body frame, the second one reversed."""
    a1, a2 = se2_space("A1"), se2_space("A2")
    c = slide_space("C")
    shape = build_shape({"a1": ("c",), "a2": ("c",)})
    morphisms = {
        ("a1", "c"): SmoothMap("f_a1_c", a1, c, _PERP + ("c", "s")),
        ("a2", "c"): SmoothMap("f_a2_c", a2, c, _PERP + ("-c", "-s")),
    }
    return ACMDiagram(shape, {"a1": a1, "a2": a2, "c": c}, morphisms)


def linked_revolutes(L1=1.0, L2=1.0):
    """An open chain a1 - a2 - a3 of two pin joints."""
    ls = _positive(L1=L1, L2=L2)
    L1, L2 = ls["L1"], ls["L2"]
    spaces = {"a1": se2_space("A1"), "a2": se2_space("A2"), "a3": se2_space("A3"),
              "c1": plane("C1"), "c2": plane("C2")}
    shape = build_shape({"a1": ("c1",), "a2": ("c1", "c2"), "a3": ("c2",)})
    morphisms = {
        ("a1", "c1"): SmoothMap("f_a1_c1", spaces["a1"], spaces["c1"],
                                (f"px - {L1!r} * c", f"py - {L1!r} * s")),
        ("a2", "c1"): SmoothMap("f_a2_c1", spaces["a2"], spaces["c1"], ("px", "py")),
        ("a2", "c2"): SmoothMap("f_a2_c2", spaces["a2"], spaces["c2"],
                                (f"px - {L2!r} * c", f"py - {L2!r} * s")),
        ("a3", "c2"): SmoothMap("f_a3_c2", spaces["a3"], spaces["c2"], ("px", "py")),
    }
    return ACMDiagram(shape, spaces, morphisms)


def sliding_hinge():
    """Slider welded into a single carriage actor, plus a third body pinned
    to the carriage: rotation about a point that slides along a line.

    Needs three underlying bodies; with two it is impossible (the relative
    motion set is not a subgroup)."""
    welded = weld(slider(), "a1", "a2").after
    carriage = welded.spaces["a1a2"]
    a3, c = se2_space("A3"), plane("C")
    assignment = {"a1a2": tuple(welded.shape.constraints_of("a1a2")) + ("c",),
                  "a3": ("c",)}
    spaces = dict(welded.spaces)
    spaces.update({"a3": a3, "c": c})
    morphisms = dict(welded.morphisms)
    morphisms[("a1a2", "c")] = SmoothMap("f_a1a2_c", carriage, c,
                                         ("a2_px", "a2_py"))
    morphisms[("a3", "c")] = SmoothMap("f_a3_c", a3, c, ("px", "py"))
    return ACMDiagram(build_shape(assignment), spaces, morphisms)


def cylindrical(axis=(0.0, 0.0, 1.0)):
    """The spatial pair: two SE(3) bodies sharing an axis line, each leg the
    body's image of the reference axis as a line in space."""
    u = np.asarray(axis, dtype=np.float64)
    if abs(np.linalg.norm(u) - 1.0) > 1e-9:
        raise ValueError("axis must be a unit vector")
    a1, a2 = se3_space("A1"), se3_space("A2")
    c = line_space("C")
    shape = build_shape({"a1": ("c",), "a2": ("c",)})
    morphisms = {
        ("a1", "c"): cylindrical_projection(u, group_space=a1, target=c,
                                            name="f_a1_c"),
        ("a2", "c"): cylindrical_projection(u, group_space=a2, target=c,
                                            name="f_a2_c"),
    }
    return ACMDiagram(shape, {"a1": a1, "a2": a2, "c": c}, morphisms)


def three_bar(L1=3.0, L2=4.0, L3=5.0):
    """Three bodies pinned in a cycle (a triangle of arm lengths L1, L2,
    L3). Pairwise the joints are fine, but the cycle admits no
    configuration-space construction and the assembled linkage is locked."""
    ls = _positive(L1=L1, L2=L2, L3=L3)
    L1, L2, L3 = ls["L1"], ls["L2"], ls["L3"]
    spaces = {"a1": se2_space("A1"), "a2": se2_space("A2"), "a3": se2_space("A3"),
              "c12": plane("C12"), "c23": plane("C23"), "c13": plane("C13")}
    shape = build_shape({"a1": ("c12", "c13"), "a2": ("c12", "c23"),
                         "a3": ("c13", "c23")})

    def arm(actor, c, L):
        return SmoothMap(f"f_{actor}_{c}", spaces[actor], spaces[c],
                         (f"px - {L!r} * c", f"py - {L!r} * s"))

    def pin(actor, c):
        return SmoothMap(f"f_{actor}_{c}", spaces[actor], spaces[c], ("px", "py"))

    morphisms = {
        ("a1", "c12"): arm("a1", "c12", L1), ("a2", "c12"): pin("a2", "c12"),
        ("a2", "c23"): arm("a2", "c23", L2), ("a3", "c23"): pin("a3", "c23"),
        ("a1", "c13"): pin("a1", "c13"), ("a3", "c13"): arm("a3", "c13", L3),
    }
    return ACMDiagram(shape, spaces, morphisms)


def pendulum(L=1.0):
    """A rigid bar with one end's position anchored by a private constraint;
    driving that constraint to the origin leaves the swing angle free."""
    (L,) = _positive(L=L).values()
    bar = rigid_bar(L)
    z = plane("Z")
    assignment = {"a1": ("c", "z"), "a2": ("c",)}
    spaces = dict(bar.spaces)
    spaces["z"] = z
    morphisms = dict(bar.morphisms)
    morphisms[("a1", "z")] = SmoothMap("f_a1_z", spaces["a1"], z, ("px", "py"))
    return ACMDiagram(build_shape(assignment), spaces, morphisms)


# smooth, flat at 0: nonzero off the axes, identically zero on them
_H2 = ("bump(x3) * bump(y3) + bump(-x3) * bump(y3)"
       " + bump(x3) * bump(-y3) + bump(-x3) * bump(-y3)")


def nonexample():
    """Three plane bodies glued pairwise by translations, one gluing bent by
    a flat bump off the coordinate cross. Pairwise everything checks out,
    yet the joint solution set has no single dimension, so no configuration
    space exists."""
    spaces = {f"a{i}": Space(f"A{i}", (f"x{i}", f"y{i}"), (), dim=2)
              for i in (1, 2, 3)}
    spaces.update({c: plane(c.upper()) for c in ("c4", "c5", "c6")})
    shape = build_shape({"a1": ("c4", "c5"), "a2": ("c4", "c6"),
                         "a3": ("c5", "c6")})

    def ident(actor, c):
        i = actor[1]
        return SmoothMap(f"f_{actor}_{c}", spaces[actor], spaces[c],
                         (f"x{i}", f"y{i}"))

    morphisms = {(a, c): ident(a, c)
                 for a in ("a1", "a2", "a3")
                 for c in shape.constraints_of(a)}
    morphisms[("a3", "c6")] = SmoothMap(
        "f_a3_c6", spaces["a3"], spaces["c6"],
        (f"x3 + {_H2}", f"y3 + {_H2}"))
    return ACMDiagram(shape, spaces, morphisms)


@dataclass
class CatalogEntry:
    name: str
    build: callable
    params: dict  # defaults, by keyword
    limit_dim: int  # F-limit dimension, or -1 when none exists
    group_dim: int  # dim of the ambient motion group (3 planar, 6 spatial)
    summary: str
    daemon: dict = field(default_factory=dict)  # constraint ids -> path exprs


CATALOG = {
    e.name: e for e in (
        CatalogEntry("rigid_bar", rigid_bar, {"L": 1.0}, 3, 3,
                     "two bodies locked a fixed distance apart"),
        CatalogEntry("revolute", revolute, {"L": 1.0}, 4, 3,
                     "pin joint at the tip of a length-L arm"),
        CatalogEntry("slider", slider, {}, 4, 3,
                     "prismatic joint along a shared line"),
        CatalogEntry("linked_revolutes", linked_revolutes,
                     {"L1": 1.0, "L2": 1.0}, 5, 3,
                     "open two-joint chain of three bodies"),
        CatalogEntry("sliding_hinge", sliding_hinge, {}, 5, 3,
                     "pin on a sliding carriage (three bodies, two visible)"),
        CatalogEntry("cylindrical", cylindrical, {}, 8, 6,
                     "two spatial bodies sharing an axis line"),
        CatalogEntry("three_bar", three_bar, {"L1": 3.0, "L2": 4.0, "L3": 5.0},
                     -1, 3, "pinned triangle; locked, no limit construction"),
        CatalogEntry("pendulum", pendulum, {"L": 1.0}, 3, 3,
                     "anchored bar; slice at the anchor swings freely",
                     daemon={"constraints": ("z",), "path": ("0", "0")}),
        CatalogEntry("nonexample", nonexample, {}, -1, 3,
                     "pairwise-consistent gluing with no configuration space"),
    )
}


def build_catalog(name, **overrides):
    """Instantiate a catalog diagram, applying parameter overrides."""
    try:
        entry = CATALOG[name]
    except KeyError:
        raise ValueError(f"unknown catalog entry {name!r} "
                         f"(have {sorted(CATALOG)})") from None
    params = dict(entry.params)
    unknown = set(overrides) - set(params)
    if unknown:
        raise ValueError(f"{name} takes no parameter {sorted(unknown)}")
    params.update(overrides)
    return entry.build(**params)
