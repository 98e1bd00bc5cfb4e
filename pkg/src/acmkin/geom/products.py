"""Products and fiber products of embedded spaces.

Ambients concatenate (coordinates renamed to stay unique); a fiber product
adds glue rows equating the two map images componentwise over the target's
ambient coordinates. Its dimension is declared as dim A + dim B - dim C —
the glue rows are redundant in ambient form whenever the target is itself
embedded, so the row count intentionally overshoots the codimension.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import TargetMismatch
from ..expr import rename
from ..expr.parse import BinOp
from .smoothmap import SmoothMap, coordinate_restriction
from .space import Space, point_space


def _rename_plan(space, spec):
    """spec: None (keep), prefix string, or explicit old->new dict."""
    if spec is None:
        mapping = {c: c for c in space.coords}
    elif isinstance(spec, str):
        mapping = {c: spec + c for c in space.coords}
    else:
        mapping = dict(spec)
        missing = [c for c in space.coords if c not in mapping]
        if missing:
            raise TargetMismatch(f"rename plan misses {missing} on {space.name!r}")
    return mapping


def _renamed_parts(space, spec, block_key):
    mapping = _rename_plan(space, spec)
    coords = tuple(mapping[c] for c in space.coords)
    residuals = tuple(rename(r, mapping) for r in space.residuals)
    guards = tuple(rename(g, mapping) for g in space.guards)
    if space.blocks:
        blocks = {k: tuple(mapping[c] for c in names) for k, names in space.blocks.items()}
    else:
        blocks = {block_key or space.name: coords}
    return mapping, coords, residuals, guards, blocks


def _merge_blocks(a, b):
    overlap = set(a) & set(b)
    if overlap:
        raise TargetMismatch(f"block keys collide: {sorted(overlap)}")
    out = dict(a)
    out.update(b)
    return out


def product(entries, name=None):
    """Product of (space, rename_spec, block_key) entries; empty -> point.

    Returns (space, [projection maps onto each factor]).
    """
    if not entries:
        return point_space(name or "point"), []
    coords, residuals, guards, blocks = (), (), (), {}
    anchors, have_anchor = [], False
    factor_names = []
    for space, spec, key in entries:
        _, c, r, g, bl = _renamed_parts(space, spec, key)
        coords += c
        residuals += r
        guards += g
        blocks = _merge_blocks(blocks, bl)
        anchors.append(space.init_center())
        have_anchor = have_anchor or space.anchor is not None
        factor_names.append(space.name)
    anchor = tuple(np.concatenate(anchors)) if have_anchor else None
    space = Space(
        name or "*".join(factor_names),
        coords,
        residuals,
        dim=sum(s.dim for s, _, _ in entries),
        guards=guards,
        anchor=anchor,
        blocks=blocks,
    )
    projs = []
    at = 0
    for factor, _, _ in entries:
        names = coords[at: at + factor.ambient_dim]
        projs.append(coordinate_restriction(space, names, factor))
        at += factor.ambient_dim
    return space, projs


@dataclass
class FiberProduct:
    space: Space
    proj_left: SmoothMap
    proj_right: SmoothMap
    left_map: SmoothMap
    right_map: SmoothMap


def fiber_product(f, g, name=None, left_rename=None, right_rename=None,
                  left_block=None, right_block=None):
    """Fiber product of f: A -> C and g: B -> C (pullback of the cospan)."""
    if f.target.signature() != g.target.signature():
        raise TargetMismatch(
            f"cospan targets differ: {f.target.name!r} vs {g.target.name!r}"
        )
    A, B = f.source, g.source
    lmap, lcoords, lres, lguards, lblocks = _renamed_parts(A, left_rename, left_block)
    rmap, rcoords, rres, rguards, rblocks = _renamed_parts(B, right_rename, right_block)
    glue = tuple(
        BinOp("-", rename(fc, lmap), rename(gc, rmap))
        for fc, gc in zip(f.components, g.components)
    )
    anchors = None
    if A.anchor is not None or B.anchor is not None:
        anchors = tuple(np.concatenate([A.init_center(), B.init_center()]))
    space = Space(
        name or f"{A.name}x_{f.target.name}_{B.name}",
        lcoords + rcoords,
        lres + rres + glue,
        dim=A.dim + B.dim - f.target.dim,
        guards=lguards + rguards,
        anchor=anchors,
        blocks=_merge_blocks(lblocks, rblocks),
    )
    proj_l = coordinate_restriction(space, lcoords, A, name=f"{space.name}->{A.name}")
    proj_r = coordinate_restriction(space, rcoords, B, name=f"{space.name}->{B.name}")
    return FiberProduct(space, proj_l, proj_r, f, g)
