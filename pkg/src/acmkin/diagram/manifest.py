"""JSON manifests for diagrams (plus daemon and motion-set sections).

The format is strict: unknown keys are rejected, expressions are parsed on
load, and export is canonical (sorted records, sorted keys) so identical
diagrams serialize to identical bytes.
"""

from __future__ import annotations

import json

from ..errors import ExprParseError, ManifestError, ShapeError, TargetMismatch
from ..expr import parse
from ..geom import SmoothMap, Space
from .acm import ACMDiagram
from .shape import build_shape

SCHEMA = "acmkin/diagram@1"

_TOP_KEYS = {"schema", "spaces", "actors", "constraints", "morphisms",
             "daemons", "motion_sets"}
_SPACE_KEYS = {"name", "coords", "residuals", "dim", "guards", "anchor", "blocks"}
_ACTOR_KEYS = {"id", "space", "constraints"}
_CONSTRAINT_KEYS = {"id", "space"}
_MORPHISM_KEYS = {"actor", "constraint", "components"}
_DAEMON_KEYS = {"name", "constraints", "path", "smoothness"}
_MOTION_KEYS = {"name", "group", "kind", "params"}


def _require_keys(record, allowed, required, what):
    if not isinstance(record, dict):
        raise ManifestError(f"{what} must be an object, got {type(record).__name__}")
    unknown = set(record) - allowed
    if unknown:
        raise ManifestError(f"unknown keys {sorted(unknown)} in {what}")
    missing = required - set(record)
    if missing:
        raise ManifestError(f"missing keys {sorted(missing)} in {what}")


def space_to_record(space):
    rec = {
        "name": space.name,
        "coords": list(space.coords),
        "residuals": [str(r) for r in space.residuals],
        "dim": space.dim,
    }
    if space.guards:
        rec["guards"] = [str(g) for g in space.guards]
    if space.anchor is not None:
        rec["anchor"] = list(space.anchor)
    if space.blocks:
        rec["blocks"] = {k: list(v) for k, v in sorted(space.blocks.items())}
    return rec


def space_from_record(rec):
    _require_keys(rec, _SPACE_KEYS, {"name", "coords", "residuals", "dim"}, "space")
    try:
        return Space(
            rec["name"],
            tuple(rec["coords"]),
            tuple(rec["residuals"]),
            dim=int(rec["dim"]),
            guards=tuple(rec.get("guards", ())),
            anchor=tuple(rec["anchor"]) if rec.get("anchor") is not None else None,
            blocks={k: tuple(v) for k, v in rec.get("blocks", {}).items()},
        )
    except (ExprParseError, TargetMismatch) as exc:
        raise ManifestError(f"bad space {rec.get('name')!r}: {exc}") from exc


def to_manifest(diagram, daemons=None, motion_sets=None):
    """Serialize a diagram into a manifest dict (canonical ordering)."""
    spaces = {}
    for idx in diagram.shape.actors + diagram.shape.constraints:
        sp = diagram.spaces[idx]
        prior = spaces.get(sp.name)
        if prior is not None and prior.signature() != sp.signature():
            raise ManifestError(f"two different spaces named {sp.name!r}")
        spaces[sp.name] = sp
    doc = {
        "schema": SCHEMA,
        "spaces": [space_to_record(spaces[n]) for n in sorted(spaces)],
        "actors": [
            {
                "id": a,
                "space": diagram.spaces[a].name,
                "constraints": list(diagram.shape.constraints_of(a)),
            }
            for a in diagram.shape.actors
        ],
        "constraints": [
            {"id": c, "space": diagram.spaces[c].name}
            for c in diagram.shape.constraints
        ],
        "morphisms": [
            {
                "actor": a,
                "constraint": c,
                "components": [str(e) for e in diagram.morphisms[(a, c)].components],
            }
            for (a, c) in sorted(diagram.morphisms)
        ],
    }
    if daemons:
        doc["daemons"] = [
            {
                "name": d.name,
                "constraints": list(d.constraint_ids),
                "path": [str(e) for e in d.path],
                "smoothness": d.smoothness,
            }
            for d in daemons
        ]
    if motion_sets:
        doc["motion_sets"] = [
            {"name": m.name, "group": m.group, "kind": m.kind,
             "params": {k: list(v) if isinstance(v, (tuple, list)) else v
                        for k, v in sorted(m.params.items())}}
            for m in motion_sets
        ]
    return doc


def from_manifest(doc):
    """Parse a manifest dict back into (diagram, daemon specs, motion specs)."""
    _require_keys(doc, _TOP_KEYS, {"schema", "spaces", "actors", "constraints",
                                   "morphisms"}, "manifest")
    if doc["schema"] != SCHEMA:
        raise ManifestError(f"unsupported schema {doc['schema']!r}")
    spaces = {}
    for rec in doc["spaces"]:
        sp = space_from_record(rec)
        if sp.name in spaces:
            raise ManifestError(f"duplicate space name {sp.name!r}")
        spaces[sp.name] = sp

    def lookup_space(name, what):
        if name not in spaces:
            raise ManifestError(f"{what} references unknown space {name!r}")
        return spaces[name]

    assignment, actor_space = {}, {}
    for rec in doc["actors"]:
        _require_keys(rec, _ACTOR_KEYS, _ACTOR_KEYS, "actor")
        assignment[rec["id"]] = rec["constraints"]
        actor_space[rec["id"]] = lookup_space(rec["space"], f"actor {rec['id']!r}")
    constraint_space = {}
    for rec in doc["constraints"]:
        _require_keys(rec, _CONSTRAINT_KEYS, _CONSTRAINT_KEYS, "constraint")
        if rec["id"] in constraint_space:
            raise ManifestError(f"duplicate constraint {rec['id']!r}")
        constraint_space[rec["id"]] = lookup_space(rec["space"], f"constraint {rec['id']!r}")
    try:
        shape = build_shape(assignment)
    except ShapeError as exc:
        raise ManifestError(str(exc)) from exc
    if set(constraint_space) != set(shape.constraints):
        raise ManifestError("constraint records do not match actor memberships")

    all_spaces = dict(actor_space)
    all_spaces.update(constraint_space)
    morphisms = {}
    for rec in doc["morphisms"]:
        _require_keys(rec, _MORPHISM_KEYS, _MORPHISM_KEYS, "morphism")
        a, c = rec["actor"], rec["constraint"]
        if (a, c) in morphisms:
            raise ManifestError(f"duplicate morphism ({a!r}, {c!r})")
        try:
            morphisms[(a, c)] = SmoothMap(
                f"{a}->{c}", all_spaces[a], all_spaces[c],
                tuple(parse(e) for e in rec["components"]),
            )
        except (ExprParseError, TargetMismatch, KeyError) as exc:
            raise ManifestError(f"bad morphism ({a!r}, {c!r}): {exc}") from exc
    try:
        diagram = ACMDiagram(shape, all_spaces, morphisms)
    except ShapeError as exc:
        raise ManifestError(str(exc)) from exc

    daemon_specs = []
    for rec in doc.get("daemons", ()):
        _require_keys(rec, _DAEMON_KEYS, {"name", "constraints", "path"}, "daemon")
        try:
            path = tuple(parse(e) for e in rec["path"])
        except ExprParseError as exc:
            raise ManifestError(f"bad daemon path: {exc}") from exc
        daemon_specs.append(
            DaemonSpec(rec["name"], tuple(rec["constraints"]), path,
                       int(rec.get("smoothness", 1)))
        )
    motion_specs = []
    for rec in doc.get("motion_sets", ()):
        _require_keys(rec, _MOTION_KEYS, {"name", "group", "kind"}, "motion set")
        params = rec.get("params", {})
        if not isinstance(params, dict):
            raise ManifestError("motion set params must be an object")
        motion_specs.append(
            MotionSpec(rec["name"], rec["group"], rec["kind"],
                       {k: tuple(v) if isinstance(v, list) else v
                        for k, v in params.items()})
        )
    return diagram, daemon_specs, motion_specs


class DaemonSpec:
    def __init__(self, name, constraint_ids, path, smoothness=1):
        self.name = name
        self.constraint_ids = tuple(constraint_ids)
        self.path = tuple(parse(p) for p in path)
        self.smoothness = smoothness


class MotionSpec:
    def __init__(self, name, group, kind, params=None):
        self.name = name
        self.group = group
        self.kind = kind
        self.params = dict(params or {})


def dumps(doc):
    """Canonical JSON text for manifests and CLI --json payloads."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def loads(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ManifestError("manifest must be a JSON object")
    return doc
