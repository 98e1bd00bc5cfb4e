"""Command-line front end: manifest analysis, catalog reports, sample export.

All randomness flows from one seed (flag, else ACMKIN_SEED, else 0), and the
seed is always part of the report, so identical inputs give byte-identical
--json output. Exit codes: 0 success, 2 validation failure, 3 obstruction,
4 parse error.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

import numpy as np

from .diagram import DaemonSpec, dumps, from_manifest, loads, to_manifest
from .errors import (
    AcmkinError,
    EmptySlice,
    ManifestError,
    SolveDiverged,
    SubmersionViolated,
    WeldObstruction,
)
from .geom import sample_points
from .lie import MotionSet, group_model, realizable_as_pair
from .linkage import CATALOG, Daemon, daemon_slice, mobility
from .reduction import f_limit, weld

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_OBSTRUCTED = 3
EXIT_PARSE = 4


def _seed(args):
    if getattr(args, "seed", None) is not None:
        return args.seed
    return int(os.environ.get("ACMKIN_SEED", "0"))


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ManifestError(f"cannot read {path!r}: {exc}") from exc
    diagram, daemons, motions = from_manifest(loads(text))
    return diagram, daemons, motions


def _print(report, as_json):
    if as_json:
        sys.stdout.write(dumps(report))
        return
    for key, value in report.items():
        if isinstance(value, list) and value and isinstance(value[0], dict):
            print(f"{key}:")
            for item in value:
                print("  " + ", ".join(f"{k}={v}" for k, v in item.items()))
        else:
            print(f"{key}: {value}")


def _summary(diagram):
    sk = diagram.skeleton()
    return {
        "actors": list(diagram.shape.actors),
        "constraints": list(diagram.shape.constraints),
        "skeleton_edges": [list(e) for e in sk.edges],
        "acyclic": sk.is_acyclic(),
    }


def _limit_payload(lim, seed):
    """Shared report body for anything that computes a configuration space."""
    if lim.ok:
        dev, dev_ok = lim.cone_check(n_samples=100, seed=seed)
        return {
            "ok": True,
            "strategy": lim.strategy,
            "apex_dim": lim.apex.dim,
            "apex_ambient_dim": lim.apex.ambient_dim,
            "welds": [step.record() for step in lim.provenance.steps],
            "cone_deviation": float(dev),
            "cone_ok": bool(dev_ok),
        }, EXIT_OK
    est = lim.local_dims
    return {
        "ok": False,
        "reasons": {k: str(v) for k, v in sorted(lim.reasons.items())},
        "declared_dim": lim.expected_dim,
        "local_dim_histogram": (
            {str(k): v for k, v in sorted(est.histogram.items())}
            if est is not None else None
        ),
    }, EXIT_OBSTRUCTED


def cmd_validate(args):
    diagram, _, _ = _load(args.manifest)
    rep = diagram.validate(n_samples=args.n_samples, seed=_seed(args))
    report = {"command": "validate", "seed": _seed(args), **_summary(diagram),
              "ok": rep.ok,
              "axioms": [{"axiom": c.axiom, "subject": c.subject, "ok": c.ok,
                          **({"detail": c.detail} if c.detail else {})}
                         for c in rep.checks]}
    return report, (EXIT_OK if rep.ok else EXIT_INVALID)


def cmd_skeleton(args):
    diagram, _, _ = _load(args.manifest)
    sk = diagram.skeleton()
    report = {"command": "skeleton", "seed": _seed(args), **_summary(diagram),
              "components": [sorted(c) for c in sk.components()],
              "leaves": list(sk.leaves())}
    return report, EXIT_OK


def cmd_limit(args):
    diagram, _, _ = _load(args.manifest)
    seed = _seed(args)
    lim = f_limit(diagram, strategy=args.strategy, seed=seed)
    payload, code = _limit_payload(lim, seed)
    return {"command": "limit", "seed": seed, **payload}, code


def cmd_mobility(args):
    diagram, _, _ = _load(args.manifest)
    seed = _seed(args)
    lim = f_limit(diagram, seed=seed)
    try:
        rep = mobility(diagram, lim, group_dim=args.group_dim)
    except ValueError as exc:
        return {"command": "mobility", "seed": seed, "ok": False,
                "detail": str(exc)}, EXIT_OBSTRUCTED
    report = {"command": "mobility", "seed": seed, "ok": True,
              "total_dim": rep.total_dim, "group_dim": rep.group_dim,
              "internal_dof": rep.internal_dof, "locked": rep.locked,
              "overconstrained": rep.overconstrained}
    return report, EXIT_OK


def cmd_weld(args):
    diagram, _, _ = _load(args.manifest)
    seed = _seed(args)
    try:
        step = weld(diagram, args.i, args.j, seed=seed)
    except WeldObstruction as exc:
        return {"command": "weld", "seed": seed, "ok": False,
                "pair": [args.i, args.j], "witness": exc.witness,
                "verdict": str(exc.verdict)}, EXIT_OBSTRUCTED
    return {"command": "weld", "seed": seed, "ok": True,
            **step.record()}, EXIT_OK


def cmd_daemon_slice(args):
    diagram, daemons, _ = _load(args.manifest)
    seed = _seed(args)
    if not daemons:
        raise ManifestError("manifest declares no daemons")
    by_name = {d.name: d for d in daemons}
    if args.daemon is None and len(daemons) == 1:
        spec = daemons[0]
    elif args.daemon in by_name:
        spec = by_name[args.daemon]
    else:
        raise ManifestError(f"pick a daemon with --daemon (have {sorted(by_name)})")
    lim = f_limit(diagram, seed=seed)
    if not lim.ok:
        return {"command": "daemon-slice", "seed": seed, "ok": False,
                "detail": "no configuration space to slice"}, EXIT_OBSTRUCTED
    dm = Daemon(lim, spec.constraint_ids, tuple(str(e) for e in spec.path),
                smoothness=spec.smoothness)
    try:
        sl = daemon_slice(dm, args.t, seed=seed)
    except (EmptySlice, SubmersionViolated) as exc:
        return {"command": "daemon-slice", "seed": seed, "ok": False,
                "daemon": spec.name, "t": args.t,
                "detail": str(exc)}, EXIT_OBSTRUCTED
    return {"command": "daemon-slice", "seed": seed, "ok": True,
            "daemon": spec.name, "t": sl.t, "slice_dim": sl.declared_dim,
            "coords": list(sl.space.coords),
            "witness": [float(v) for v in sl.sample]}, EXIT_OK


def cmd_pair_check(args):
    _, _, motions = _load(args.manifest)
    seed = _seed(args)
    checks = []
    for spec in motions:
        mset = MotionSet(spec.group, spec.kind, dict(spec.params), name=spec.name)
        verdict = realizable_as_pair(group_model(spec.group), mset,
                                     trials=args.trials, seed=seed)
        entry = {"name": spec.name, "group": spec.group, "kind": spec.kind,
                 "realizable": verdict.yes, "reason": verdict.reason}
        if verdict.normal_form is not None:
            entry["H_dim"] = verdict.normal_form.H_dim
            entry["pair_dim"] = verdict.normal_form.pair_dim
        if verdict.witness is not None:
            entry["witness_distance"] = float(verdict.witness[3])
        checks.append(entry)
    return {"command": "pair-check", "seed": seed, "trials": args.trials,
            "checks": checks}, EXIT_OK


def cmd_sample(args):
    diagram, _, _ = _load(args.manifest)
    seed = _seed(args)
    lim = f_limit(diagram, seed=seed)
    if not lim.ok:
        payload, code = _limit_payload(lim, seed)
        return {"command": "sample", "seed": seed, **payload}, code
    try:
        pts = sample_points(lim.apex, args.n, np.random.default_rng(seed))
    except SolveDiverged as exc:
        return {"command": "sample", "seed": seed, "ok": False,
                "detail": str(exc)}, EXIT_OBSTRUCTED
    rows = [[float(v) for v in p.x] for p in pts]
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(lim.apex.coords)
            writer.writerows(rows)
    report = {"command": "sample", "seed": seed, "ok": True, "n": args.n,
              "coords": list(lim.apex.coords), "points": rows}
    if args.csv:
        report["csv"] = args.csv
    return report, EXIT_OK


def cmd_catalog(args):
    try:
        entry = CATALOG[args.name]
    except KeyError:
        raise ManifestError(f"unknown catalog entry {args.name!r} "
                            f"(have {sorted(CATALOG)})") from None
    params = dict(entry.params)
    if args.L:
        names = list(params)
        if len(args.L) != len(names):
            raise ManifestError(f"{args.name} takes {len(names)} length "
                                f"parameter(s) {names}, got {len(args.L)}")
        params.update(zip(names, args.L))
    try:
        diagram = entry.build(**params)
    except ValueError as exc:
        raise ManifestError(str(exc)) from None
    seed = _seed(args)

    if args.manifest:
        daemons = []
        if entry.daemon:
            daemons.append(DaemonSpec("drive", entry.daemon["constraints"],
                                      entry.daemon["path"]))
        sys.stdout.write(dumps(to_manifest(diagram, daemons=daemons)))
        return None, EXIT_OK

    report = {"command": "catalog", "seed": seed, "name": args.name,
              "params": params, "summary": entry.summary, **_summary(diagram)}
    code = EXIT_OK
    if args.limit or args.mobility:
        lim = f_limit(diagram, seed=seed)
        if args.limit:
            payload, code = _limit_payload(lim, seed)
            report["limit"] = payload
        if args.mobility:
            try:
                rep = mobility(diagram, lim, group_dim=entry.group_dim)
                report["mobility"] = {
                    "total_dim": rep.total_dim, "group_dim": rep.group_dim,
                    "internal_dof": rep.internal_dof, "locked": rep.locked,
                    "overconstrained": rep.overconstrained}
            except ValueError as exc:
                report["mobility"] = {"ok": False, "detail": str(exc)}
                code = EXIT_OBSTRUCTED
    return report, code


def build_parser():
    parser = argparse.ArgumentParser(
        prog="acmkin",
        description="Analysis of constraint diagrams for kinematic linkages.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, manifest=True):
        if manifest:
            p.add_argument("manifest", help="diagram manifest (JSON)")
        p.add_argument("--json", action="store_true", help="canonical JSON output")
        p.add_argument("--seed", type=int, default=None,
                       help="RNG seed (default: ACMKIN_SEED or 0)")

    p = sub.add_parser("validate", help="check the diagram axioms")
    common(p)
    p.add_argument("--n-samples", type=int, default=5)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("skeleton", help="constraint skeleton and acyclicity")
    common(p)
    p.set_defaults(func=cmd_skeleton)

    p = sub.add_parser("limit", help="construct the configuration space")
    common(p)
    p.add_argument("--strategy", choices=("auto", "external", "acyclic"),
                   default="auto")
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("mobility", help="degree-of-freedom report")
    common(p)
    p.add_argument("--group-dim", type=int, default=3,
                   help="ambient motion group dimension (3 planar, 6 spatial)")
    p.set_defaults(func=cmd_mobility)

    p = sub.add_parser("weld", help="fuse two actors along their interaction")
    common(p)
    p.add_argument("i")
    p.add_argument("j")
    p.set_defaults(func=cmd_weld)

    p = sub.add_parser("daemon-slice", help="slice configurations at time t")
    common(p)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--daemon", default=None, help="daemon name from the manifest")
    p.set_defaults(func=cmd_daemon_slice)

    p = sub.add_parser("pair-check", help="two-actor realizability of motion sets")
    common(p)
    p.add_argument("--trials", type=int, default=2000)
    p.set_defaults(func=cmd_pair_check)

    p = sub.add_parser("sample", help="sample configuration-space points")
    common(p)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--csv", default=None, help="also write samples to this CSV file")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("catalog", help="analyze a built-in linkage")
    common(p, manifest=False)
    p.add_argument("name")
    p.add_argument("--L", type=float, nargs="+", default=None,
                   help="length parameters, in declaration order")
    p.add_argument("--limit", action="store_true")
    p.add_argument("--mobility", action="store_true")
    p.add_argument("--manifest", action="store_true",
                   help="print the diagram manifest instead of a report")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        report, code = args.func(args)
    except ManifestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except AcmkinError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OBSTRUCTED
    if report is not None:
        _print(report, args.json)
    return code


if __name__ == "__main__":
    sys.exit(main())
