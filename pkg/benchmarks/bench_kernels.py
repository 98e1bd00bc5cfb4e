#!/usr/bin/env python3
"""Compare the compiled expression kernel against the numpy fallback.

The workload is the residual program of a welded configuration space from
the catalog, evaluated (values, then values+Jacobians) over growing batch
sizes. Setting ACMKIN_PURE_PYTHON=1 only changes which kernel the package
itself uses; this script always times every backend it can import.

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --entry sliding_hinge --repeats 9
"""

import argparse
import time

import numpy as np

from acmkin.expr import backends
from acmkin.linkage import CATALOG
from acmkin.reduction import f_limit


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--entry", default="cylindrical", choices=sorted(CATALOG),
                    help="catalog linkage whose configuration space to use")
    ap.add_argument("--repeats", type=int, default=5,
                    help="timing repeats; the best one is reported")
    ap.add_argument("--batches", type=int, nargs="+", default=[1, 32, 1024])
    args = ap.parse_args()

    entry = CATALOG[args.entry]
    lim = f_limit(entry.build(**entry.params))
    if not lim.ok:
        raise SystemExit(f"{args.entry} has no configuration space to benchmark")
    prog = lim.apex.program()
    impls = backends()
    print(f"workload: residuals of {lim.apex.name!r} "
          f"({prog.n_in} vars -> {prog.n_out} residuals, {len(prog.code) // 2} ops)")

    rng = np.random.default_rng(0)
    names = list(impls)
    print(f"{'batch':>6} {'call':>14} "
          + " ".join(f"{n + ' (us)':>15}" for n in names)
          + "   speedup")
    for n in args.batches:
        X = rng.standard_normal((n, prog.n_in))
        for label, attr in (("eval_values", "eval_values"),
                            ("eval_with_jac", "eval_with_jac")):
            times = {name: best_of(lambda f=getattr(impl, attr): f(prog, X),
                                   args.repeats) * 1e6
                     for name, impl in impls.items()}
            row = f"{n:>6} {label:>14} " + " ".join(
                f"{times[name]:>15.1f}" for name in names)
            if {"python", "compiled"} <= times.keys():
                row += f"   {times['python'] / times['compiled']:>6.1f}x"
            print(row)

    X = rng.standard_normal((8, prog.n_in))
    outs = [impl.eval_with_jac(prog, X) for impl in impls.values()]
    if len(outs) == 2:
        print(f"agreement: values {float(np.max(np.abs(outs[0][0] - outs[1][0]))):.2e}, "
              f"jacobians {float(np.max(np.abs(outs[0][1] - outs[1][1]))):.2e}")


if __name__ == "__main__":
    main()
