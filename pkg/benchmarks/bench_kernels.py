"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat 5] [--number 2000]
"""
import argparse
import timeit
from contextlib import contextmanager

import numpy as np

from fuzzysos import _kernels_py, fam, kernels, simulator

try:
    from fuzzysos import _ckernels
except ImportError:
    _ckernels = None


@contextmanager
def backend(mod):
    saved = kernels.clipped_centroid, kernels.pwl_eval
    kernels.clipped_centroid, kernels.pwl_eval = mod.clipped_centroid, mod.pwl_eval
    try:
        yield
    finally:
        kernels.clipped_centroid, kernels.pwl_eval = saved


def bench(stmt, number, repeat):
    return min(timeit.repeat(stmt, number=number, repeat=repeat)) / number


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=2000)
    args = ap.parse_args()

    table = fam.default_table()
    var = fam.DEADLINE_OUTPUT
    p = fam._packed(var)
    clips = np.array([0.2, 0.7, 0.5, 0.1])
    scenario = simulator.default_scenario()

    mods = [("python", _kernels_py)] + ([("cython", _ckernels)] if _ckernels else [])
    rows = []
    for name, mod in mods:
        with backend(mod):
            centroid = bench(
                lambda: mod.clipped_centroid(var.lo, var.hi, 1001, p.xs, p.mus, p.offsets, clips),
                args.number, args.repeat,
            )
            infer = bench(lambda: fam.infer(table, 3.0, 0.5, 2.0, 35.0), args.number // 4, args.repeat)
            run = bench(lambda: simulator.run(scenario, table), 5, args.repeat)
        rows.append((name, centroid, infer, run))

    print(f"{'backend':8} {'centroid (us)':>14} {'infer (us)':>12} {'20-round run (ms)':>18}")
    for name, c, i, r in rows:
        print(f"{name:8} {c * 1e6:14.1f} {i * 1e6:12.1f} {r * 1e3:18.1f}")
    if len(rows) == 2:
        (_, c0, i0, r0), (_, c1, i1, r1) = rows
        print(f"{'speedup':8} {c0 / c1:13.1f}x {i0 / i1:11.1f}x {r0 / r1:17.1f}x")


if __name__ == "__main__":
    main()
