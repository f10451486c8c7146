"""Time the numba kernels against their numpy twins on decision-tree workloads.

    python3 benchmarks/bench_kernels.py [--repeat R] [--sample K]

The first numba call of each kernel is timed separately as compile time; the
reported numbers are the best of R warm runs. Both backends must agree.
"""

import argparse
import time

import numpy as np

from qdt import _kernels
from qdt.dtree import build_decision_tree


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def workloads(sample, seed):
    ins5 = build_decision_tree("insertion", 5).tree
    p5, l5 = ins5.arrays()
    lca5 = _kernels.lca_table(p5, l5, backend="numpy")
    mer7 = build_decision_tree("merge", 7).tree
    p7, l7 = mer7.arrays()
    trip = np.random.default_rng(seed).integers(0, mer7.size, (sample, 3))
    mer6 = build_decision_tree("merge", 6).tree
    p6, l6 = mer6.arrays()
    return [
        (f"triple_scan  insertion n=5 ({ins5.size}^3 triples)",
         lambda be: _kernels.triple_scan(lca5, l5, -1, backend=be)),
        (f"lca_table    merge n=6 ({mer6.size}^2 pairs)",
         lambda be: _kernels.lca_table(p6, l6, backend=be).sum()),
        (f"star_sampled merge n=7 ({sample} triples)",
         lambda be: _kernels.star_sampled(p7, l7, trip, backend=be)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--sample", type=int, default=10**6)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    print(f"{'workload':48} {'numpy s':>9} {'numba s':>9} {'compile s':>10} {'speedup':>8}")
    for name, fn in workloads(args.sample, args.seed):
        t0 = time.perf_counter()
        fn("numba")
        first = time.perf_counter() - t0
        t_nb, out_nb = best_of(lambda: fn("numba"), args.repeat)
        t_np, out_np = best_of(lambda: fn("numpy"), args.repeat)
        assert out_nb == out_np, (name, out_nb, out_np)
        print(f"{name:48} {t_np:9.4f} {t_nb:9.4f} {max(first - t_nb, 0):10.3f} {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
