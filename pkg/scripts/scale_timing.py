#!/usr/bin/env python3
"""Embedding wall-time and sparsity as graph size grows.

Builds synthetic tree-plus-shortcuts graphs (the same generator used by the
test suite's large fixture) and reports fit time, nnz, and determinism
across thread counts.
"""

import argparse
import sys
import time

import numpy as np

from ontolink.embed.snore import snore_fit
from ontolink.graphcore import SimpleGraph


def tree_with_shortcuts(n: int, extra: int, seed: int) -> SimpleGraph:
    rng = np.random.default_rng(seed)
    edges = [(int(rng.integers(0, i)), i) for i in range(1, n)]
    have = set(edges)
    while len(have) < n - 1 + extra:
        u, v = (int(x) for x in rng.integers(0, n, size=2))
        if u != v:
            have.add((min(u, v), max(u, v)))
    return SimpleGraph(n, have)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="1000,5000,20000,40000")
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--threads", type=int, default=8)
    args = ap.parse_args()

    print(f"{'n':>8} {'edges':>8} {'fit1 [s]':>9} {'fitT [s]':>9} {'nnz':>10} same")
    for n in (int(s) for s in args.sizes.split(",")):
        g = tree_with_shortcuts(n, extra=n + n // 2, seed=args.seed)
        t0 = time.time()
        e1 = snore_fit(g, seed=args.seed, threads=1)
        t1 = time.time()
        eT = snore_fit(g, seed=args.seed, threads=args.threads)
        t2 = time.time()
        same = (e1.matrix != eT.matrix).nnz == 0
        print(
            f"{n:>8} {g.edge_count:>8} {t1 - t0:>9.1f} {t2 - t1:>9.1f} "
            f"{e1.matrix.nnz:>10} {same}"
        )
        if not same:
            print("determinism violated; aborting", file=sys.stderr)
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
