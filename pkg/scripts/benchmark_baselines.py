#!/usr/bin/env python3
"""Run the 5-fold link-prediction benchmark on a projected ontology.

Example:
    python scripts/benchmark_baselines.py --graph go.tsv \
        --scorers snore,adamic,jaccard,pref,spectral,transe --seed 42
"""

import argparse
import sys
import time

from ontolink import projection
from ontolink.cli import _make_scorers
from ontolink.evalbench import run_benchmark


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--graph", required=True, help="hetero TSV from `ontolink convert`")
    ap.add_argument("--scorers", default="snore,adamic,jaccard,pref")
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--json", help="also write the full report as JSON")
    args = ap.parse_args()

    g, _, h = projection.load_graph_tsv(args.graph)
    print(f"graph: |N|={g.n} |E|={g.edge_count}", file=sys.stderr)
    scorers = _make_scorers(args.scorers, args.seed, args.threads)
    t0 = time.time()
    report = run_benchmark(g, h, scorers, seed=args.seed)
    print(f"benchmark took {time.time() - t0:.1f}s", file=sys.stderr)
    print(report.to_table())
    if args.json:
        with open(args.json, "w", encoding="utf-8") as f:
            f.write(report.to_json())
    return 0


if __name__ == "__main__":
    sys.exit(main())
