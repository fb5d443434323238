"""Five-fold link-prediction benchmark: fold construction, negative
sampling, ROC-AUC / average precision, and report aggregation."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as scipy_stats

from .graphcore import Scorer, SimpleGraph
from .projection import HeteroGraph


class NegativeSamplingError(ValueError):
    pass


@dataclass
class FoldPlan:
    """Positive edges partitioned into 5 folds plus matched negatives."""

    pos_folds: list[list[tuple[int, int]]]
    neg_folds: list[list[tuple[int, int]]]
    seed: int
    n_pos: int
    n_neg: int

    @property
    def folds(self) -> list[list[tuple[int, int, int]]]:
        """Per-fold (u, v, label) lists, positives labeled 1."""
        return [
            [(u, v, 1) for u, v in pos] + [(u, v, 0) for u, v in neg]
            for pos, neg in zip(self.pos_folds, self.neg_folds)
        ]


def _split_balanced(items: list, k: int = 5) -> list[list]:
    """k near-equal parts; earlier parts absorb the remainder."""
    n = len(items)
    base, rem = divmod(n, k)
    parts = []
    start = 0
    for i in range(k):
        size = base + (1 if i < rem else 0)
        parts.append(items[start : start + size])
        start += size
    return parts


def make_folds(g: SimpleGraph, seed: int, n_folds: int = 5) -> FoldPlan:
    positives = list(g.edges())
    n_pos = len(positives)
    if n_pos < n_folds:
        raise ValueError(f"need at least {n_folds} edges (got {n_pos})")
    total_pairs = g.n * (g.n - 1) // 2
    n_non_edges = total_pairs - n_pos
    if n_non_edges == 0:
        raise NegativeSamplingError("negative sampling infeasible: graph is complete")
    if n_non_edges < n_pos:
        raise NegativeSamplingError(
            f"negative sampling infeasible: {n_non_edges} non-edges < {n_pos} positives"
        )
    rng = np.random.default_rng(seed)
    rng.shuffle(positives)

    negatives: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    if n_non_edges <= 4 * n_pos:
        # Dense graph: enumerate non-edges and sample without replacement.
        non_edges = [
            (u, v)
            for u in range(g.n)
            for v in range(u + 1, g.n)
            if not g.has_edge(u, v)
        ]
        idx = rng.choice(len(non_edges), size=n_pos, replace=False)
        negatives = [non_edges[i] for i in idx]
    else:
        while len(negatives) < n_pos:
            batch = rng.integers(0, g.n, size=(2 * (n_pos - len(negatives)) + 16, 2))
            for u, v in batch:
                if u == v:
                    continue
                pair = (int(u), int(v)) if u < v else (int(v), int(u))
                if pair in seen or g.has_edge(*pair):
                    continue
                seen.add(pair)
                negatives.append(pair)
                if len(negatives) == n_pos:
                    break
    return FoldPlan(
        pos_folds=_split_balanced(positives, n_folds),
        neg_folds=_split_balanced(negatives, n_folds),
        seed=seed,
        n_pos=n_pos,
        n_neg=len(negatives),
    )


def roc_auc(pos_scores, neg_scores) -> float:
    """P(pos > neg) + 0.5 P(pos == neg) over all cross pairs, computed via
    midranks with tie correction."""
    pos = np.asarray(pos_scores, dtype=np.float64)
    neg = np.asarray(neg_scores, dtype=np.float64)
    if len(pos) == 0 or len(neg) == 0:
        raise ValueError("score lists must be nonempty")
    ranks = scipy_stats.rankdata(np.concatenate([pos, neg]))
    rank_sum = ranks[: len(pos)].sum()
    return float((rank_sum - len(pos) * (len(pos) + 1) / 2) / (len(pos) * len(neg)))


def average_precision(pos_scores, neg_scores) -> float:
    """AP over the descending ranking; score-tie groups share their group
    precision (deterministic and permutation-invariant under ties)."""
    pos = np.asarray(pos_scores, dtype=np.float64)
    neg = np.asarray(neg_scores, dtype=np.float64)
    if len(pos) == 0 or len(neg) == 0:
        raise ValueError("score lists must be nonempty")
    scores = np.concatenate([pos, neg])
    labels = np.concatenate([np.ones(len(pos)), np.zeros(len(neg))])
    order = np.argsort(-scores, kind="stable")
    scores, labels = scores[order], labels[order]
    # Tie-group boundaries: cumulative counts evaluated at each group's end.
    is_group_end = np.empty(len(scores), dtype=bool)
    is_group_end[-1] = True
    is_group_end[:-1] = scores[:-1] != scores[1:]
    cum_tp = np.cumsum(labels)
    cum_total = np.arange(1, len(scores) + 1)
    group_tp = np.diff(np.concatenate([[0.0], cum_tp[is_group_end]]))
    precision = cum_tp[is_group_end] / cum_total[is_group_end]
    return float(np.sum(group_tp * precision) / len(pos))


@dataclass
class ScorerResult:
    name: str
    aucs: list[float] = field(default_factory=list)
    aps: list[float] = field(default_factory=list)
    fit_seconds: float = 0.0
    failed: str | None = None

    @property
    def auc_mean(self) -> float:
        return float(np.mean(self.aucs)) if self.aucs else float("nan")

    @property
    def auc_std(self) -> float:
        return float(np.std(self.aucs)) if self.aucs else float("nan")

    @property
    def ap_mean(self) -> float:
        return float(np.mean(self.aps)) if self.aps else float("nan")

    @property
    def ap_std(self) -> float:
        return float(np.std(self.aps)) if self.aps else float("nan")


@dataclass
class BenchmarkReport:
    seed: int
    n_nodes: int
    n_edges: int
    results: list[ScorerResult] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "n_nodes": self.n_nodes,
            "n_edges": self.n_edges,
            "scorers": {
                r.name: {
                    "roc_auc_mean": r.auc_mean,
                    "roc_auc_std": r.auc_std,
                    "ap_mean": r.ap_mean,
                    "ap_std": r.ap_std,
                    "roc_auc_folds": r.aucs,
                    "ap_folds": r.aps,
                    "fit_seconds": r.fit_seconds,
                    "failed": r.failed,
                }
                for r in self.results
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_table(self) -> str:
        """Aligned text table, mean +- std scaled by 100."""
        lines = [f"{'baseline':<12} {'ROC-AUC':>18} {'AP':>18} {'fit [s]':>9}"]
        for r in self.results:
            if r.failed:
                lines.append(f"{r.name:<12} {'failed: ' + r.failed}")
                continue
            auc = f"{100 * r.auc_mean:.2f} (+-{100 * r.auc_std:.2f})"
            ap = f"{100 * r.ap_mean:.2f} (+-{100 * r.ap_std:.2f})"
            lines.append(f"{r.name:<12} {auc:>18} {ap:>18} {r.fit_seconds:>9.2f}")
        return "\n".join(lines)


def _training_hetero(h: HeteroGraph, train_edges: set[tuple[int, int]]) -> HeteroGraph:
    """Hetero edges restricted to pairs kept in the training folds."""
    out = HeteroGraph()
    for name in h.node_names:
        out.node_id(name)
    for s, p, o in h.edges:
        pair = (s, o) if s < o else (o, s)
        if pair in train_edges:
            out.add_edge(h.node_names[s], h.pred_names[p], h.node_names[o])
    return out


def run_benchmark(
    g: SimpleGraph,
    h: HeteroGraph | None,
    scorers: list[Scorer],
    seed: int,
) -> BenchmarkReport:
    """Per fold: fit every scorer on the other four folds' positives, score
    this fold's pairs, take ROC-AUC and AP. Splits are shared by all scorers."""
    plan = make_folds(g, seed)
    report = BenchmarkReport(seed=seed, n_nodes=g.n, n_edges=g.edge_count)
    results = {s.name: ScorerResult(name=s.name) for s in scorers}

    for i in range(len(plan.pos_folds)):
        train_edges: set[tuple[int, int]] = set()
        for j, fold in enumerate(plan.pos_folds):
            if j != i:
                train_edges.update(fold)
        g_train = SimpleGraph(g.n, train_edges)
        h_train = None
        pos_pairs = plan.pos_folds[i]
        neg_pairs = plan.neg_folds[i]
        for scorer in scorers:
            res = results[scorer.name]
            if res.failed:
                continue
            try:
                if scorer.needs_hetero and h is not None and h_train is None:
                    h_train = _training_hetero(h, train_edges)
                t0 = time.perf_counter()
                scorer.fit(g_train, hetero=h_train if scorer.needs_hetero else None)
                pos_scores = scorer.score_pairs(pos_pairs)
                neg_scores = scorer.score_pairs(neg_pairs)
                res.fit_seconds += time.perf_counter() - t0
                res.aucs.append(roc_auc(pos_scores, neg_scores))
                res.aps.append(average_precision(pos_scores, neg_scores))
            except Exception as exc:  # recorded per cell; run continues
                res.failed = f"{type(exc).__name__}: {exc}"
    report.results = [results[s.name] for s in scorers]
    return report
