"""Translation-based knowledge graph embedding with margin ranking loss."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..graphcore import Scorer, SimpleGraph
from ..projection import HeteroGraph


class TrainingDivergedError(RuntimeError):
    pass


@dataclass
class KGEmbedding:
    entities: np.ndarray  # |N| x d, unit L2 rows after each epoch
    relations: np.ndarray  # |P| x d
    d: int
    epoch_losses: list[float] = field(default_factory=list)


def transe_fit(
    h: HeteroGraph,
    d: int = 64,
    margin: float = 1.0,
    lr: float = 0.01,
    epochs: int = 200,
    negatives_per_positive: int = 1,
    seed: int = 0,
    batch_size: int = 512,
) -> KGEmbedding:
    if d <= 0:
        raise ValueError(f"embedding dimension must be positive (got {d})")
    if not h.edges:
        raise ValueError("hetero graph has no edges")
    n, m = h.n_nodes, len(h.pred_names)
    triples = np.array(h.edges, dtype=np.int64)  # columns: s, p, o
    rng = np.random.default_rng(seed)
    bound = 6.0 / np.sqrt(d)
    ent = rng.uniform(-bound, bound, size=(n, d))
    rel = rng.uniform(-bound, bound, size=(m, d))
    rel /= np.maximum(np.linalg.norm(rel, axis=1, keepdims=True), 1e-12)
    ent /= np.maximum(np.linalg.norm(ent, axis=1, keepdims=True), 1e-12)

    losses: list[float] = []
    for _ in range(epochs):
        order = rng.permutation(len(triples))
        epoch_loss = 0.0
        for start in range(0, len(order), batch_size):
            batch = triples[order[start : start + batch_size]]
            if negatives_per_positive > 1:
                batch = np.repeat(batch, negatives_per_positive, axis=0)
            s, p, o = batch[:, 0], batch[:, 1], batch[:, 2]
            # Corrupt head or tail uniformly.
            corrupt_head = rng.random(len(batch)) < 0.5
            rand_ent = rng.integers(0, n, size=len(batch))
            s_neg = np.where(corrupt_head, rand_ent, s)
            o_neg = np.where(corrupt_head, o, rand_ent)

            diff_pos = ent[s] + rel[p] - ent[o]
            diff_neg = ent[s_neg] + rel[p] - ent[o_neg]
            dist_pos = np.linalg.norm(diff_pos, axis=1)
            dist_neg = np.linalg.norm(diff_neg, axis=1)
            viol = margin + dist_pos - dist_neg
            active = viol > 0
            epoch_loss += float(viol[active].sum())
            if not active.any():
                continue
            gp = diff_pos[active] / np.maximum(dist_pos[active, None], 1e-12)
            gn = diff_neg[active] / np.maximum(dist_neg[active, None], 1e-12)
            np.add.at(ent, s[active], -lr * gp)
            np.add.at(ent, o[active], lr * gp)
            np.add.at(rel, p[active], -lr * (gp - gn))
            np.add.at(ent, s_neg[active], lr * gn)
            np.add.at(ent, o_neg[active], -lr * gn)
        ent /= np.maximum(np.linalg.norm(ent, axis=1, keepdims=True), 1e-12)
        if not np.isfinite(epoch_loss):
            raise TrainingDivergedError(
                f"non-finite loss at epoch {len(losses)}: {epoch_loss}"
            )
        losses.append(epoch_loss)
    return KGEmbedding(entities=ent, relations=rel, d=d, epoch_losses=losses)


def transe_score(E: KGEmbedding, u: int, v: int) -> float:
    """Best (least negative) -distance over all relations and both
    orientations; an existing edge under some relation scores near 0."""
    eu, ev = E.entities[u], E.entities[v]
    fwd = np.linalg.norm(eu + E.relations - ev, axis=1)
    bwd = np.linalg.norm(ev + E.relations - eu, axis=1)
    return float(-min(fwd.min(), bwd.min()))


class TransEScorer(Scorer):
    name = "transe"
    needs_hetero = True

    def __init__(self, seed: int = 0, **params):
        self.seed = seed
        self.params = params
        self.embedding: KGEmbedding | None = None

    def fit(self, g: SimpleGraph, hetero: HeteroGraph | None = None) -> None:
        if hetero is None:
            # Fall back to a single anonymous relation over the simple graph.
            hetero = HeteroGraph()
            for i in range(g.n):
                hetero.node_id(str(i))
            for u, v in g.edges():
                hetero.add_edge(str(u), "edge", str(v))
        self.embedding = transe_fit(hetero, seed=self.seed, **self.params)

    def score(self, u: int, v: int) -> float:
        return transe_score(self.embedding, u, v)
