"""Undirected simple-graph container and proximity-based edge scorers."""

from __future__ import annotations

import math
from typing import Iterable, Iterator

import numpy as np
from scipy import sparse


class SimpleGraph:
    """Undirected graph without self-loops or parallel edges.

    Nodes are dense integer ids 0..n-1. Adjacency is stored as sorted
    neighbor arrays, so construction is order-independent.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        self.n = n
        edge_set: set[tuple[int, int]] = set()
        for u, v in edges:
            if u == v:
                continue
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            edge_set.add((u, v) if u < v else (v, u))
        self._edge_set = edge_set
        self.edge_count = len(edge_set)
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in edge_set:
            adj[u].append(v)
            adj[v].append(u)
        self._adj = [np.array(sorted(a), dtype=np.int64) for a in adj]
        self.degrees = np.array([len(a) for a in self._adj], dtype=np.int64)

    def neighbors(self, u: int) -> np.ndarray:
        return self._adj[u]

    def degree(self, u: int) -> int:
        return int(self.degrees[u])

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edge_set

    def edges(self) -> Iterator[tuple[int, int]]:
        """Canonical (u < v) edges in sorted order."""
        return iter(sorted(self._edge_set))

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self._edge_set)

    def to_csr(self) -> sparse.csr_matrix:
        if self.edge_count == 0:
            return sparse.csr_matrix((self.n, self.n))
        rows, cols = [], []
        for u, v in self._edge_set:
            rows += [u, v]
            cols += [v, u]
        data = np.ones(len(rows), dtype=np.float64)
        return sparse.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    def with_edges_changed(
        self,
        add: Iterable[tuple[int, int]] = (),
        remove: Iterable[tuple[int, int]] = (),
    ) -> "SimpleGraph":
        edge_set = set(self._edge_set)
        for u, v in add:
            edge_set.add((u, v) if u < v else (v, u))
        for u, v in remove:
            edge_set.discard((u, v) if u < v else (v, u))
        return SimpleGraph(self.n, edge_set)


def adamic_adar(g: SimpleGraph, u: int, v: int) -> float:
    """Sum of 1/ln(deg) over common neighbors (natural log)."""
    common = np.intersect1d(g.neighbors(u), g.neighbors(v), assume_unique=True)
    total = 0.0
    for x in common:
        deg = g.degree(int(x))
        # A common neighbor of u and v has degree >= 2 by construction.
        assert deg >= 2
        total += 1.0 / math.log(deg)
    return total


def jaccard(g: SimpleGraph, u: int, v: int) -> float:
    nu, nv = g.neighbors(u), g.neighbors(v)
    union = len(np.union1d(nu, nv))
    if union == 0:
        return 0.0  # two isolated nodes: no evidence
    inter = len(np.intersect1d(nu, nv, assume_unique=True))
    return inter / union


def preferential(g: SimpleGraph, u: int, v: int) -> float:
    return float(g.degree(u) * g.degree(v))


class Scorer:
    """Uniform fit/score interface over all baselines.

    ``fit`` receives the training SimpleGraph (and optionally the labeled
    hetero graph for relation-aware methods); ``score`` must be symmetric
    and deterministic given the seed passed at construction.
    """

    name: str = "scorer"
    needs_hetero = False

    def fit(self, g: SimpleGraph, hetero=None) -> None:
        raise NotImplementedError

    def score(self, u: int, v: int) -> float:
        raise NotImplementedError

    def score_pairs(self, pairs: Iterable[tuple[int, int]]) -> np.ndarray:
        return np.array([self.score(u, v) for u, v in pairs], dtype=np.float64)


class AdamicAdarScorer(Scorer):
    name = "adamic"

    def fit(self, g: SimpleGraph, hetero=None) -> None:
        self._g = g

    def score(self, u: int, v: int) -> float:
        return adamic_adar(self._g, u, v)


class JaccardScorer(Scorer):
    name = "jaccard"

    def fit(self, g: SimpleGraph, hetero=None) -> None:
        self._g = g

    def score(self, u: int, v: int) -> float:
        return jaccard(self._g, u, v)


class PreferentialScorer(Scorer):
    name = "pref"

    def fit(self, g: SimpleGraph, hetero=None) -> None:
        self._g = g

    def score(self, u: int, v: int) -> float:
        return preferential(self._g, u, v)


def minmax_normalize(scores: np.ndarray) -> np.ndarray:
    """Min-max rescaling over the evaluated pair set, for probability-shaped
    output. Rank consumers (AUC/AP) skip this."""
    lo, hi = float(np.min(scores)), float(np.max(scores))
    if hi == lo:
        return np.zeros_like(scores)
    return (scores - lo) / (hi - lo)
