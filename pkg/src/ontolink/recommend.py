"""Missing/redundant edge candidates from the masked score matrix, temporal
evaluation across ontology versions, and curator feedback application."""

from __future__ import annotations

import datetime
import warnings
from dataclasses import dataclass, field

import numpy as np

from .embed import snore as _snore
from .embed.snore import SparseEmbedding, snore_fit, snore_score
from .graphcore import SimpleGraph
from .projection import NodeMap


@dataclass(frozen=True)
class ScoredCandidate:
    u: int  # canonical: u < v
    v: int
    score: float
    kind: str  # "missing" | "redundant"


@dataclass
class TemporalResult:
    k: int
    kind: str
    hits: int
    total: int
    year_pair: tuple[str, str] | None = None

    @property
    def accuracy(self) -> float:
        return self.hits / self.total if self.total else 0.0

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "kind": self.kind,
            "hits": self.hits,
            "total": self.total,
            "accuracy": self.accuracy,
            "year_pair": list(self.year_pair) if self.year_pair else None,
        }


def _canonical(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def candidates(
    R: SparseEmbedding,
    g: SimpleGraph,
    k: int,
    subset: list[int] | None = None,
    block_size: int = 1024,
    within: set[int] | None = None,
) -> tuple[list[ScoredCandidate], list[ScoredCandidate]]:
    """Top-k missing (highest-scored non-edges) and top-k redundant
    (lowest-scored existing edges) candidates.

    ``subset`` restricts to pairs touching those rows (L[P] = R[P] R^T);
    ``within`` further requires both endpoints to be members (used by the
    temporal benchmark). Scores stream in row blocks, never materializing
    the full |N| x |N| matrix.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if R.n != g.n:
        raise ValueError(f"embedding rows ({R.n}) != graph nodes ({g.n})")
    if subset is not None:
        for p in subset:
            if not 0 <= p < g.n:
                raise ValueError(f"unknown node id in subset: {p}")
    rows = np.array(sorted(set(subset)), dtype=np.int64) if subset is not None else np.arange(g.n)
    row_set = set(int(r) for r in rows) if subset is not None else None
    within_arr = None
    if within is not None:
        within_arr = np.zeros(g.n, dtype=bool)
        within_arr[list(within)] = True
    if k == 0:
        return [], []

    def pair_allowed(u: int, v: int) -> bool:
        if within is not None and (u not in within or v not in within):
            return False
        if row_set is not None and u not in row_set and v not in row_set:
            return False
        return True

    adj = g.to_csr().astype(bool)

    # Missing candidates: scan nonzero entries of the streamed product,
    # keeping a running top-m as flat arrays (a single block can carry tens
    # of millions of entries, so no per-entry Python objects).
    m_keep = 2 * max(k, 1000)
    M = R.matrix

    def top_m(vals, uu, vv, m):
        order = np.lexsort((vv, uu, -vals))[:m]
        return vals[order], uu[order], vv[order]

    def scipy_blocks():
        for start in range(0, len(rows), block_size):
            block_rows = rows[start : start + block_size]
            S = (M[block_rows] @ M.T).tocoo()
            yield block_rows[S.row], S.col, S.data

    def kernel_blocks():
        # Full-graph scan on big inputs: the upper-triangle SpGEMM kernel
        # with the embedding inclusion threshold, unclipped. Entries below
        # the threshold cannot reach the top of the ranking unless fewer
        # than k survive, which the caller checks and falls back on.
        C = M.tocsc()
        m_indptr = M.indptr.astype(np.int64)
        m_indices = M.indices.astype(np.int64)
        c_indptr = C.indptr.astype(np.int64)
        c_indices = C.indices.astype(np.int64)
        for start in range(0, len(rows), block_size):
            block_rows = rows[start : start + block_size]
            cols_list, vals_list = _snore._similarity_rows(
                block_rows, m_indptr, m_indices, M.data,
                c_indptr, c_indices, C.data, 0.005, g.n, False,
            )
            lengths = np.fromiter((len(c) for c in cols_list), np.int64, len(cols_list))
            if lengths.sum() == 0:
                continue
            yield (
                np.repeat(block_rows, lengths),
                np.concatenate(cols_list),
                np.concatenate(vals_list),
            )

    def scan_missing(blocks):
        best_vals = np.empty(0, dtype=np.float64)
        best_u = np.empty(0, dtype=np.int64)
        best_v = np.empty(0, dtype=np.int64)
        for r_glob, c, vals in blocks:
            if len(vals) == 0:
                continue
            keep = r_glob != c
            # De-duplicate pairs covered by two subset rows: keep the
            # (r < c) orientation, or any orientation when c is outside
            # the row set.
            if row_set is not None:
                in_rows = np.isin(c, rows)
                keep &= (~in_rows) | (r_glob < c)
            else:
                keep &= r_glob < c
            if within_arr is not None:
                keep &= within_arr[r_glob] & within_arr[c]
            r_glob, c, vals = r_glob[keep], c[keep], vals[keep]
            if len(vals) == 0:
                continue
            uu = np.minimum(r_glob, c).astype(np.int64)
            vv = np.maximum(r_glob, c).astype(np.int64)
            is_edge = np.asarray(adj[uu, vv]).ravel()
            uu, vv, vals = uu[~is_edge], vv[~is_edge], vals[~is_edge]
            best_vals, best_u, best_v = top_m(
                np.concatenate([best_vals, vals]),
                np.concatenate([best_u, uu]),
                np.concatenate([best_v, vv]),
                m_keep,
            )
        return top_m(best_vals, best_u, best_v, k)

    use_kernel = subset is None and _snore._HAVE_NUMBA and g.n > 4096
    best_vals, best_u, best_v = scan_missing(
        kernel_blocks() if use_kernel else scipy_blocks()
    )
    if use_kernel and len(best_vals) < k:
        best_vals, best_u, best_v = scan_missing(scipy_blocks())
    missing = [
        ScoredCandidate(int(u), int(v), float(s), "missing")
        for s, u, v in zip(best_vals, best_u, best_v)
    ]
    if len(missing) < k:
        # Pad with zero-score non-edges in lexicographic order.
        have = {(c.u, c.v) for c in missing}
        for u in range(g.n):
            if len(missing) == k:
                break
            for v in range(u + 1, g.n):
                if len(missing) == k:
                    break
                if (u, v) in have or g.has_edge(u, v) or not pair_allowed(u, v):
                    continue
                missing.append(ScoredCandidate(u, v, 0.0, "missing"))
        if len(missing) < k:
            warnings.warn(f"only {len(missing)} missing candidates available, clamped from k={k}")

    # Redundant candidates: existing edges, ascending score.
    scored_edges = []
    for u, v in g.edges():
        if not pair_allowed(u, v):
            continue
        scored_edges.append((snore_score(R, u, v), u, v))
    scored_edges.sort(key=lambda t: (t[0], t[1], t[2]))
    if k > len(scored_edges):
        warnings.warn(f"only {len(scored_edges)} redundant candidates available, clamped from k={k}")
    redundant = [ScoredCandidate(u, v, s, "redundant") for s, u, v in scored_edges[:k]]

    for cand in missing:
        assert not g.has_edge(cand.u, cand.v)
    for cand in redundant:
        assert g.has_edge(cand.u, cand.v)
    return missing, redundant


def temporal_eval(
    version_t: tuple[SimpleGraph, NodeMap],
    version_t1: tuple[SimpleGraph, NodeMap],
    ks: list[int],
    seed: int,
    year_pair: tuple[str, str] | None = None,
    embedding: SparseEmbedding | None = None,
    snore_params: dict | None = None,
) -> list[TemporalResult]:
    """Fit on version t, recommend, then grade candidates against t+1:
    a missing candidate is a hit iff the edge exists at t+1; a redundant
    candidate is a hit iff its edge was dropped by t+1. Node identity is
    matched by IRI; nodes present in only one version are excluded."""
    g_t, map_t = version_t
    g_t1, map_t1 = version_t1
    shared_iris = set(map_t.names) & set(map_t1.names)
    if not shared_iris:
        raise ValueError("no IRI overlap between versions")
    shared_t = {map_t.id_of(name) for name in shared_iris}
    if embedding is None:
        embedding = snore_fit(g_t, seed=seed, **(snore_params or {}))
    max_k = max(ks)
    missing, redundant = candidates(embedding, g_t, max_k, within=shared_t)

    def t1_has_edge(u: int, v: int) -> bool:
        iu = map_t1.id_of(map_t.names[u])
        iv = map_t1.id_of(map_t.names[v])
        return g_t1.has_edge(iu, iv)

    results = []
    for k in ks:
        miss_k = missing[:k]
        hits = sum(1 for c in miss_k if t1_has_edge(c.u, c.v))
        results.append(TemporalResult(k, "missing", hits, len(miss_k), year_pair))
        red_k = redundant[:k]
        hits = sum(1 for c in red_k if not t1_has_edge(c.u, c.v))
        results.append(TemporalResult(k, "redundant", hits, len(red_k), year_pair))
    return results


@dataclass
class FeedbackError:
    u: int
    v: int
    action: str
    reason: str


@dataclass
class JournalEntry:
    action: str  # "accept" | "reject"
    u: int
    v: int
    timestamp: str = field(
        default_factory=lambda: datetime.datetime.now(datetime.timezone.utc).isoformat()
    )

    def to_dict(self) -> dict:
        return {"action": self.action, "u": self.u, "v": self.v, "timestamp": self.timestamp}


def apply_feedback(
    g: SimpleGraph,
    accepted: list[tuple[int, int]],
    rejected: list[tuple[int, int]],
) -> tuple[SimpleGraph, list[JournalEntry], list[FeedbackError]]:
    """Inserts accepted non-edges and removes rejected edges as one batch.

    Invalid entries are reported per edge; the valid remainder still applies.
    """
    errors: list[FeedbackError] = []
    journal: list[JournalEntry] = []
    to_add: list[tuple[int, int]] = []
    to_remove: list[tuple[int, int]] = []
    for u, v in accepted:
        u, v = _canonical(u, v)
        if u == v:
            errors.append(FeedbackError(u, v, "accept", "self-loop"))
        elif g.has_edge(u, v):
            errors.append(FeedbackError(u, v, "accept", "edge already exists"))
        else:
            to_add.append((u, v))
            journal.append(JournalEntry("accept", u, v))
    for u, v in rejected:
        u, v = _canonical(u, v)
        if not g.has_edge(u, v):
            errors.append(FeedbackError(u, v, "reject", "edge does not exist"))
        else:
            to_remove.append((u, v))
            journal.append(JournalEntry("reject", u, v))
    new_graph = g.with_edges_changed(add=to_add, remove=to_remove)
    return new_graph, journal, errors
