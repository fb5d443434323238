"""Sparse symbolic node embedding from hashed random-walk neighborhoods.

Each node is represented by cosine similarities between its L1-normalized
walk-visit frequency vector and those of all nodes (columns are node
identities, so features stay human-readable). Defaults: 1024 walks per node,
walk length uniform in {1..5} steps, inclusion threshold 0.005, at most 256
stored entries per row (hence < |N|*256 overall).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from ..graphcore import Scorer, SimpleGraph

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a normal dependency
    _HAVE_NUMBA = False


@dataclass
class SparseEmbedding:
    """Row-sparse |N| x |F| similarity matrix with symbolic columns."""

    matrix: sparse.csr_matrix
    feature_names: list[str] | None = None
    params: dict = field(default_factory=dict)
    seed: int | None = None

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def nnz(self) -> int:
        return self.matrix.nnz

    def row(self, u: int) -> tuple[np.ndarray, np.ndarray]:
        """(feature ids, values) of row u."""
        start, end = self.matrix.indptr[u], self.matrix.indptr[u + 1]
        return self.matrix.indices[start:end], self.matrix.data[start:end]


def snore_score(R: SparseEmbedding, u: int, v: int) -> float:
    """Sparse dot product of rows u and v (one entry of L = R R^T)."""
    iu, du = R.row(u)
    iv, dv = R.row(v)
    common, a_idx, b_idx = np.intersect1d(iu, iv, assume_unique=True, return_indices=True)
    if len(common) == 0:
        return 0.0
    return float(np.dot(du[a_idx], dv[b_idx]))


def _walk_counts(
    u: int,
    indptr: np.ndarray,
    indices: np.ndarray,
    degrees: np.ndarray,
    walks: int,
    max_len: int,
    seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Visit counts over `walks` uniform random walks from u.

    The per-node generator makes parallel and serial runs bit-identical.
    A walk of length L takes L steps; the start node is counted once per walk.
    """
    rng = np.random.default_rng((seed, u))
    lengths = rng.integers(1, max_len + 1, size=walks)
    cur = np.full(walks, u, dtype=np.int64)
    visited = [cur]
    for step in range(1, max_len + 1):
        active = (lengths >= step) & (degrees[cur] > 0)
        if not active.any():
            break
        src = cur[active]
        deg = degrees[src]
        r = rng.random(active.sum())
        nxt = indices[indptr[src] + (r * deg).astype(np.int64)]
        cur = cur.copy()
        cur[active] = nxt
        visited.append(cur[active])
    nodes, counts = np.unique(np.concatenate(visited), return_counts=True)
    return nodes, counts.astype(np.float64)


def _thresholded_product(
    H: sparse.csr_matrix, threshold: float, threads: int, block_size: int
) -> sparse.csr_matrix:
    """H H^T with entries below the inclusion threshold dropped."""
    n = H.shape[0]
    if _HAVE_NUMBA:
        C = H.tocsc()
        h_indptr = H.indptr.astype(np.int64)
        h_indices = H.indices.astype(np.int64)
        c_indptr = C.indptr.astype(np.int64)
        c_indices = C.indices.astype(np.int64)

        def run_block(start: int):
            rows = np.arange(start, min(start + block_size, n), dtype=np.int64)
            return _similarity_rows(
                rows, h_indptr, h_indices, H.data, c_indptr, c_indices, C.data,
                threshold, n, True,
            )

        starts = list(range(0, n, block_size))
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                blocks = list(pool.map(run_block, starts))
        else:
            blocks = [run_block(s) for s in starts]
        upper_rows: list[tuple[np.ndarray, np.ndarray]] = []
        for cols_list, vals_list in blocks:
            upper_rows.extend(zip(cols_list, vals_list))
        indptr = np.zeros(n + 1, dtype=np.int64)
        for u, (cols, _) in enumerate(upper_rows):
            indptr[u + 1] = indptr[u] + len(cols)
        U = sparse.csr_matrix(
            (
                np.concatenate([v for _, v in upper_rows]),
                np.concatenate([c for c, _ in upper_rows]),
                indptr,
            ),
            shape=(n, n),
        )
        # The kernel emits only the upper triangle plus the unit diagonal;
        # mirror it (U + U^T double-counts the diagonal).
        S = (U + U.T - sparse.identity(n, format="csr")).tocsr()
        S.sort_indices()
        return S
    # scipy fallback: identical semantics, slower on large graphs
    parts = []
    for start in range(0, n, block_size):
        S = (H[start : min(start + block_size, n)] @ H.T).tocsr()
        S.data = np.clip(S.data, 0.0, 1.0)
        S.data[S.data < threshold] = 0.0
        S.eliminate_zeros()
        parts.append(S)
    S = sparse.vstack(parts, format="csr")
    S.sort_indices()
    return S


if _HAVE_NUMBA:

    @njit(nogil=True, cache=True)
    def _similarity_rows(
        rows, h_indptr, h_indices, h_data, c_indptr, c_indices, c_data, threshold, n, clip
    ):
        """Thresholded upper-triangle rows of H H^T via a dense accumulator.

        The product is symmetric, so each column scan starts at the first
        entry >= u (binary search; csc indices are sorted), halving the
        multiply count. Per-row accumulation order is fixed, making results
        identical at any thread count. With ``clip`` the cosine entries are
        capped at 1.0; the candidate scan reuses the kernel unclipped.
        """
        acc = np.zeros(n, dtype=np.float64)
        touched = np.empty(n, dtype=np.int64)
        out_cols = []
        out_vals = []
        for u in rows:
            nt = 0
            for ii in range(h_indptr[u], h_indptr[u + 1]):
                k = h_indices[ii]
                huk = h_data[ii]
                lo = c_indptr[k]
                hi = c_indptr[k + 1]
                # First position in column k with row index >= u.
                while lo < hi:
                    mid = (lo + hi) // 2
                    if c_indices[mid] < u:
                        lo = mid + 1
                    else:
                        hi = mid
                for jj in range(lo, c_indptr[k + 1]):
                    f = c_indices[jj]
                    if acc[f] == 0.0:
                        touched[nt] = f
                        nt += 1
                    acc[f] += huk * c_data[jj]
            cnt = 0
            for t in range(nt):
                if acc[touched[t]] >= threshold:
                    cnt += 1
            cols = np.empty(cnt, dtype=np.int64)
            vals = np.empty(cnt, dtype=np.float64)
            w = 0
            for t in range(nt):
                f = touched[t]
                v = acc[f]
                if v >= threshold:
                    cols[w] = f
                    vals[w] = min(v, 1.0) if clip else v
                    w += 1
                acc[f] = 0.0
            out_cols.append(cols)
            out_vals.append(vals)
        return out_cols, out_vals


def snore_fit(
    g: SimpleGraph,
    walks_per_node: int = 1024,
    max_len: int = 5,
    threshold: float = 0.005,
    nnz_cap_per_node: int = 256,
    seed: int = 0,
    threads: int = 1,
    block_size: int = 2048,
) -> SparseEmbedding:
    if g.n == 0:
        raise ValueError("graph is empty")
    if seed is None:
        raise ValueError("seed is required")
    n = g.n
    A = g.to_csr()
    indptr = A.indptr.astype(np.int64)
    indices = A.indices.astype(np.int64)
    degrees = g.degrees

    def one(u: int):
        return _walk_counts(u, indptr, indices, degrees, walks_per_node, max_len, seed)

    # The per-node generator fixes each node's walk stream, so the pool size
    # never affects the output. The walk phase holds the GIL between small
    # numpy calls, so oversubscribing cores only adds contention; cap it.
    walk_threads = min(threads, os.cpu_count() or 1)
    if walk_threads > 1:
        with ThreadPoolExecutor(max_workers=walk_threads) as pool:
            per_node = list(pool.map(one, range(n), chunksize=256))
    else:
        per_node = [one(u) for u in range(n)]

    # Assemble the walk-frequency matrix H with L2-normalized rows, so the
    # blockwise product H H^T yields cosines directly.
    lengths = np.fromiter((len(nodes) for nodes, _ in per_node), np.int64, n)
    h_indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(lengths, out=h_indptr[1:])
    h_indices = np.concatenate([nodes for nodes, _ in per_node])
    h_data = np.concatenate([counts for _, counts in per_node])
    norms = np.sqrt(np.add.reduceat(h_data * h_data, h_indptr[:-1]))
    h_data = h_data / np.repeat(norms, lengths)
    H = sparse.csr_matrix((h_data, h_indices, h_indptr), shape=(n, n))

    S = _thresholded_product(H, threshold, threads, block_size)
    out_blocks = []
    for u in range(n):
        lo, hi = S.indptr[u], S.indptr[u + 1]
        cols = S.indices[lo:hi].astype(np.int64)
        vals = S.data[lo:hi]
        # Per-row cap: top entries by value, ties keep smaller feature id.
        if len(cols) > nnz_cap_per_node:
            order = np.lexsort((cols, -vals))[:nnz_cap_per_node]
            cols, vals = cols[order], vals[order]
            order = np.argsort(cols)
            cols, vals = cols[order], vals[order]
        out_blocks.append((cols, vals))

    r_indptr = np.zeros(n + 1, dtype=np.int64)
    for u, (cols, _) in enumerate(out_blocks):
        r_indptr[u + 1] = r_indptr[u] + len(cols)
    r_indices = np.concatenate([cols for cols, _ in out_blocks]) if n else np.array([])
    r_data = np.concatenate([vals for _, vals in out_blocks]) if n else np.array([])
    R = sparse.csr_matrix(
        (r_data, r_indices.astype(np.int64), r_indptr), shape=(n, n)
    )
    assert R.nnz <= n * nnz_cap_per_node
    return SparseEmbedding(
        matrix=R,
        params={
            "walks_per_node": walks_per_node,
            "max_len": max_len,
            "threshold": threshold,
            "nnz_cap_per_node": nnz_cap_per_node,
        },
        seed=seed,
    )


class SnoreScorer(Scorer):
    name = "snore"

    def __init__(self, seed: int = 0, threads: int = 1, **params):
        self.seed = seed
        self.threads = threads
        self.params = params
        self.embedding: SparseEmbedding | None = None

    def fit(self, g: SimpleGraph, hetero=None) -> None:
        self.embedding = snore_fit(g, seed=self.seed, threads=self.threads, **self.params)

    def score(self, u: int, v: int) -> float:
        return snore_score(self.embedding, u, v)
