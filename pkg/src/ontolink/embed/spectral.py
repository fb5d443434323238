"""Node embedding from the spectral decomposition of the graph Laplacian."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from ..graphcore import Scorer, SimpleGraph


class EigenConvergenceError(RuntimeError):
    def __init__(self, residual: float):
        super().__init__(f"eigensolver failed to converge (residual {residual:.3e})")
        self.residual = residual


@dataclass
class SpectralEmbedding:
    coordinates: np.ndarray  # |N| x d, rows L2-normalized
    vectors: np.ndarray  # raw eigenvectors, |N| x d
    eigenvalues: np.ndarray  # d values, ascending

    def score(self, u: int, v: int) -> float:
        return float(np.dot(self.coordinates[u], self.coordinates[v]))


def normalized_laplacian(g: SimpleGraph) -> sparse.csr_matrix:
    """Symmetric normalized Laplacian; isolated nodes get a zero row so each
    connected component (including singletons) contributes one null vector."""
    A = g.to_csr()
    deg = g.degrees.astype(np.float64)
    inv_sqrt = np.zeros_like(deg)
    nz = deg > 0
    inv_sqrt[nz] = 1.0 / np.sqrt(deg[nz])
    D = sparse.diags(inv_sqrt)
    diag = sparse.diags(nz.astype(np.float64))
    return (diag - D @ A @ D).tocsr()


def spectral_fit(
    g: SimpleGraph, d: int = 128, seed: int = 0, dense_cutoff: int = 1500
) -> SpectralEmbedding:
    if not 0 < d < g.n:
        raise ValueError(f"need 0 < d < |N| (got d={d}, |N|={g.n})")
    L = normalized_laplacian(g)
    if g.n <= dense_cutoff or d >= g.n - 1:
        vals, vecs = np.linalg.eigh(L.toarray())
        vals, vecs = vals[:d], vecs[:, :d]
    else:
        # Smallest of L = largest of 2I - L; avoids slow which="SM" iterations.
        rng = np.random.default_rng(seed)
        shifted = 2.0 * sparse.identity(g.n, format="csr") - L
        try:
            vals_s, vecs = eigsh(shifted, k=d, which="LM", v0=rng.random(g.n))
        except ArpackNoConvergence as exc:
            res = float(np.linalg.norm(exc.eigenvalues)) if exc.eigenvalues is not None else float("nan")
            raise EigenConvergenceError(res) from exc
        vals = 2.0 - vals_s
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
    norms = np.linalg.norm(vecs, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    return SpectralEmbedding(coordinates=vecs / norms, vectors=vecs, eigenvalues=vals)


class SpectralScorer(Scorer):
    name = "spectral"

    def __init__(self, d: int = 128, seed: int = 0):
        self.d = d
        self.seed = seed
        self.embedding: SpectralEmbedding | None = None

    def fit(self, g: SimpleGraph, hetero=None) -> None:
        d = min(self.d, g.n - 1)
        self.embedding = spectral_fit(g, d=d, seed=self.seed)

    def score(self, u: int, v: int) -> float:
        return self.embedding.score(u, v)
