"""Deterministic binary serialization for fitted embeddings.

Layout: one UTF-8 JSON header line, then raw little-endian array payloads in
the order named by the header. No timestamps, so identical fits produce
byte-identical files.
"""

from __future__ import annotations

import json

import numpy as np
from scipy import sparse

from .snore import SparseEmbedding

MAGIC = "ontolink-embedding"


def save_sparse_embedding(emb: SparseEmbedding, path: str) -> None:
    header = {
        "magic": MAGIC,
        "format": "row-sparse",
        "n": emb.matrix.shape[0],
        "n_features": emb.matrix.shape[1],
        "nnz": int(emb.matrix.nnz),
        "params": emb.params,
        "seed": emb.seed,
        "feature_names": emb.feature_names,
    }
    with open(path, "wb") as f:
        f.write((json.dumps(header, sort_keys=True) + "\n").encode("utf-8"))
        f.write(emb.matrix.indptr.astype("<i8").tobytes())
        f.write(emb.matrix.indices.astype("<i8").tobytes())
        f.write(emb.matrix.data.astype("<f8").tobytes())


def load_sparse_embedding(path: str) -> SparseEmbedding:
    with open(path, "rb") as f:
        header = json.loads(f.readline().decode("utf-8"))
        if header.get("magic") != MAGIC or header.get("format") != "row-sparse":
            raise ValueError(f"not a row-sparse embedding file: {path}")
        n, nf, nnz = header["n"], header["n_features"], header["nnz"]
        indptr = np.frombuffer(f.read(8 * (n + 1)), dtype="<i8")
        indices = np.frombuffer(f.read(8 * nnz), dtype="<i8")
        data = np.frombuffer(f.read(8 * nnz), dtype="<f8")
    matrix = sparse.csr_matrix((data.copy(), indices.copy(), indptr.copy()), shape=(n, nf))
    return SparseEmbedding(
        matrix=matrix,
        feature_names=header.get("feature_names"),
        params=header.get("params", {}),
        seed=header.get("seed"),
    )


def export_text(emb: SparseEmbedding, path: str) -> None:
    """node<TAB>feature<TAB>value rows for inspection."""
    names = emb.feature_names
    with open(path, "w", encoding="utf-8") as f:
        for u in range(emb.n):
            cols, vals = emb.row(u)
            u_name = names[u] if names else str(u)
            for c, val in zip(cols, vals):
                c_name = names[c] if names else str(c)
                f.write(f"{u_name}\t{c_name}\t{val!r}\n")
