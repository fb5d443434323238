"""HTTP service for the interactive annotation-assistant workflow.

The curator searches nodes, fetches ranked missing/redundant candidates
(optionally restricted to selected nodes), inspects explanations, and
accepts/rejects edges. Feedback mutates the working graph and marks the
embedding stale; refitting is explicit (POST /reembed) because the
embedding is the expensive step and can be done offline.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import FileResponse, JSONResponse
from pydantic import BaseModel

from . import explain, projection, recommend
from .embed import load_sparse_embedding, snore_fit
from .embed.snore import SparseEmbedding
from .graphcore import SimpleGraph
from .projection import NodeMap


class EdgePayload(BaseModel):
    u: str
    v: str


class FeedbackPayload(BaseModel):
    accept: list[EdgePayload] = []
    reject: list[EdgePayload] = []


@dataclass
class Session:
    """Working graph + embedding + append-only feedback journal.

    The journal replays deterministically onto the loaded snapshot; the
    working graph is derived state. Reads are lock-free on immutable
    snapshots; writes swap them atomically under a single writer lock.
    """

    graph: SimpleGraph
    nodes: NodeMap
    embedding: SparseEmbedding
    journal_path: str
    seed: int = 42
    stale: bool = False
    journal: list[dict] = field(default_factory=list)
    _write_lock: threading.Lock = field(default_factory=threading.Lock, repr=False)
    _reembedding: bool = field(default=False, repr=False)

    @classmethod
    def load(cls, graph_path: str, embedding_path: str, journal_path: str, seed: int = 42):
        g, nodes, _ = projection.load_graph_tsv(graph_path)
        emb = load_sparse_embedding(embedding_path)
        if emb.feature_names is None:
            emb.feature_names = list(nodes.names)
        session = cls(
            graph=g, nodes=nodes, embedding=emb, journal_path=journal_path, seed=seed
        )
        if os.path.exists(journal_path):
            with open(journal_path, encoding="utf-8") as f:
                for line in f:
                    if line.strip():
                        session._replay(json.loads(line))
        return session

    def _replay(self, entry: dict) -> None:
        pair = [(entry["u"], entry["v"])]
        if entry["action"] == "accept":
            self.graph = self.graph.with_edges_changed(add=pair)
        else:
            self.graph = self.graph.with_edges_changed(remove=pair)
        self.journal.append(entry)
        self.stale = True

    def _append_journal(self, entries: list[recommend.JournalEntry]) -> None:
        with open(self.journal_path, "a", encoding="utf-8") as f:
            for e in entries:
                d = e.to_dict()
                f.write(json.dumps(d) + "\n")
                self.journal.append(d)


def create_app(session: Session, static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="ontolink annotation assistant")

    def err(status: int, code: str, message: str, detail=None):
        payload = {"code": code, "message": message}
        if detail is not None:
            payload["detail"] = detail
        raise HTTPException(status_code=status, detail=payload)

    def node_id_or_404(iri: str) -> int:
        idx = session.nodes.id_of(iri)
        if idx is None:
            err(404, "unknown_node", f"unknown node IRI: {iri}")
        return idx

    @app.get("/stats")
    def stats():
        return {
            "n_nodes": session.graph.n,
            "n_edges": session.graph.edge_count,
            "embedding_nnz": session.embedding.nnz,
            "embedding_stale": session.stale,
            "journal_entries": len(session.journal),
            "seed": session.seed,
        }

    @app.get("/nodes")
    def nodes(q: str = Query(""), offset: int = 0, limit: int = 50):
        matches = []
        if q:
            needle = q.lower()
            for i, name in enumerate(session.nodes.names):
                if needle in name.lower():
                    matches.append({"id": i, "iri": name})
        return {
            "total": len(matches),
            "offset": offset,
            "results": matches[offset : offset + limit],
        }

    @app.get("/candidates")
    def get_candidates(
        kind: str = Query("missing"), k: int = 10, nodes: str | None = None
    ):
        if kind not in ("missing", "redundant"):
            err(400, "bad_kind", "kind must be 'missing' or 'redundant'")
        subset = None
        if nodes:
            subset = [node_id_or_404(iri) for iri in nodes.split(",")]
        graph, emb = session.graph, session.embedding
        missing, redundant = recommend.candidates(emb, graph, k, subset=subset)
        chosen = missing if kind == "missing" else redundant
        return {
            "kind": kind,
            "k": k,
            "stale": session.stale,
            "candidates": [
                {
                    "u": session.nodes[c.u],
                    "v": session.nodes[c.v],
                    "score": c.score,
                    "kind": c.kind,
                }
                for c in chosen
            ],
        }

    @app.get("/explain/local")
    def explain_local_endpoint(u: str, v: str):
        ui, vi = node_id_or_404(u), node_id_or_404(v)
        local = explain.explain_local(session.embedding, ui, vi)
        return local.to_dict(names=session.embedding.feature_names)

    @app.get("/explain/global")
    def explain_global_endpoint(top: int = 10):
        result = explain.explain_global(session.embedding, session.graph, seed=session.seed)
        return {"top": result.top(top)}

    @app.post("/feedback")
    def feedback(payload: FeedbackPayload):
        if session._reembedding:
            err(503, "reembedding", "re-embedding in progress; retry later")
        with session._write_lock:
            accept = [(node_id_or_404(e.u), node_id_or_404(e.v)) for e in payload.accept]
            reject = [(node_id_or_404(e.u), node_id_or_404(e.v)) for e in payload.reject]
            new_graph, journal, errors = recommend.apply_feedback(
                session.graph, accept, reject
            )
            if errors and not journal:
                err(
                    409,
                    "feedback_rejected",
                    "no valid mutations in batch",
                    detail=[
                        {
                            "u": session.nodes[e.u],
                            "v": session.nodes[e.v],
                            "action": e.action,
                            "reason": e.reason,
                        }
                        for e in errors
                    ],
                )
            session._append_journal(journal)
            # Atomic swap: readers see either the old or the new graph.
            session.graph = new_graph
            if journal:
                session.stale = True
        return {
            "applied": len(journal),
            "errors": [
                {
                    "u": session.nodes[e.u],
                    "v": session.nodes[e.v],
                    "action": e.action,
                    "reason": e.reason,
                }
                for e in errors
            ],
            "stale": session.stale,
        }

    @app.post("/reembed")
    def reembed():
        if session._reembedding:
            err(503, "reembedding", "re-embedding already in progress")
        with session._write_lock:
            session._reembedding = True
        try:
            params = dict(session.embedding.params)
            emb = snore_fit(session.graph, seed=session.seed, **params)
            emb.feature_names = session.embedding.feature_names
            with session._write_lock:
                session.embedding = emb
                session.stale = False
        finally:
            session._reembedding = False
        return {"stale": session.stale, "nnz": session.embedding.nnz}

    @app.get("/journal")
    def journal():
        return {"entries": session.journal}

    if static_dir and os.path.isdir(static_dir):
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=static_dir, html=True), name="ui")

        @app.get("/")
        def index():
            return FileResponse(os.path.join(static_dir, "index.html"))

    @app.exception_handler(HTTPException)
    async def http_error_handler(request, exc: HTTPException):
        detail = exc.detail
        if not isinstance(detail, dict):
            detail = {"code": "error", "message": str(detail)}
        return JSONResponse(status_code=exc.status_code, content=detail)

    return app
