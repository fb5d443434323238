import json
import os

import pytest
from fastapi.testclient import TestClient

from ontolink.embed import save_sparse_embedding
from ontolink.embed.snore import snore_fit, snore_score
from ontolink.projection import NodeMap
from ontolink.server import Session, create_app

from conftest import make_sbm


IRIS = None


def build_session(tmp_path, n=30, seed=3):
    g = make_sbm(n, 0.3, 0.03, seed=seed)
    names = [f"http://onto/term{i:03d}" for i in range(n)]
    nodes = NodeMap(names)
    emb = snore_fit(g, seed=42)
    emb.feature_names = list(names)
    return Session(
        graph=g,
        nodes=nodes,
        embedding=emb,
        journal_path=str(tmp_path / "journal.ndjson"),
        seed=42,
    )


@pytest.fixture
def session(tmp_path):
    return build_session(tmp_path)


@pytest.fixture
def client(session):
    return TestClient(create_app(session))


def test_stats_endpoint(client, session):
    r = client.get("/stats")
    assert r.status_code == 200
    blob = r.json()
    assert blob["n_nodes"] == session.graph.n
    assert blob["n_edges"] == session.graph.edge_count
    assert blob["embedding_stale"] is False
    assert blob["seed"] == 42


def test_nodes_search_and_pagination(client):
    r = client.get("/nodes", params={"q": "term00"})
    blob = r.json()
    assert blob["total"] == 10
    assert all("term00" in item["iri"] for item in blob["results"])
    page = client.get("/nodes", params={"q": "term0", "offset": 2, "limit": 3}).json()
    assert len(page["results"]) == 3
    assert page["results"][0] == blob["results"][2] or page["total"] >= 3
    empty = client.get("/nodes").json()
    assert empty["total"] == 0 and empty["results"] == []


def test_candidates_missing_and_redundant(client, session):
    r = client.get("/candidates", params={"kind": "missing", "k": 5})
    assert r.status_code == 200
    blob = r.json()
    assert blob["kind"] == "missing" and len(blob["candidates"]) == 5
    for c in blob["candidates"]:
        u = session.nodes.id_of(c["u"])
        v = session.nodes.id_of(c["v"])
        assert not session.graph.has_edge(u, v)
    red = client.get("/candidates", params={"kind": "redundant", "k": 5}).json()
    for c in red["candidates"]:
        u = session.nodes.id_of(c["u"])
        v = session.nodes.id_of(c["v"])
        assert session.graph.has_edge(u, v)


def test_candidates_bad_kind_is_400(client):
    r = client.get("/candidates", params={"kind": "bogus"})
    assert r.status_code == 400
    blob = r.json()
    assert blob["code"] == "bad_kind" and "message" in blob


def test_candidates_subset(client, session):
    target = session.nodes[0]
    r = client.get("/candidates", params={"kind": "missing", "k": 5, "nodes": target})
    assert r.status_code == 200
    for c in r.json()["candidates"]:
        assert target in (c["u"], c["v"])


def test_candidates_unknown_subset_node_404(client):
    r = client.get("/candidates", params={"kind": "missing", "nodes": "http://nope/x"})
    assert r.status_code == 404
    assert r.json()["code"] == "unknown_node"


def test_explain_local_sums_to_candidate_score(client, session):
    cand = client.get("/candidates", params={"kind": "missing", "k": 1}).json()[
        "candidates"
    ][0]
    r = client.get("/explain/local", params={"u": cand["u"], "v": cand["v"]})
    assert r.status_code == 200
    blob = r.json()
    total = sum(item["value"] for item in blob["contributions"])
    assert abs(total - blob["total"]) <= 1e-9
    assert abs(blob["total"] - cand["score"]) <= 1e-9


def test_explain_local_unknown_node_404(client):
    r = client.get("/explain/local", params={"u": "http://nope/x", "v": "http://nope/y"})
    assert r.status_code == 404


def test_explain_global(client):
    r = client.get("/explain/global", params={"top": 3})
    assert r.status_code == 200
    top = r.json()["top"]
    assert len(top) == 3
    for item in top:
        assert set(item) == {"feature", "beta", "se", "t"}


def test_feedback_accept_marks_stale_and_updates_graph(client, session):
    cand = client.get("/candidates", params={"kind": "missing", "k": 1}).json()[
        "candidates"
    ][0]
    r = client.post("/feedback", json={"accept": [{"u": cand["u"], "v": cand["v"]}]})
    assert r.status_code == 200
    blob = r.json()
    assert blob["applied"] == 1 and blob["errors"] == [] and blob["stale"] is True
    u = session.nodes.id_of(cand["u"])
    v = session.nodes.id_of(cand["v"])
    assert session.graph.has_edge(u, v)
    assert client.get("/stats").json()["embedding_stale"] is True
    # The accepted pair is no longer a missing candidate.
    after = client.get("/candidates", params={"kind": "missing", "k": 10}).json()
    pairs = {(c["u"], c["v"]) for c in after["candidates"]}
    assert (cand["u"], cand["v"]) not in pairs
    assert after["stale"] is True


def test_feedback_reject_removes_edge(client, session):
    u, v = next(iter(session.graph.edges()))
    r = client.post(
        "/feedback",
        json={"reject": [{"u": session.nodes[u], "v": session.nodes[v]}]},
    )
    assert r.status_code == 200
    assert not session.graph.has_edge(u, v)


def test_feedback_all_invalid_is_409(client, session):
    u, v = next(iter(session.graph.edges()))
    r = client.post(
        "/feedback",
        json={"accept": [{"u": session.nodes[u], "v": session.nodes[v]}]},
    )
    assert r.status_code == 409
    blob = r.json()
    assert blob["code"] == "feedback_rejected"
    assert blob["detail"][0]["reason"]


def test_feedback_partial_batch_applies_valid_entries(client, session):
    u, v = next(iter(session.graph.edges()))
    cand = client.get("/candidates", params={"kind": "missing", "k": 1}).json()[
        "candidates"
    ][0]
    r = client.post(
        "/feedback",
        json={
            "accept": [
                {"u": cand["u"], "v": cand["v"]},
                {"u": session.nodes[u], "v": session.nodes[v]},  # exists: error
            ]
        },
    )
    assert r.status_code == 200
    blob = r.json()
    assert blob["applied"] == 1 and len(blob["errors"]) == 1


def test_feedback_unknown_node_404(client):
    r = client.post("/feedback", json={"accept": [{"u": "http://nope/x", "v": "http://nope/y"}]})
    assert r.status_code == 404


def session_from_disk(tmp_path):
    """Round-trips graph and embedding through files so node ids come
    from the TSV load order, matching what journal replay assumes."""
    g = make_sbm(30, 0.3, 0.03, seed=3)
    hetero_path = tmp_path / "graph.tsv"
    with open(hetero_path, "w") as f:
        for u, v in g.edges():
            f.write(f"http://onto/term{u:03d}\trel\thttp://onto/term{v:03d}\n")
    from ontolink.projection import load_graph_tsv

    g2, nodes, _ = load_graph_tsv(str(hetero_path))
    emb = snore_fit(g2, seed=42)
    emb.feature_names = list(nodes.names)
    epath = tmp_path / "emb.bin"
    save_sparse_embedding(emb, str(epath))
    return str(hetero_path), str(epath), str(tmp_path / "journal.ndjson")


def test_journal_persists_and_replays(tmp_path):
    gpath, epath, jpath = session_from_disk(tmp_path)
    session = Session.load(graph_path=gpath, embedding_path=epath, journal_path=jpath)
    client = TestClient(create_app(session))
    cand = client.get("/candidates", params={"kind": "missing", "k": 2}).json()[
        "candidates"
    ]
    for c in cand:
        client.post("/feedback", json={"accept": [{"u": c["u"], "v": c["v"]}]})
    entries = client.get("/journal").json()["entries"]
    assert len(entries) == 2
    assert all(e["action"] == "accept" for e in entries)

    # On-disk NDJSON matches the in-memory journal.
    lines = open(jpath).read().strip().splitlines()
    assert [json.loads(l) for l in lines] == entries

    # A fresh session replaying the journal reproduces the working graph.
    restored = Session.load(graph_path=gpath, embedding_path=epath, journal_path=jpath)
    assert restored.stale is True
    assert len(restored.journal) == 2
    assert set(restored.graph.edges()) == set(session.graph.edges())
    for e in entries:
        assert restored.graph.has_edge(e["u"], e["v"])


def test_reembed_clears_stale(client, session):
    cand = client.get("/candidates", params={"kind": "missing", "k": 1}).json()[
        "candidates"
    ][0]
    client.post("/feedback", json={"accept": [{"u": cand["u"], "v": cand["v"]}]})
    assert client.get("/stats").json()["embedding_stale"] is True
    old_nnz = session.embedding.nnz
    r = client.post("/reembed")
    assert r.status_code == 200
    assert r.json()["stale"] is False
    assert client.get("/stats").json()["embedding_stale"] is False
    # The refit embedding reflects the accepted edge.
    u = session.nodes.id_of(cand["u"])
    v = session.nodes.id_of(cand["v"])
    assert snore_score(session.embedding, u, v) > 0.0


def test_responses_match_shared_api_schema(client):
    """Every endpoint response carries the keys listed in api-schema.json.

    The frontend test suite validates its client types against the same
    document, so this is the contract both components agree on.
    """
    schema_path = os.path.join(os.path.dirname(__file__), "..", "api-schema.json")
    with open(schema_path, encoding="utf-8") as f:
        schema = json.load(f)["endpoints"]

    def check(name, body, items=()):
        for key in schema[name]["required"]:
            assert key in body, f"{name} missing {key}"
        for item in items:
            for key in schema[name].get("item", []):
                assert key in item, f"{name} item missing {key}"

    stats = client.get("/stats").json()
    check("GET /stats", stats)

    nodes = client.get("/nodes", params={"q": "term0"}).json()
    check("GET /nodes", nodes, nodes["results"])

    cands = client.get("/candidates", params={"kind": "missing", "k": 3}).json()
    check("GET /candidates", cands, cands["candidates"])

    top = cands["candidates"][0]
    local = client.get("/explain/local", params={"u": top["u"], "v": top["v"]}).json()
    check("GET /explain/local", local, local["contributions"])

    glob = client.get("/explain/global", params={"top": 5}).json()
    check("GET /explain/global", glob, glob["top"])

    fb = client.post(
        "/feedback", json={"accept": [{"u": top["u"], "v": top["v"]}], "reject": []}
    ).json()
    check("POST /feedback", fb, fb["errors"])

    check("GET /journal", client.get("/journal").json())

    err = client.get("/explain/local", params={"u": "http://nope", "v": top["v"]})
    assert err.status_code == 404
    check("error", err.json())

    re = client.post("/reembed").json()
    check("POST /reembed", re)


def test_static_bundle_mounting(session, tmp_path):
    static = tmp_path / "dist"
    static.mkdir()
    (static / "index.html").write_text("<html><body>workbench</body></html>")
    client = TestClient(create_app(session, static_dir=str(static)))
    assert "workbench" in client.get("/").text
    assert "workbench" in client.get("/ui/").text
