import numpy as np
import pytest

from ontolink.graphcore import SimpleGraph
from ontolink.triples import parse_document

PECAN_NT = """\
<http://x/pecan_pie> <http://www.w3.org/2000/01/rdf-schema#subClassOf> _:x .
_:x <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://www.w3.org/2002/07/owl#Restriction> .
_:x <http://www.w3.org/2002/07/owl#onProperty> <http://x/HasIngredient> .
_:x <http://www.w3.org/2002/07/owl#someValuesFrom> <http://x/sugar> .
"""


@pytest.fixture
def pecan_store():
    return parse_document(PECAN_NT)


def make_sbm(n=200, p_in=0.1, p_out=0.005, seed=42) -> SimpleGraph:
    """Two-community stochastic block model."""
    rng = np.random.default_rng(seed)
    half = n // 2
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            p = p_in if (u < half) == (v < half) else p_out
            if rng.random() < p:
                edges.append((u, v))
    return SimpleGraph(n, edges)


def make_ba(n=300, m=3, seed=42) -> SimpleGraph:
    """Barabasi-Albert preferential attachment."""
    rng = np.random.default_rng(seed)
    edges = [(0, 1), (0, 2), (1, 2)]
    targets = [0, 1, 2, 0, 1, 2]
    for u in range(3, n):
        chosen = set()
        while len(chosen) < m:
            chosen.add(targets[rng.integers(0, len(targets))])
        for v in chosen:
            edges.append((u, v))
            targets += [u, v]
    return SimpleGraph(n, edges)


def make_random_graph(rng, max_n=100) -> SimpleGraph:
    n = int(rng.integers(5, max_n + 1))
    p = rng.uniform(0.05, 0.5)
    mask = rng.random((n, n)) < p
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if mask[u, v]]
    return SimpleGraph(n, edges)


def make_go_scale_fixture(n=40000, extra=60000, seed=42) -> SimpleGraph:
    """Synthetic graph at Gene-Ontology scale: random tree plus shortcuts."""
    rng = np.random.default_rng(seed)
    edges = [(int(rng.integers(0, i)), i) for i in range(1, n)]
    pairs = rng.integers(0, n, size=(extra, 2))
    edges += [(int(u), int(v)) for u, v in pairs if u != v]
    return SimpleGraph(n, edges)


@pytest.fixture(scope="session")
def sbm_500():
    return make_sbm(n=500, p_in=0.1, p_out=0.005, seed=42)


@pytest.fixture(scope="session")
def sbm_200():
    return make_sbm(n=200, p_in=0.1, p_out=0.005, seed=42)
