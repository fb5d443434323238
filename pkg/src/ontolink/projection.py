"""Ontology triple store -> heterogeneous multigraph -> undirected simple graph.

Two conversion modes:
  raw   -- every stored triple becomes an edge; blank nodes become ordinary
           nodes (faithful RDF-triple form).
  rules -- projection rules approximate OWL axioms as direct labeled edges
           between named entities; blank restriction/set-expression nodes
           are traversed and eliminated.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graphcore import SimpleGraph
from .triples import (
    OWL_ALL_VALUES_FROM,
    OWL_COMPLEMENT_OF,
    OWL_EQUIVALENT_CLASS,
    OWL_INTERSECTION_OF,
    OWL_ON_PROPERTY,
    OWL_RESTRICTION,
    OWL_SOME_VALUES_FROM,
    OWL_UNION_OF,
    RDF_FIRST,
    RDF_NIL,
    RDF_REST,
    RDF_TYPE,
    RDFS_SUBCLASSOF,
    RESERVED_PREFIXES,
    Term,
    TermKind,
    Triple,
    TripleStore,
)


class CyclicExpressionError(ValueError):
    def __init__(self, node: str):
        super().__init__(f"cyclic blank-node expression at {node}")
        self.node = node


def _is_vocab(predicate: str) -> bool:
    return predicate.startswith(RESERVED_PREFIXES)


def _term_key(t: Term) -> str:
    return str(t)


@dataclass
class ProjectionTallies:
    """Per-triple accounting; consumed + dropped + passthrough == input size."""

    passthrough: int = 0  # triples that directly became edges
    consumed: int = 0  # blank-node support triples absorbed by rule R2
    dropped_blank: int = 0  # blank-node triples no rule consumed
    dropped_vocab: int = 0  # reserved-vocabulary triples with no projection
    malformed_restrictions: int = 0  # restriction missing onProperty/filler

    @property
    def dropped(self) -> int:
        return self.dropped_blank + self.dropped_vocab

    def total(self) -> int:
        return self.passthrough + self.consumed + self.dropped


class HeteroGraph:
    """Directed labeled multigraph with interned node and predicate ids."""

    def __init__(self):
        self.node_names: list[str] = []
        self._node_ids: dict[str, int] = {}
        self.pred_names: list[str] = []
        self._pred_ids: dict[str, int] = {}
        self.edges: list[tuple[int, int, int]] = []  # (s, p, o)
        self.tallies = ProjectionTallies()

    def node_id(self, name: str) -> int:
        idx = self._node_ids.get(name)
        if idx is None:
            idx = len(self.node_names)
            self._node_ids[name] = idx
            self.node_names.append(name)
        return idx

    def pred_id(self, name: str) -> int:
        idx = self._pred_ids.get(name)
        if idx is None:
            idx = len(self.pred_names)
            self._pred_ids[name] = idx
            self.pred_names.append(name)
        return idx

    def add_edge(self, s: str, p: str, o: str) -> None:
        self.edges.append((self.node_id(s), self.pred_id(p), self.node_id(o)))

    @property
    def n_nodes(self) -> int:
        return len(self.node_names)

    def has_blank_nodes(self) -> bool:
        return any(name.startswith("_:") for name in self.node_names)


@dataclass
class NodeMap:
    """id <-> IRI mapping carried alongside a collapsed SimpleGraph."""

    names: list[str]

    def id_of(self, name: str) -> int | None:
        if not hasattr(self, "_index"):
            self._index = {n: i for i, n in enumerate(self.names)}
        return self._index.get(name)

    def __getitem__(self, idx: int) -> str:
        return self.names[idx]

    def __len__(self) -> int:
        return len(self.names)


class _RulesProjector:
    def __init__(self, store: TripleStore):
        self.store = store
        self.by_subject: dict[Term, list[Triple]] = {}
        for t in store:
            self.by_subject.setdefault(t.s, []).append(t)
        self.consumed: set[Triple] = set()
        self.graph = HeteroGraph()
        self.tallies = self.graph.tallies

    def _subject_map(self, node: Term) -> dict[str, list[Triple]]:
        out: dict[str, list[Triple]] = {}
        for t in self.by_subject.get(node, ()):
            out.setdefault(t.p, []).append(t)
        return out

    def _walk_list(self, head: Term, visited: set[Term]) -> list[Term]:
        """Traverse an RDF collection, returning its member terms."""
        items: list[Term] = []
        node = head
        while True:
            if node.kind is TermKind.IRI and node.value == RDF_NIL:
                return items
            if node in visited:
                raise CyclicExpressionError(_term_key(node))
            visited.add(node)
            props = self._subject_map(node)
            firsts = props.get(RDF_FIRST, [])
            rests = props.get(RDF_REST, [])
            if not firsts or not rests:
                return items  # truncated list; keep what we saw
            self.consumed.update(firsts)
            self.consumed.update(rests)
            items.append(firsts[0].o)
            node = rests[0].o

    def _resolve_classes(self, term: Term, visited: set[Term]) -> list[str]:
        """Named classes reachable from a filler through set expressions and
        nested restrictions."""
        if term.kind is TermKind.IRI:
            return [term.value]
        if term in visited:
            raise CyclicExpressionError(_term_key(term))
        visited.add(term)
        props = self._subject_map(term)
        out: list[str] = []
        handled = False
        for list_pred in (OWL_UNION_OF, OWL_INTERSECTION_OF):
            for t in props.get(list_pred, ()):
                self.consumed.add(t)
                handled = True
                for member in self._walk_list(t.o, visited):
                    out.extend(self._resolve_classes(member, visited))
        if props.get(OWL_COMPLEMENT_OF):
            # Negative constraint: consume, emit nothing.
            for t in props[OWL_COMPLEMENT_OF]:
                self.consumed.add(t)
            handled = True
        if self._is_restriction(props):
            nested = self._consume_restriction(term, props)
            handled = True
            if nested is not None:
                _, filler = nested
                out.extend(self._resolve_classes(filler, visited))
        if not handled:
            # Unknown blank expression: its triples stay unconsumed.
            visited.discard(term)
        # Stable de-dup.
        seen: set[str] = set()
        unique = []
        for c in out:
            if c not in seen:
                seen.add(c)
                unique.append(c)
        return unique

    @staticmethod
    def _is_restriction(props: dict[str, list[Triple]]) -> bool:
        return any(
            t.o.kind is TermKind.IRI and t.o.value == OWL_RESTRICTION
            for t in props.get(RDF_TYPE, ())
        )

    def _consume_restriction(
        self, node: Term, props: dict[str, list[Triple]]
    ) -> tuple[str, Term] | None:
        """Marks the restriction's support triples consumed; returns
        (property IRI, filler term) or None when malformed."""
        for t in props.get(RDF_TYPE, ()):
            if t.o.kind is TermKind.IRI and t.o.value == OWL_RESTRICTION:
                self.consumed.add(t)
        on_prop = props.get(OWL_ON_PROPERTY, [])
        fillers = props.get(OWL_SOME_VALUES_FROM, []) + props.get(OWL_ALL_VALUES_FROM, [])
        self.consumed.update(on_prop)
        self.consumed.update(fillers)
        if not on_prop or not fillers or on_prop[0].o.is_blank:
            self.tallies.malformed_restrictions += 1
            return None
        return on_prop[0].o.value, fillers[0].o

    def _project_blank_object(self, subject: Term, predicate: str, obj: Term) -> bool:
        """Rule R2: subClassOf/equivalentClass pointing at a blank class
        expression. Returns True when the trigger triple was handled."""
        visited: set[Term] = {obj}
        props = self._subject_map(obj)
        emitted_any = False
        if self._is_restriction(props):
            resolved = self._consume_restriction(obj, props)
            if resolved is None:
                return True  # malformed but consumed; tallied above
            prop_iri, filler = resolved
            for c in self._resolve_classes(filler, visited):
                self.graph.add_edge(subject.value, prop_iri, c)
                emitted_any = True
            if not emitted_any:
                self.tallies.malformed_restrictions += 1
            return True
        # Set expression: keep the original axiom predicate as the label.
        classes: list[str] = []
        handled = False
        for list_pred in (OWL_UNION_OF, OWL_INTERSECTION_OF):
            for t in props.get(list_pred, ()):
                self.consumed.add(t)
                handled = True
                for member in self._walk_list(t.o, visited):
                    classes.extend(self._resolve_classes(member, visited))
        if props.get(OWL_COMPLEMENT_OF):
            for t in props[OWL_COMPLEMENT_OF]:
                self.consumed.add(t)
            handled = True
        for c in classes:
            self.graph.add_edge(subject.value, predicate, c)
        return handled

    def run(self) -> HeteroGraph:
        emitted_triggers: set[Triple] = set()
        for t in self.store:
            s_named = not t.s.is_blank
            o_named = not t.o.is_blank
            if t.p in (RDFS_SUBCLASSOF, OWL_EQUIVALENT_CLASS):
                if s_named and o_named:
                    # R1 / R5: direct subsumption or equivalence edge.
                    self.graph.add_edge(t.s.value, t.p, t.o.value)
                    emitted_triggers.add(t)
                elif s_named and t.o.is_blank:
                    if self._project_blank_object(t.s, t.p, t.o):
                        emitted_triggers.add(t)
            elif t.p == RDF_TYPE:
                # R3: membership edge unless the object is reserved vocabulary.
                if s_named and o_named and not _is_vocab(t.o.value):
                    self.graph.add_edge(t.s.value, t.p, t.o.value)
                    emitted_triggers.add(t)
            elif not _is_vocab(t.p):
                # R4: plain object-property assertion between named terms.
                if s_named and o_named:
                    self.graph.add_edge(t.s.value, t.p, t.o.value)
                    emitted_triggers.add(t)

        for t in self.store:
            if t in emitted_triggers:
                self.tallies.passthrough += 1
            elif t in self.consumed:
                self.tallies.consumed += 1
            elif t.s.is_blank or t.o.is_blank:
                self.tallies.dropped_blank += 1
            else:
                self.tallies.dropped_vocab += 1
        assert self.tallies.total() == len(self.store)
        return self.graph


def project(store: TripleStore, mode: str = "rules") -> HeteroGraph:
    if mode == "raw":
        g = HeteroGraph()
        for t in store:
            s = t.s.value if not t.s.is_blank else "_:" + t.s.value
            o = t.o.value if not t.o.is_blank else "_:" + t.o.value
            g.add_edge(s, t.p, o)
        g.tallies.passthrough = len(store)
        return g
    if mode == "rules":
        return _RulesProjector(store).run()
    raise ValueError(f"unknown projection mode: {mode!r}")


def collapse(h: HeteroGraph) -> tuple[SimpleGraph, NodeMap]:
    """Drop direction, labels, self-loops, and parallel edges: {o,s} in E
    iff some predicate connects them."""
    edges = {(s, o) if s < o else (o, s) for s, _, o in h.edges if s != o}
    g = SimpleGraph(h.n_nodes, edges)
    return g, NodeMap(list(h.node_names))


def write_hetero_tsv(h: HeteroGraph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for s, p, o in h.edges:
            f.write(f"{h.node_names[s]}\t{h.pred_names[p]}\t{h.node_names[o]}\n")


def write_simple_tsv(g: SimpleGraph, nodes: NodeMap, path: str, nodes_path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for u, v in g.edges():
            f.write(f"{u}\t{v}\n")
    with open(nodes_path, "w", encoding="utf-8") as f:
        for i, name in enumerate(nodes.names):
            f.write(f"{i}\t{name}\n")


def read_hetero_tsv(path: str) -> HeteroGraph:
    g = HeteroGraph()
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\n")
            if not line:
                continue
            s, p, o = line.split("\t")
            g.add_edge(s, p, o)
    g.tallies.passthrough = len(g.edges)
    return g


def load_graph_tsv(path: str) -> tuple[SimpleGraph, NodeMap, HeteroGraph]:
    """Reads a hetero TSV and returns its undirected collapse as well."""
    h = read_hetero_tsv(path)
    g, nodes = collapse(h)
    return g, nodes, h
