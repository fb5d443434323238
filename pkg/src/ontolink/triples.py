"""Line-oriented RDF triple parsing into an interned triple store.

Only IRI- and blank-node-valued objects are kept; statements whose object is
a literal are counted and discarded, since every downstream consumer is
structure-only.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum

RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
RDF_FIRST = "http://www.w3.org/1999/02/22-rdf-syntax-ns#first"
RDF_REST = "http://www.w3.org/1999/02/22-rdf-syntax-ns#rest"
RDF_NIL = "http://www.w3.org/1999/02/22-rdf-syntax-ns#nil"
RDFS_SUBCLASSOF = "http://www.w3.org/2000/01/rdf-schema#subClassOf"
RDFS_DOMAIN = "http://www.w3.org/2000/01/rdf-schema#domain"
RDFS_RANGE = "http://www.w3.org/2000/01/rdf-schema#range"
OWL_RESTRICTION = "http://www.w3.org/2002/07/owl#Restriction"
OWL_ON_PROPERTY = "http://www.w3.org/2002/07/owl#onProperty"
OWL_SOME_VALUES_FROM = "http://www.w3.org/2002/07/owl#someValuesFrom"
OWL_ALL_VALUES_FROM = "http://www.w3.org/2002/07/owl#allValuesFrom"
OWL_UNION_OF = "http://www.w3.org/2002/07/owl#unionOf"
OWL_INTERSECTION_OF = "http://www.w3.org/2002/07/owl#intersectionOf"
OWL_COMPLEMENT_OF = "http://www.w3.org/2002/07/owl#complementOf"
OWL_EQUIVALENT_CLASS = "http://www.w3.org/2002/07/owl#equivalentClass"

RESERVED_PREFIXES = (
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "http://www.w3.org/2000/01/rdf-schema#",
    "http://www.w3.org/2002/07/owl#",
)


class TermKind(Enum):
    IRI = "iri"
    BLANK = "blank"


@dataclass(frozen=True, order=True)
class Term:
    kind: TermKind
    value: str

    def __post_init__(self):
        if not self.value:
            raise ValueError("empty term value")

    @property
    def is_blank(self) -> bool:
        return self.kind is TermKind.BLANK

    def __str__(self) -> str:
        if self.kind is TermKind.BLANK:
            return "_:" + self.value
        return "<" + self.value + ">"


def iri(value: str) -> Term:
    return Term(TermKind.IRI, value)


def blank(label: str) -> Term:
    return Term(TermKind.BLANK, label)


@dataclass(frozen=True, order=True)
class Triple:
    s: Term
    p: str  # predicate IRI text; never blank
    o: Term


class ParseError(ValueError):
    def __init__(self, message: str, line_no: int, offset: int):
        super().__init__(f"line {line_no}, offset {offset}: {message}")
        self.line_no = line_no
        self.offset = offset


class Interner:
    """Dense bijection between term keys and integer ids."""

    def __init__(self):
        self._by_key: dict[str, int] = {}
        self._by_id: list[str] = []

    def intern(self, key: str) -> int:
        idx = self._by_key.get(key)
        if idx is None:
            idx = len(self._by_id)
            self._by_key[key] = idx
            self._by_id.append(key)
        return idx

    def lookup(self, idx: int) -> str:
        return self._by_id[idx]

    def get(self, key: str) -> int | None:
        return self._by_key.get(key)

    def __len__(self) -> int:
        return len(self._by_id)


@dataclass
class StatsReport:
    n_triples: int = 0
    n_terms: int = 0
    n_predicates: int = 0
    n_blank_nodes: int = 0
    n_subsumption: int = 0
    n_restriction_nodes: int = 0
    dropped_literals: int = 0

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True)


class TripleStore:
    """Deduplicated, ordered set of triples with a shared term interner.

    Immutable once parsing finishes; safe to share across threads.
    """

    def __init__(self):
        self.interner = Interner()
        self.triples: list[Triple] = []
        self._seen: set[Triple] = set()
        self.predicate_counts: dict[str, int] = {}
        self.dropped_literals = 0

    def add(self, t: Triple) -> bool:
        if t in self._seen:
            return False
        self._seen.add(t)
        self.triples.append(t)
        self.interner.intern(str(t.s))
        self.interner.intern(str(t.o))
        self.predicate_counts[t.p] = self.predicate_counts.get(t.p, 0) + 1
        return True

    def __contains__(self, t: Triple) -> bool:
        return t in self._seen

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self):
        return iter(self.triples)

    def __eq__(self, other) -> bool:
        return isinstance(other, TripleStore) and self._seen == other._seen

    def serialize(self) -> str:
        lines = []
        for t in self.triples:
            lines.append(f"{t.s} <{t.p}> {t.o} .")
        return "\n".join(lines) + ("\n" if lines else "")


_UNICODE_ESC = re.compile(r"\\u([0-9A-Fa-f]{4})|\\U([0-9A-Fa-f]{8})")


def _unescape(text: str) -> str:
    def sub(m: re.Match) -> str:
        code = m.group(1) or m.group(2)
        return chr(int(code, 16))

    return _UNICODE_ESC.sub(sub, text)


class _LineParser:
    """Hand-rolled N-Triples term scanner; tracks byte offsets for errors."""

    def __init__(self, line: str, line_no: int):
        self.line = line
        self.line_no = line_no
        self.pos = 0

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line_no, self.pos)

    def skip_ws(self):
        while self.pos < len(self.line) and self.line[self.pos] in " \t":
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.line)

    def expect_dot(self):
        self.skip_ws()
        if self.pos >= len(self.line) or self.line[self.pos] != ".":
            raise self.error("expected terminating '.'")
        self.pos += 1
        self.skip_ws()
        if self.pos < len(self.line) and not self.line[self.pos :].startswith("#"):
            raise self.error("trailing content after '.'")

    def parse_iri(self) -> str:
        end = self.line.find(">", self.pos + 1)
        if end < 0:
            raise self.error("unterminated IRI")
        raw = self.line[self.pos + 1 : end]
        if any(c in raw for c in " <\"{}|^`"):
            raise self.error(f"illegal character in IRI <{raw}>")
        self.pos = end + 1
        value = _unescape(raw)
        if not value:
            raise self.error("empty IRI")
        return value

    def parse_blank(self) -> str:
        m = re.match(r"_:([A-Za-z0-9._-]+)", self.line[self.pos :])
        if not m:
            raise self.error("malformed blank node label")
        self.pos += m.end()
        return m.group(1)

    def parse_literal(self) -> None:
        # Scan past a quoted literal with escapes plus optional ^^type / @lang.
        assert self.line[self.pos] == '"'
        i = self.pos + 1
        while i < len(self.line):
            c = self.line[i]
            if c == "\\":
                i += 2
                continue
            if c == '"':
                break
            i += 1
        else:
            raise self.error("unterminated quoted literal")
        if i >= len(self.line):
            raise self.error("unterminated quoted literal")
        self.pos = i + 1
        rest = self.line[self.pos :]
        if rest.startswith("^^"):
            self.pos += 2
            self.skip_ws()
            if self.pos >= len(self.line) or self.line[self.pos] != "<":
                raise self.error("expected datatype IRI after ^^")
            self.parse_iri()
        elif rest.startswith("@"):
            m = re.match(r"@[A-Za-z0-9-]+", rest)
            if not m:
                raise self.error("malformed language tag")
            self.pos += m.end()

    def parse_subject(self) -> Term:
        self.skip_ws()
        if self.pos >= len(self.line):
            raise self.error("missing subject")
        c = self.line[self.pos]
        if c == "<":
            return iri(self.parse_iri())
        if c == "_":
            return blank(self.parse_blank())
        raise self.error("subject must be an IRI or blank node")

    def parse_predicate(self) -> str:
        self.skip_ws()
        if self.pos >= len(self.line) or self.line[self.pos] != "<":
            raise self.error("predicate must be an IRI")
        return self.parse_iri()

    def parse_object(self) -> Term | None:
        """Returns None for literal objects (dropped by the caller)."""
        self.skip_ws()
        if self.pos >= len(self.line):
            raise self.error("missing object")
        c = self.line[self.pos]
        if c == "<":
            return iri(self.parse_iri())
        if c == "_":
            return blank(self.parse_blank())
        if c == '"':
            self.parse_literal()
            return None
        raise self.error("object must be an IRI, blank node, or literal")


def parse_document(data: bytes | str, base: str | None = None) -> TripleStore:
    """Parse N-Triples text into a deduplicated TripleStore.

    Literal-object statements are dropped (counted in ``dropped_literals``).
    Blank-node labels are renamed to document-scoped fresh ids in order of
    first appearance, so loading two documents never aliases their blanks.
    """
    if isinstance(data, bytes):
        text = data.decode("utf-8")
    else:
        text = data
    store = TripleStore()
    blank_map: dict[str, str] = {}

    def fresh_blank(label: str) -> Term:
        renamed = blank_map.get(label)
        if renamed is None:
            renamed = f"b{len(blank_map)}"
            blank_map[label] = renamed
        return blank(renamed)

    for line_no, line in enumerate(text.split("\n"), start=1):
        line = line.rstrip("\r")
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        lp = _LineParser(line, line_no)
        s = lp.parse_subject()
        p = lp.parse_predicate()
        o = lp.parse_object()
        lp.expect_dot()
        if o is None:
            store.dropped_literals += 1
            continue
        if s.is_blank:
            s = fresh_blank(s.value)
        if o.is_blank:
            o = fresh_blank(o.value)
        store.add(Triple(s, p, o))
    return store


def stats(store: TripleStore) -> StatsReport:
    terms: set[Term] = set()
    blanks: set[Term] = set()
    restriction_nodes: set[Term] = set()
    n_subsumption = 0
    for t in store:
        terms.add(t.s)
        terms.add(t.o)
        if t.s.is_blank:
            blanks.add(t.s)
        if t.o.is_blank:
            blanks.add(t.o)
        if t.p == RDFS_SUBCLASSOF:
            n_subsumption += 1
        if t.p == RDF_TYPE and t.o.kind is TermKind.IRI and t.o.value == OWL_RESTRICTION:
            restriction_nodes.add(t.s)
    return StatsReport(
        n_triples=len(store),
        n_terms=len(terms),
        n_predicates=len(store.predicate_counts),
        n_blank_nodes=len(blanks),
        n_subsumption=n_subsumption,
        n_restriction_nodes=len(restriction_nodes),
        dropped_literals=store.dropped_literals,
    )
