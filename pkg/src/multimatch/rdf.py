"""RDF knowledge graphs: N-Triples I/O, statistics and entity classification."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, NamedTuple, Union

from .errors import MalformedLine, UnknownEntity

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"
XSD = "http://www.w3.org/2001/XMLSchema#"

RDF_TYPE = RDF + "type"
RDF_PROPERTY = RDF + "Property"
RDF_LANGSTRING = RDF + "langString"
RDFS_CLASS = RDFS + "Class"
RDFS_LABEL = RDFS + "label"
RDFS_COMMENT = RDFS + "comment"
OWL_CLASS = OWL + "Class"
OWL_OBJECT_PROPERTY = OWL + "ObjectProperty"
OWL_DATATYPE_PROPERTY = OWL + "DatatypeProperty"
OWL_ANNOTATION_PROPERTY = OWL + "AnnotationProperty"
XSD_STRING = XSD + "string"
XSD_INTEGER = XSD + "integer"

CLASS_TYPES = frozenset({OWL_CLASS, RDFS_CLASS})
PROPERTY_TYPES = frozenset(
    {RDF_PROPERTY, OWL_OBJECT_PROPERTY, OWL_DATATYPE_PROPERTY, OWL_ANNOTATION_PROPERTY}
)
META_CLASSES = CLASS_TYPES | PROPERTY_TYPES
BUILTIN_NAMESPACES = (RDF, RDFS, OWL, XSD)

_SCHEME = re.compile(r"[A-Za-z][A-Za-z0-9+.\-]*:")


def is_builtin(iri: str) -> bool:
    """True for IRIs of the RDF/RDFS/OWL/XSD vocabularies."""
    return iri.startswith(BUILTIN_NAMESPACES)


def is_valid_iri(value: str) -> bool:
    return bool(value) and _SCHEME.match(value) is not None and not any(
        c.isspace() for c in value
    )


def iri_fragment(iri: str) -> str | None:
    """Text after the last ``#``, else after the last ``/``; None if neither."""
    if "#" in iri:
        return iri.rsplit("#", 1)[1]
    if "/" in iri:
        return iri.rsplit("/", 1)[1]
    return None


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    language: str | None = None
    datatype: str | None = None

    def __post_init__(self) -> None:
        if self.language is not None and self.datatype is not None:
            raise ValueError("a literal has either a language tag or a datatype")
        if self.language is not None:
            object.__setattr__(self, "language", self.language.lower())
        if self.datatype == XSD_STRING:
            # "x" and "x"^^xsd:string denote the same term
            object.__setattr__(self, "datatype", None)

    @property
    def is_textual(self) -> bool:
        return self.datatype is None or self.datatype == RDF_LANGSTRING


Term = Union[str, Literal]


class Triple(NamedTuple):
    subject: str
    predicate: str
    object: Term


class Origin(enum.Enum):
    LEAF = "leaf"
    UNION = "union"
    COPIED_LEAF = "copiedLeaf"


class EntityKind(enum.Enum):
    CLASS = "class"
    PROPERTY = "property"
    INSTANCE = "instance"


@dataclass(frozen=True)
class KgStats:
    num_classes: int
    num_instances: int
    model_size: int


@dataclass(frozen=True, eq=False)
class KnowledgeGraph:
    """An immutable, duplicate-free set of triples with a source identifier.

    Triple order is preserved from construction; duplicates are dropped
    (first occurrence wins).
    """

    id: str
    triples: tuple[Triple, ...] = ()
    origin: Origin = Origin.LEAF

    def __post_init__(self) -> None:
        object.__setattr__(self, "triples", tuple(dict.fromkeys(self.triples)))

    def __len__(self) -> int:
        return len(self.triples)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KnowledgeGraph):
            return NotImplemented
        return (self.id, self.origin, self.triple_set) == (
            other.id,
            other.origin,
            other.triple_set,
        )

    def __hash__(self) -> int:
        return hash((self.id, len(self.triples)))

    def with_origin(self, origin: Origin, id: str | None = None) -> "KnowledgeGraph":
        return KnowledgeGraph(id or self.id, self.triples, origin)

    @cached_property
    def triple_set(self) -> frozenset[Triple]:
        return frozenset(self.triples)

    @cached_property
    def entities(self) -> frozenset[str]:
        """All IRIs in subject, predicate or object position."""
        out: set[str] = set()
        for s, p, o in self.triples:
            out.add(s)
            out.add(p)
            if isinstance(o, str):
                out.add(o)
        return frozenset(out)

    @cached_property
    def kinds(self) -> dict[str, EntityKind]:
        classes: set[str] = set()
        properties: set[str] = set()
        for s, p, o in self.triples:
            properties.add(p)
            if p == RDF_TYPE and isinstance(o, str):
                classes.add(o)
                if o in CLASS_TYPES:
                    classes.add(s)
                elif o in PROPERTY_TYPES:
                    properties.add(s)
        out = {}
        for e in self.entities:
            if e in classes:
                out[e] = EntityKind.CLASS
            elif e in properties:
                out[e] = EntityKind.PROPERTY
            else:
                out[e] = EntityKind.INSTANCE
        return out


def entity_kind(kg: KnowledgeGraph, entity: str) -> EntityKind:
    """Classify ``entity`` with precedence Class > Property > Instance."""
    try:
        return kg.kinds[entity]
    except KeyError:
        raise UnknownEntity(entity, kg.id) from None


def stats(kg: KnowledgeGraph) -> KgStats:
    """Class/instance counts and model size.

    Built-in vocabulary terms (``owl:Class`` and friends) are not counted as
    classes of the graph. Instances are the distinct subjects of ``rdf:type``
    statements whose object is not an ontology meta-class.
    """
    num_classes = sum(
        1 for e, k in kg.kinds.items() if k is EntityKind.CLASS and not is_builtin(e)
    )
    instances = {
        s
        for s, p, o in kg.triples
        if p == RDF_TYPE and isinstance(o, str) and o not in META_CLASSES
    }
    return KgStats(num_classes, len(instances), len(kg.triples))


# --- N-Triples -------------------------------------------------------------

_UCHAR = r"\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8}"
_IRIREF = rf"<((?:[^\x00-\x20<>\"{{}}|^`\\]|{_UCHAR})*)>"
_BNODE = r"_:([A-Za-z0-9_\u00C0-\uFFFF](?:[A-Za-z0-9_\-.\u00B7\u00C0-\uFFFF]*[A-Za-z0-9_\-\u00B7\u00C0-\uFFFF])?)"
_STRING = r"\"((?:[^\"\\\n\r]|\\[tbnrf\"'\\]|" + _UCHAR + r")*)\""
_LANG = r"@([a-zA-Z]+(?:-[a-zA-Z0-9]+)*)"
_WS = r"[ \t]*"

_LINE = re.compile(
    rf"{_WS}(?:{_IRIREF}|{_BNODE}){_WS}{_IRIREF}{_WS}"
    rf"(?:{_IRIREF}|{_BNODE}|{_STRING}(?:{_LANG}|\^\^{_IRIREF})?){_WS}\.{_WS}(?:#.*)?"
)
_ESCAPE = re.compile(r"\\(u[0-9A-Fa-f]{4}|U[0-9A-Fa-f]{8}|[tbnrf\"'\\])")
_EOL = re.compile(r"\r\n|\r|\n")
_ECHARS = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def _unescape(text: str) -> str:
    if "\\" not in text:
        return text

    def repl(m: re.Match[str]) -> str:
        code = m.group(1)
        if code[0] in "uU":
            return chr(int(code[1:], 16))
        return _ECHARS[code]

    return _ESCAPE.sub(repl, text)


def skolem_iri(kg_id: str, label: str) -> str:
    return f"urn:skolem:{kg_id}:{label}"


def _iri(raw: str, line_number: int, line: str) -> str:
    value = _unescape(raw)
    if not is_valid_iri(value):
        raise MalformedLine(line_number, line, f"not an absolute IRI: {value!r}")
    return value


def parse_ntriples(data: bytes | str, kg_id: str) -> KnowledgeGraph:
    """Parse an N-Triples document into a leaf graph.

    Blank nodes are replaced by ``urn:skolem:<kg_id>:<label>`` IRIs. Any
    non-blank, non-comment line that does not parse raises MalformedLine.
    """
    text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
    triples: list[Triple] = []
    for number, line in enumerate(_EOL.split(text), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        m = _LINE.fullmatch(line)
        if m is None:
            raise MalformedLine(number, line)
        s_iri, s_bn, p, o_iri, o_bn, o_lex, o_lang, o_dt = m.groups()
        subject = _iri(s_iri, number, line) if s_iri is not None else skolem_iri(kg_id, s_bn)
        predicate = _iri(p, number, line)
        obj: Term
        if o_iri is not None:
            obj = _iri(o_iri, number, line)
        elif o_bn is not None:
            obj = skolem_iri(kg_id, o_bn)
        else:
            datatype = _iri(o_dt, number, line) if o_dt is not None else None
            obj = Literal(_unescape(o_lex), o_lang, datatype)
        triples.append(Triple(subject, predicate, obj))
    return KnowledgeGraph(kg_id, tuple(triples), Origin.LEAF)


def _escape_literal(text: str) -> str:
    return (
        text.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
    )


def _escape_iri(iri: str) -> str:
    out = []
    for ch in iri:
        if ord(ch) <= 0x20 or ch in '<>"{}|^`\\':
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def format_term(term: Term) -> str:
    if isinstance(term, Literal):
        body = f'"{_escape_literal(term.lexical)}"'
        if term.language:
            return f"{body}@{term.language}"
        if term.datatype:
            return f"{body}^^<{_escape_iri(term.datatype)}>"
        return body
    return f"<{_escape_iri(term)}>"


def serialize_ntriples(triples: KnowledgeGraph | Iterable[Triple]) -> str:
    if isinstance(triples, KnowledgeGraph):
        triples = triples.triples
    return "".join(
        f"{format_term(s)} {format_term(p)} {format_term(o)} .\n" for s, p, o in triples
    )


def read_ntriples(path: str | Path, kg_id: str | None = None) -> KnowledgeGraph:
    path = Path(path)
    return parse_ntriples(path.read_bytes(), kg_id or path.stem)


def write_ntriples(kg: KnowledgeGraph | Iterable[Triple], path: str | Path) -> None:
    Path(path).write_text(serialize_ntriples(kg), encoding="utf-8")
