"""Textual profiles of knowledge graphs: token extraction, tf-idf and cosine."""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ._porter import stem
from .rdf import KnowledgeGraph, Literal, iri_fragment, is_builtin

# Lucene's classic English stop set. Deliberately small: it keeps content
# words such as "has" that bigger lists drop.
STOPWORDS = frozenset(
    """a an and are as at be but by for if in into is it no not of on or such
    that the their then there these they this to was will with""".split()
)

_SENTENCE_END = re.compile(r"(?<=[.!?])\s+")
_WORD = re.compile(r"[^\W_]+")
_SEPARATORS = re.compile(r"[-_~]+")
_CAMEL = re.compile(r"(?<=[a-z0-9])(?=[A-Z])|(?<=[A-Z])(?=[A-Z][a-z])")


def split_sentences(text: str) -> list[str]:
    return [s for s in _SENTENCE_END.split(text) if s]


def _normalize(words: Iterable[str]) -> list[str]:
    out = []
    for w in words:
        w = w.lower()
        if w in STOPWORDS:
            continue
        s = stem(w)
        if s:
            out.append(s)
    return out


def tokenize_literal(text: str) -> list[str]:
    """Sentence split, tokenize, lowercase, drop stopwords, stem."""
    words: list[str] = []
    for sentence in split_sentences(text):
        words.extend(_WORD.findall(sentence))
    return _normalize(words)


def tokenize_fragment(fragment: str) -> list[str]:
    """Like tokenize_literal but with camel-case and ``-_~`` splitting and no sentence splitting."""
    words: list[str] = []
    for part in _SEPARATORS.split(fragment):
        for piece in _CAMEL.split(part):
            words.extend(_WORD.findall(piece))
    return _normalize(words)


@dataclass(frozen=True)
class TokenDocument:
    kg_id: str
    tokens: tuple[str, ...]


def extract_document(kg: KnowledgeGraph) -> TokenDocument:
    """Tokens of every textual literal and of the fragment of every IRI in ``kg``.

    Built-in RDF/RDFS/OWL/XSD vocabulary IRIs are skipped: every graph uses
    them and their fragments say nothing about the graph's topic.
    """
    tokens: list[str] = []
    for _, _, o in kg.triples:
        if isinstance(o, Literal) and o.is_textual:
            tokens.extend(tokenize_literal(o.lexical))
    for iri in sorted(kg.entities):
        if is_builtin(iri):
            continue
        frag = iri_fragment(iri)
        if frag:
            tokens.extend(tokenize_fragment(frag))
    return TokenDocument(kg.id, tuple(tokens))


@dataclass(frozen=True)
class TextProfile:
    """L2-normalized sparse tf-idf vector of one knowledge graph."""

    kg_id: str
    weights: dict[str, float]

    def __bool__(self) -> bool:
        return bool(self.weights)


def idf(num_documents: int, document_frequency: int) -> float:
    """Smoothed inverse document frequency, never below 1."""
    return math.log((1 + num_documents) / (1 + document_frequency)) + 1.0


def build_profiles(documents: Sequence[TokenDocument]) -> list[TextProfile]:
    if not documents:
        raise ValueError("build_profiles needs at least one document")
    counts = [Counter(d.tokens) for d in documents]
    df: Counter[str] = Counter()
    for c in counts:
        df.update(c.keys())
    n = len(documents)
    idfs = {term: idf(n, k) for term, k in df.items()}
    profiles = []
    for doc, c in zip(documents, counts):
        raw = {t: tf * idfs[t] for t, tf in c.items()}
        norm = math.sqrt(sum(v * v for v in raw.values()))
        weights = {t: v / norm for t, v in sorted(raw.items())} if norm > 0 else {}
        profiles.append(TextProfile(doc.kg_id, weights))
    return profiles


def profile_kgs(kgs: Iterable[KnowledgeGraph]) -> list[TextProfile]:
    return build_profiles([extract_document(kg) for kg in kgs])


def cosine(p1: TextProfile, p2: TextProfile) -> float:
    """Dot product of two normalized profiles; 0 when either is empty."""
    if not p1.weights or not p2.weights:
        return 0.0
    small, large = sorted((p1.weights, p2.weights), key=len)
    dot = sum(w * large.get(t, 0.0) for t, w in small.items())
    return min(1.0, max(0.0, dot))


@dataclass(frozen=True)
class SimilarityMatrix:
    ids: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values.setflags(write=False)

    def index(self, kg_id: str) -> int:
        return self.ids.index(kg_id)

    def similarity(self, a: str, b: str) -> float:
        return float(self.values[self.index(a), self.index(b)])

    def distance(self, a: str, b: str) -> float:
        return 1.0 - self.similarity(a, b)

    def distances(self) -> np.ndarray:
        return 1.0 - self.values


def similarity_matrix(profiles: Sequence[TextProfile]) -> SimilarityMatrix:
    n = len(profiles)
    values = np.zeros((n, n))
    for i in range(n):
        values[i, i] = 1.0 if profiles[i] else 0.0
        for j in range(i + 1, n):
            values[i, j] = values[j, i] = cosine(profiles[i], profiles[j])
    return SimilarityMatrix(tuple(p.kg_id for p in profiles), values)


def dump_profiles(profiles: Iterable[TextProfile], path: str | Path) -> None:
    """Debug dump as ``kgId<TAB>term<TAB>weight`` rows."""
    with open(path, "w", encoding="utf-8") as fh:
        for p in profiles:
            for term, w in p.weights.items():
                fh.write(f"{p.kg_id}\t{term}\t{w!r}\n")
