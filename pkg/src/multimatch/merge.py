"""Union of two knowledge graphs under an alignment (full or drift-preventing)."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .alignment import Correspondence
from .errors import ForeignEntity, NonBijectiveAlignment
from .rdf import KnowledgeGraph, Origin, Triple


class MergeStrategy(enum.Enum):
    FULL = "full"
    NO_DRIFT = "no-drift"


@dataclass(frozen=True)
class MergeResult:
    union: KnowledgeGraph
    added_triples: tuple[Triple, ...]
    rewritten_count: int
    skipped_count: int
    rewrites: dict[str, str] = field(default_factory=dict)


def _is_union(kg: KnowledgeGraph) -> bool:
    return kg.origin is Origin.UNION


def select_roles(
    kg_a: KnowledgeGraph,
    kg_b: KnowledgeGraph,
    produced_at: Mapping[str, int] | None = None,
) -> tuple[KnowledgeGraph, KnowledgeGraph]:
    """Pick ``(source, target)`` for a merge.

    A union always beats a leaf. Between leaves the larger graph wins (ties:
    larger id). Between unions the one produced by the later task wins, using
    ``produced_at``; without it, size then id decide. A leaf chosen as target
    is returned as a copy with origin ``COPIED_LEAF``.
    """
    if kg_a.id == kg_b.id:
        raise ValueError("cannot merge a graph with itself")
    produced_at = produced_at or {}
    a_union, b_union = _is_union(kg_a), _is_union(kg_b)
    if a_union != b_union:
        target = kg_a if a_union else kg_b
    elif a_union and kg_a.id in produced_at and kg_b.id in produced_at:
        target = kg_a if produced_at[kg_a.id] > produced_at[kg_b.id] else kg_b
    else:
        target = max((kg_a, kg_b), key=lambda k: (len(k), k.id))
    source = kg_b if target is kg_a else kg_a
    if not _is_union(target):
        target = target.with_origin(Origin.COPIED_LEAF)
    return source, target


def source_mapping(
    source: KnowledgeGraph, target: KnowledgeGraph, alignment: Iterable[Correspondence]
) -> dict[str, str]:
    """Map source entities to their target counterparts, whatever the orientation."""
    mapping: dict[str, str] = {}
    inverse: dict[str, str] = {}
    for c in alignment:
        e1, e2 = c.entity_one, c.entity_two
        if e1 in source.entities and e2 in target.entities:
            s, t = e1, e2
        elif e2 in source.entities and e1 in target.entities:
            s, t = e2, e1
        else:
            missing = e1 if e1 not in source.entities and e1 not in target.entities else e2
            raise ForeignEntity(missing)
        if mapping.get(s, t) != t:
            raise NonBijectiveAlignment(f"{s} maps to both {mapping[s]} and {t}")
        if inverse.get(t, s) != s:
            raise NonBijectiveAlignment(f"{inverse[t]} and {s} both map to {t}")
        mapping[s] = t
        inverse[t] = s
    return mapping


def _union(target, added, union_id, mapping, skipped) -> MergeResult:
    union = KnowledgeGraph(union_id or target.id, target.triples + tuple(added), Origin.UNION)
    return MergeResult(union, tuple(added), len(added), skipped, mapping)


def _emit(triple: Triple, target_set, added: dict) -> bool:
    if triple in target_set or triple in added:
        return False
    added[triple] = None
    return True


def merge_full(
    target: KnowledgeGraph,
    source: KnowledgeGraph,
    alignment: Iterable[Correspondence],
    union_id: str | None = None,
) -> MergeResult:
    """Add every source triple with matched IRIs rewritten to their target IRI."""
    mapping = source_mapping(source, target, alignment)
    target_set = target.triple_set
    added: dict[Triple, None] = {}
    skipped = 0
    for s, p, o in source.triples:
        t = Triple(
            mapping.get(s, s),
            mapping.get(p, p),
            mapping.get(o, o) if isinstance(o, str) else o,
        )
        if not _emit(t, target_set, added):
            skipped += 1
    return _union(target, added, union_id, mapping, skipped)


def merge_no_drift(
    target: KnowledgeGraph,
    source: KnowledgeGraph,
    alignment: Iterable[Correspondence],
    union_id: str | None = None,
) -> MergeResult:
    """Add only triples about unmatched entities.

    A source triple is dropped when its subject or its object resource has a
    counterpart in the target. A matched predicate alone does not block the
    triple; it is rewritten to the target property.
    """
    mapping = source_mapping(source, target, alignment)
    target_set = target.triple_set
    added: dict[Triple, None] = {}
    skipped = 0
    for s, p, o in source.triples:
        if s in mapping or (isinstance(o, str) and o in mapping):
            skipped += 1
            continue
        if not _emit(Triple(s, mapping.get(p, p), o), target_set, added):
            skipped += 1
    return _union(target, added, union_id, mapping, skipped)


def merge(
    target: KnowledgeGraph,
    source: KnowledgeGraph,
    alignment: Iterable[Correspondence],
    strategy: MergeStrategy = MergeStrategy.NO_DRIFT,
    union_id: str | None = None,
) -> MergeResult:
    if strategy is MergeStrategy.FULL:
        return merge_full(target, source, alignment, union_id)
    return merge_no_drift(target, source, alignment, union_id)
