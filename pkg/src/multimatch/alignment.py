"""Correspondences, alignments, transitive closure and the alignment TSV format."""

from __future__ import annotations

import logging
import re
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Hashable, Iterable, Iterator, Mapping, TypeVar

from .errors import ConfidenceOutOfRange, MalformedRow, UnknownSource

log = logging.getLogger(__name__)

EQUIVALENCE = "="

Pair = tuple[str, str]
T = TypeVar("T", bound=Hashable)


def canonical_pair(a: str, b: str) -> Pair:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class Correspondence:
    """An equivalence statement between two entities.

    Equality and hashing ignore the confidence and the orientation of the
    entity pair.
    """

    entity_one: str
    entity_two: str
    relation: str = EQUIVALENCE
    confidence: float = 1.0

    def __post_init__(self) -> None:
        if self.entity_one == self.entity_two:
            raise ValueError(f"correspondence of {self.entity_one} with itself")
        if self.relation != EQUIVALENCE:
            raise ValueError(f"unsupported relation {self.relation!r}")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")

    @property
    def key(self) -> tuple[str, str, str]:
        a, b = canonical_pair(self.entity_one, self.entity_two)
        return (a, b, self.relation)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Correspondence):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def flipped(self) -> "Correspondence":
        return Correspondence(self.entity_two, self.entity_one, self.relation, self.confidence)

    def oriented(self, first: str) -> "Correspondence":
        """Return this correspondence with ``first`` as entity_one."""
        if self.entity_one == first:
            return self
        if self.entity_two == first:
            return self.flipped()
        raise ValueError(f"{first} is not part of {self}")

    def with_confidence(self, confidence: float) -> "Correspondence":
        return Correspondence(self.entity_one, self.entity_two, self.relation, confidence)


class Alignment:
    """An immutable set of correspondences keyed on the unordered entity pair.

    When the same pair is given twice, the first correspondence is kept.
    """

    __slots__ = ("_items",)

    def __init__(self, correspondences: Iterable[Correspondence] = ()):
        items: dict[tuple[str, str, str], Correspondence] = {}
        for c in correspondences:
            items.setdefault(c.key, c)
        self._items = items

    def __iter__(self) -> Iterator[Correspondence]:
        return iter(self._items.values())

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, item: object) -> bool:
        return isinstance(item, Correspondence) and item.key in self._items

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Alignment):
            return NotImplemented
        return self._items.keys() == other._items.keys()

    def __hash__(self) -> int:
        return hash(frozenset(self._items))

    def __repr__(self) -> str:
        return f"Alignment({sorted(self._items)!r})"

    def __or__(self, other: "Alignment") -> "Alignment":
        return Alignment([*self, *other])

    def __sub__(self, other: "Alignment") -> "Alignment":
        return Alignment(c for c in self if c not in other)

    def __and__(self, other: "Alignment") -> "Alignment":
        return Alignment(c for c in self if c in other)

    def get(self, c: Correspondence) -> Correspondence | None:
        return self._items.get(c.key)

    def entities(self) -> set[str]:
        out: set[str] = set()
        for c in self:
            out.add(c.entity_one)
            out.add(c.entity_two)
        return out

    def is_one_to_one(self) -> bool:
        seen: set[str] = set()
        for c in self:
            if c.entity_one in seen or c.entity_two in seen:
                return False
            seen.add(c.entity_one)
            seen.add(c.entity_two)
        return True

    def sorted(self) -> list[Correspondence]:
        return [self._items[k] for k in sorted(self._items)]


class DisjointSet:
    """Union-find over arbitrary hashable elements.

    Union by size with path compression. Elements are added lazily by
    ``find``/``union``.
    """

    def __init__(self, elements: Iterable[T] = ()):
        self.parent: dict = {}
        self.size: dict = {}
        for e in elements:
            self.add(e)

    def __contains__(self, element: object) -> bool:
        return element in self.parent

    def __len__(self) -> int:
        return len(self.parent)

    def add(self, element: T) -> None:
        if element not in self.parent:
            self.parent[element] = element
            self.size[element] = 1

    def find(self, element: T) -> T:
        self.add(element)
        root = element
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[element] != root:
            self.parent[element], element = root, self.parent[element]
        return root

    def union(self, a: T, b: T) -> bool:
        """Merge the sets of ``a`` and ``b``; False if they were already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def connected(self, a: T, b: T) -> bool:
        return self.find(a) == self.find(b)

    def groups(self) -> list[set]:
        out: dict = defaultdict(set)
        for e in self.parent:
            out[self.find(e)].add(e)
        return list(out.values())


@dataclass(frozen=True)
class EntityCluster:
    """Entities that are equivalent under the closure, with their source KG."""

    members: frozenset[tuple[str, str]]
    _by_source: dict[str, tuple[str, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        by_source: dict[str, list[str]] = defaultdict(list)
        for iri, source in self.members:
            by_source[source].append(iri)
        object.__setattr__(
            self, "_by_source", {k: tuple(sorted(v)) for k, v in by_source.items()}
        )

    def __len__(self) -> int:
        return len(self.members)

    def entities_of(self, source: str) -> tuple[str, ...]:
        return self._by_source.get(source, ())

    @property
    def sources(self) -> list[str]:
        return sorted(self._by_source)

    @property
    def is_source_consistent(self) -> bool:
        """False if two members come from the same source KG."""
        return all(len(v) == 1 for v in self._by_source.values())


def _source_of(entity: str, membership: Mapping[str, str]) -> str:
    try:
        return membership[entity]
    except KeyError:
        raise UnknownSource(entity) from None


def closure(alignment: Iterable[Correspondence], membership: Mapping[str, str]) -> list[EntityCluster]:
    """Connected components of the correspondence graph, as entity clusters.

    Clusters are returned sorted by their smallest member IRI. Entities that
    take part in no correspondence do not produce a cluster.
    """
    ds = DisjointSet()
    for c in alignment:
        _source_of(c.entity_one, membership)
        _source_of(c.entity_two, membership)
        ds.union(c.entity_one, c.entity_two)
    clusters = [
        EntityCluster(frozenset((e, membership[e]) for e in group)) for group in ds.groups()
    ]
    clusters.sort(key=lambda cl: min(cl.members))
    return clusters


def expand_to_pairs(clusters: Iterable[EntityCluster], pair: Pair) -> Alignment:
    """All cross-source combinations of ``pair`` inside each cluster, confidence 1.0.

    Entity one of every emitted correspondence comes from ``pair[0]``.
    """
    kg_a, kg_b = pair
    if kg_a == kg_b:
        raise ValueError("expand_to_pairs needs two distinct sources")
    out = []
    for cluster in clusters:
        if not cluster.is_source_consistent:
            log.warning("source-inconsistent cluster of %d entities", len(cluster))
        for a in cluster.entities_of(kg_a):
            for b in cluster.entities_of(kg_b):
                out.append(Correspondence(a, b, EQUIVALENCE, 1.0))
    return Alignment(out)


def expand_all(clusters: Iterable[EntityCluster]) -> Alignment:
    """Every cross-source pair within every cluster (confidence 1.0)."""
    out = []
    for cluster in clusters:
        for kg_a, kg_b in combinations(cluster.sources, 2):
            for a in cluster.entities_of(kg_a):
                for b in cluster.entities_of(kg_b):
                    out.append(Correspondence(a, b))
    return Alignment(out)


@dataclass
class PairSplit:
    """Result of splitting a multi-source alignment by source pair.

    ``pairs`` is keyed by the lexicographically ordered source pair and each
    correspondence is oriented so that entity one belongs to the first source.
    ``intra_source`` collects correspondences inside a single source.
    """

    pairs: dict[Pair, Alignment]
    intra_source: Alignment

    def __len__(self) -> int:
        return sum(len(a) for a in self.pairs.values()) + len(self.intra_source)

    def get(self, pair: Pair) -> Alignment:
        return self.pairs.get(canonical_pair(*pair), Alignment())


def split_by_pair(alignment: Iterable[Correspondence], membership: Mapping[str, str]) -> PairSplit:
    buckets: dict[Pair, list[Correspondence]] = defaultdict(list)
    intra: list[Correspondence] = []
    for c in alignment:
        sa = _source_of(c.entity_one, membership)
        sb = _source_of(c.entity_two, membership)
        if sa == sb:
            intra.append(c)
            continue
        pair = canonical_pair(sa, sb)
        buckets[pair].append(c if sa == pair[0] else c.flipped())
    return PairSplit(
        {p: Alignment(buckets[p]) for p in sorted(buckets)}, Alignment(intra)
    )


# --- TSV -------------------------------------------------------------------


def read_alignment(data: bytes | str) -> Alignment:
    """Parse ``entityOne<TAB>entityTwo<TAB>=<TAB>confidence`` rows."""
    text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
    out = []
    for number, line in enumerate(re.split(r"\r\n|\r|\n", text), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 4:
            raise MalformedRow(number, f"expected 4 tab-separated columns, got {len(cols)}")
        e1, e2, relation, conf = cols
        if relation != EQUIVALENCE:
            raise MalformedRow(number, f"unsupported relation {relation!r}")
        try:
            confidence = float(conf)
        except ValueError:
            raise MalformedRow(number, f"confidence {conf!r} is not a number") from None
        if not 0.0 <= confidence <= 1.0:
            raise ConfidenceOutOfRange(number, f"confidence {confidence} outside [0, 1]")
        if not e1 or not e2 or e1 == e2:
            raise MalformedRow(number, "entities must be distinct and non-empty")
        out.append(Correspondence(e1, e2, relation, confidence))
    return Alignment(out)


def write_alignment(alignment: Iterable[Correspondence]) -> bytes:
    """Serialize in canonical order: IRIs of each row sorted, rows sorted."""
    rows = []
    for c in alignment:
        a, b = canonical_pair(c.entity_one, c.entity_two)
        rows.append(f"{a}\t{b}\t{c.relation}\t{c.confidence!r}\n")
    rows.sort()
    return "".join(rows).encode("utf-8")


def load_alignment(path: str | Path) -> Alignment:
    return read_alignment(Path(path).read_bytes())


def save_alignment(alignment: Iterable[Correspondence], path: str | Path) -> None:
    Path(path).write_bytes(write_alignment(alignment))
