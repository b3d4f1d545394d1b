"""Clean-up of all-pairs similarity graphs.

The error degree here is a neighbourhood-overlap score: an edge whose two
endpoints share few neighbours within their component is suspicious.
"""

from __future__ import annotations

import enum
import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping

from .alignment import Alignment, Correspondence, DisjointSet, closure, expand_all
from .errors import ConfigError, UnknownSource

log = logging.getLogger(__name__)

REPRODUCTION_THRESHOLDS = (0.99, 0.95, 0.90, 0.80, 0.60)


class SimilarityGraph:
    """Undirected graph: entities as nodes, correspondences as edges."""

    def __init__(self, alignment: Iterable[Correspondence], membership: Mapping[str, str]):
        self.nodes: dict[str, str] = {}
        self.edges: dict[tuple[str, str, str], Correspondence] = {}
        self.adj: dict[str, set[str]] = defaultdict(set)
        for c in alignment:
            for e in (c.entity_one, c.entity_two):
                if e not in membership:
                    raise UnknownSource(e)
                self.nodes[e] = membership[e]
            self.edges[c.key] = c
            self.adj[c.entity_one].add(c.entity_two)
            self.adj[c.entity_two].add(c.entity_one)

    def __len__(self) -> int:
        return len(self.edges)

    def alignment(self) -> Alignment:
        return Alignment(self.edges[k] for k in sorted(self.edges))

    def remove(self, c: Correspondence) -> None:
        del self.edges[c.key]
        self.adj[c.entity_one].discard(c.entity_two)
        self.adj[c.entity_two].discard(c.entity_one)

    def components(self) -> list[set[str]]:
        ds = DisjointSet()
        for c in self.edges.values():
            ds.union(c.entity_one, c.entity_two)
        return sorted(ds.groups(), key=min)

    def component_edges(self, component: set[str]) -> list[Correspondence]:
        return [c for k, c in sorted(self.edges.items()) if c.entity_one in component]


def error_degree(graph: SimilarityGraph, edge: Correspondence) -> float:
    """1 - (|N(u) & N(v)| + 1) / (|N(u) | N(v)| + 1), neighbourhoods without u and v."""
    u, v = edge.entity_one, edge.entity_two
    nu = graph.adj[u] - {u, v}
    nv = graph.adj[v] - {u, v}
    return 1.0 - (len(nu & nv) + 1) / (len(nu | nv) + 1)


def filter_by_error(graph: SimilarityGraph, threshold: float) -> Alignment:
    """Drop every edge whose error degree exceeds ``threshold``."""
    if not 0.0 <= threshold <= 1.0:
        raise ConfigError(f"threshold {threshold} outside [0, 1]")
    kept = []
    for key in sorted(graph.edges):
        c = graph.edges[key]
        err = error_degree(graph, c)
        if err > threshold:
            log.info("removed %s %s: error-degree %.4f > %s", c.entity_one, c.entity_two, err, threshold)
        else:
            kept.append(c)
    return Alignment(kept)


def _has_duplicate_source(graph: SimilarityGraph, component: set[str]) -> bool:
    sources = [graph.nodes[e] for e in component]
    return len(sources) != len(set(sources))


def source_consistency_repair(graph: SimilarityGraph) -> Alignment:
    """Break components that hold two entities of one source.

    Inside each offending component the lowest-confidence edge is removed
    (ties: higher error degree, then IRI order) until no component contains
    two nodes from the same source. ``graph`` is left untouched.
    """
    g = SimilarityGraph(graph.edges.values(), graph.nodes)
    while True:
        bad = [comp for comp in g.components() if _has_duplicate_source(g, comp)]
        if not bad:
            break
        for comp in bad:
            edges = g.component_edges(comp)
            victim = min(edges, key=lambda c: (c.confidence, -error_degree(g, c), c.key))
            log.info(
                "removed %s %s: source-inconsistent component, confidence %s",
                victim.entity_one, victim.entity_two, victim.confidence,
            )
            g.remove(victim)
    return g.alignment()


def connected_components_repair(graph: SimilarityGraph) -> Alignment:
    """Replace the graph by all cross-source pairs of each connected component."""
    return expand_all(closure(graph.edges.values(), graph.nodes))


class RepairMethod(enum.Enum):
    ERROR_DEGREE = "error-degree"
    SOURCE_CONSISTENCY = "source-consistency"
    CONNECTED_COMPONENTS = "connected-components"


@dataclass(frozen=True)
class RepairConfig:
    method: RepairMethod
    threshold: float = 0.9
    reproduction: bool = False

    def __post_init__(self) -> None:
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigError(f"threshold {self.threshold} outside [0, 1]")
        if (
            self.reproduction
            and self.method is RepairMethod.ERROR_DEGREE
            and self.threshold not in REPRODUCTION_THRESHOLDS
        ):
            raise ConfigError(f"reproduction thresholds are {REPRODUCTION_THRESHOLDS}")

    @property
    def label(self) -> str:
        if self.method is RepairMethod.ERROR_DEGREE:
            return f"error-{self.threshold:.2f}"
        return self.method.value


def repair(alignment: Iterable[Correspondence], membership: Mapping[str, str], config: RepairConfig) -> Alignment:
    graph = SimilarityGraph(alignment, membership)
    if config.method is RepairMethod.ERROR_DEGREE:
        return filter_by_error(graph, config.threshold)
    if config.method is RepairMethod.SOURCE_CONSISTENCY:
        return source_consistency_repair(graph)
    return connected_components_repair(graph)
