"""Execution plans that reduce multi-source matching to binary match tasks."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from .alignment import DisjointSet
from .errors import ConfigError, TooFewSources
from .rdf import KgStats
from .text import SimilarityMatrix, TextProfile, similarity_matrix

UNION_PREFIX = "union:"

ALL_PAIRS = "all-pairs"
TP_WINDOW = "tp-window"
TP_FIRST = "tp-first"
TP_SIM = "tp-sim"
IM_ORDER = "im-order"
IM_SIM = "im-sim"
STRATEGIES = (ALL_PAIRS, TP_WINDOW, TP_FIRST, TP_SIM, IM_ORDER, IM_SIM)
ORDER_BASED = (TP_WINDOW, TP_FIRST, IM_ORDER)
SIMILARITY_BASED = (TP_SIM, IM_SIM)


class Measure(enum.Enum):
    CLASSES = "Classes"
    INSTANCES = "Instances"
    MODEL_SIZE = "ModelSize"


class Direction(enum.Enum):
    ASCENDING = "Ascending"
    DESCENDING = "Descending"


class Linkage(enum.Enum):
    SINGLE = "single"
    AVERAGE = "average"
    COMPLETE = "complete"


@dataclass(frozen=True)
class OrderingSpec:
    measure: Measure
    direction: Direction

    @property
    def name(self) -> str:
        return self.measure.value + self.direction.value

    def __str__(self) -> str:
        return self.name

    @classmethod
    def parse(cls, text: str) -> "OrderingSpec":
        """Accepts ``ModelSizeDescending`` or ``ModelSize,Desc`` style names."""
        compact = text.replace(",", "").replace("_", "").replace(" ", "").lower()
        for m in Measure:
            key = m.value.lower()
            if compact.startswith(key):
                rest = compact[len(key):]
                for d in Direction:
                    if rest and d.value.lower().startswith(rest):
                        return cls(m, d)
        raise ConfigError(f"unknown ordering {text!r}")

    @classmethod
    def all(cls) -> list["OrderingSpec"]:
        return [cls(m, d) for d in Direction for m in Measure]


def _measure_value(s: KgStats, measure: Measure) -> int:
    if measure is Measure.CLASSES:
        return s.num_classes
    if measure is Measure.INSTANCES:
        return s.num_instances
    return s.model_size


def order_kgs(stats_by_id: Mapping[str, KgStats], spec: OrderingSpec) -> list[str]:
    """Sort KG ids by the chosen measure, ties by id.

    Descending is the exact reverse of ascending (ties included), so both
    directions yield the same windowing pairs with source and target swapped.
    """
    ids = sorted(stats_by_id, key=lambda k: (_measure_value(stats_by_id[k], spec.measure), k))
    if spec.direction is Direction.DESCENDING:
        ids.reverse()
    return ids


@dataclass(frozen=True)
class MatchTask:
    index: int
    source: str
    target: str
    produces: str | None = None

    def __post_init__(self) -> None:
        if self.source == self.target:
            raise ValueError("a task cannot match a node with itself")


def union_ref(task_index: int) -> str:
    return f"{UNION_PREFIX}{task_index}"


def is_union_ref(ref: str) -> bool:
    return ref.startswith(UNION_PREFIX)


@dataclass(frozen=True)
class ExecutionPlan:
    strategy: str
    tasks: tuple[MatchTask, ...]
    leaves: tuple[str, ...]
    merge_after_match: bool = False
    closure_needed: bool = True
    variant: str = ""

    def __len__(self) -> int:
        return len(self.tasks)

    def producer(self, ref: str) -> int | None:
        """Index of the task producing ``ref``, None for leaves."""
        if not is_union_ref(ref):
            return None
        return int(ref[len(UNION_PREFIX):])

    def dependencies(self, task: MatchTask) -> set[int]:
        return {i for i in (self.producer(task.source), self.producer(task.target)) if i is not None}

    def leaves_under(self, ref: str) -> set[str]:
        idx = self.producer(ref)
        if idx is None:
            return {ref}
        t = self.tasks[idx]
        return self.leaves_under(t.source) | self.leaves_under(t.target)

    def leaf_edges(self) -> list[tuple[str, str]]:
        """One representative leaf-to-leaf edge per task."""
        return [
            (min(self.leaves_under(t.source)), min(self.leaves_under(t.target)))
            for t in self.tasks
        ]

    def depth(self) -> int:
        levels: dict[int, int] = {}
        for t in self.tasks:
            levels[t.index] = 1 + max((levels[d] for d in self.dependencies(t)), default=0)
        return max(levels.values(), default=0)

    def dump(self) -> str:
        """TSV ``taskIndex, sourceRef, targetRef, mergeAfterMatch``."""
        merge = str(self.merge_after_match).lower()
        return "".join(f"{t.index}\t{t.source}\t{t.target}\t{merge}\n" for t in self.tasks)


def _check_ids(ids: Sequence[str]) -> list[str]:
    ids = list(ids)
    if len(ids) < 2:
        raise TooFewSources(len(ids))
    if len(set(ids)) != len(ids):
        raise ConfigError("duplicate knowledge graph ids")
    for i in ids:
        if is_union_ref(i):
            raise ConfigError(f"knowledge graph id {i!r} clashes with union references")
    return ids


def plan_all_pairs(kg_ids: Sequence[str]) -> ExecutionPlan:
    ids = sorted(_check_ids(kg_ids))
    tasks = tuple(MatchTask(i, a, b) for i, (a, b) in enumerate(combinations(ids, 2)))
    return ExecutionPlan(ALL_PAIRS, tasks, tuple(ids), merge_after_match=False, closure_needed=False)


def plan_windowing(ordered_ids: Sequence[str], variant: str = "") -> ExecutionPlan:
    ids = _check_ids(ordered_ids)
    tasks = tuple(MatchTask(i, a, b) for i, (a, b) in enumerate(zip(ids, ids[1:])))
    return ExecutionPlan(TP_WINDOW, tasks, tuple(ids), variant=variant)


def plan_first_vs_rest(ordered_ids: Sequence[str], variant: str = "") -> ExecutionPlan:
    ids = _check_ids(ordered_ids)
    hub = ids[0]
    tasks = tuple(MatchTask(i, hub, other) for i, other in enumerate(ids[1:]))
    return ExecutionPlan(TP_FIRST, tasks, tuple(ids), variant=variant)


def _as_matrix(similarity: SimilarityMatrix | Sequence[TextProfile]) -> SimilarityMatrix:
    if isinstance(similarity, SimilarityMatrix):
        return similarity
    return similarity_matrix(similarity)


def kruskal(ids: Sequence[str], distances: np.ndarray) -> list[tuple[str, str]]:
    """Minimum spanning tree edges in acceptance order.

    Edges are sorted by (distance, smaller id, larger id); an edge is kept
    unless both ends already share a component.
    """
    n = len(ids)
    edges = []
    for i, j in combinations(range(n), 2):
        a, b = sorted((ids[i], ids[j]))
        edges.append((float(distances[i, j]), a, b))
    edges.sort()
    ds = DisjointSet(ids)
    tree = []
    for _, a, b in edges:
        if ds.union(a, b):
            tree.append((a, b))
            if len(tree) == n - 1:
                break
    return tree


def plan_tp_similarity(similarity: SimilarityMatrix | Sequence[TextProfile]) -> ExecutionPlan:
    sim = _as_matrix(similarity)
    ids = _check_ids(sim.ids)
    tree = kruskal(ids, sim.distances())
    tasks = tuple(MatchTask(i, a, b) for i, (a, b) in enumerate(tree))
    return ExecutionPlan(TP_SIM, tasks, tuple(ids))


def plan_im_order(ordered_ids: Sequence[str], variant: str = "") -> ExecutionPlan:
    ids = _check_ids(ordered_ids)
    tasks = []
    current = ids[0]
    for i, nxt in enumerate(ids[1:]):
        tasks.append(MatchTask(i, current, nxt, union_ref(i)))
        current = union_ref(i)
    return ExecutionPlan(IM_ORDER, tuple(tasks), tuple(ids), merge_after_match=True, variant=variant)


def linkage_distance(d: np.ndarray, left: Sequence[int], right: Sequence[int], linkage: Linkage) -> float:
    block = d[np.ix_(left, right)]
    if linkage is Linkage.SINGLE:
        return float(block.min())
    if linkage is Linkage.COMPLETE:
        return float(block.max())
    return float(block.mean())


def agglomerate(
    ids: Sequence[str], distances: np.ndarray, linkage: Linkage
) -> list[tuple[str, str, float]]:
    """Hierarchical agglomerative clustering over leaf distances.

    Returns the merges in order as ``(ref_a, ref_b, distance)`` with
    ``ref_a < ref_b``; merge ``k`` creates cluster ``union:k``. Ties go to the
    lexicographically smallest pair of cluster refs.
    """
    clusters: dict[str, list[int]] = {kg: [i] for i, kg in enumerate(ids)}
    merges = []
    while len(clusters) > 1:
        best = None
        for a, b in combinations(sorted(clusters), 2):
            dist = linkage_distance(distances, clusters[a], clusters[b], linkage)
            cand = (dist, a, b)
            if best is None or cand < best:
                best = cand
        dist, a, b = best
        merges.append((a, b, dist))
        clusters[union_ref(len(merges) - 1)] = clusters.pop(a) + clusters.pop(b)
    return merges


def plan_im_similarity(
    similarity: SimilarityMatrix | Sequence[TextProfile], linkage: Linkage = Linkage.AVERAGE
) -> ExecutionPlan:
    sim = _as_matrix(similarity)
    ids = _check_ids(sim.ids)
    merges = agglomerate(ids, sim.distances(), linkage)
    tasks = tuple(MatchTask(i, a, b, union_ref(i)) for i, (a, b, _) in enumerate(merges))
    return ExecutionPlan(
        IM_SIM, tasks, tuple(ids), merge_after_match=True, variant=linkage.value.capitalize()
    )


def make_plan(
    strategy: str,
    stats_by_id: Mapping[str, KgStats] | None = None,
    *,
    ordering: OrderingSpec | None = None,
    similarity: SimilarityMatrix | Sequence[TextProfile] | None = None,
    linkage: Linkage = Linkage.AVERAGE,
    kg_ids: Sequence[str] | None = None,
) -> ExecutionPlan:
    """Build the plan for one of the six strategy names."""
    if strategy == ALL_PAIRS:
        ids = kg_ids if kg_ids is not None else list(stats_by_id or ())
        return plan_all_pairs(ids)
    if strategy in ORDER_BASED:
        if stats_by_id is None or ordering is None:
            raise ConfigError(f"{strategy} needs KG statistics and an ordering")
        ordered = order_kgs(stats_by_id, ordering)
        builder = {TP_WINDOW: plan_windowing, TP_FIRST: plan_first_vs_rest, IM_ORDER: plan_im_order}
        return builder[strategy](ordered, variant=ordering.name)
    if strategy in SIMILARITY_BASED:
        if similarity is None:
            raise ConfigError(f"{strategy} needs text profiles")
        if strategy == TP_SIM:
            return plan_tp_similarity(similarity)
        return plan_im_similarity(similarity, linkage)
    raise ConfigError(f"unknown strategy {strategy!r}; expected one of {', '.join(STRATEGIES)}")
