"""Run an execution plan: binary matches, merges, warm starts and timing."""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .alignment import Alignment, Correspondence
from .errors import ConfigError, MultiMatchError, TaskFailed, UnresolvableEntity
from .matcher import Matcher
from .merge import MergeStrategy, merge, select_roles
from .planner import ExecutionPlan, MatchTask
from .rdf import KnowledgeGraph, is_builtin

log = logging.getLogger(__name__)


def leaf_membership(kgs: Iterable[KnowledgeGraph]) -> dict[str, str]:
    """Map every non-vocabulary IRI to the leaf graph that declares it.

    An IRI used by several leaves is attributed to the lexicographically
    first of them.
    """
    out: dict[str, str] = {}
    for kg in sorted(kgs, key=lambda k: k.id):
        for e in kg.entities:
            if not is_builtin(e):
                out.setdefault(e, kg.id)
    return out


@dataclass
class RewriteLog:
    """IRI rewrites performed by merges plus leaf provenance of IRIs."""

    provenance: dict[str, str]
    rewrites: dict[str, str] = field(default_factory=dict)

    def record(self, old: str, new: str) -> None:
        if old != new:
            self.rewrites[old] = new

    def resolve(self, entity: str) -> str:
        """Follow rewrites until an IRI with leaf provenance is reached."""
        seen = set()
        while entity not in self.provenance:
            if entity in seen or entity not in self.rewrites:
                raise UnresolvableEntity(entity)
            seen.add(entity)
            entity = self.rewrites[entity]
        return entity


def resolve_to_leaves(c: Correspondence, rewrite_log: RewriteLog) -> Correspondence:
    e1 = rewrite_log.resolve(c.entity_one)
    e2 = rewrite_log.resolve(c.entity_two)
    if (e1, e2) == (c.entity_one, c.entity_two):
        return c
    return Correspondence(e1, e2, c.relation, c.confidence)


@dataclass
class RunRecord:
    strategy: str
    variant: str
    matcher: str
    per_task_runtimes: list[float]
    merge_runtimes: list[float]
    raw_alignment: Alignment
    closure_needed: bool
    matcher_calls: int
    task_log: list[dict] = field(default_factory=list)

    @property
    def total_runtime(self) -> float:
        return sum(self.per_task_runtimes) + sum(self.merge_runtimes)

    def write_log(self, path: str | Path) -> None:
        """JSON-lines run log, one record per task."""
        with open(path, "w", encoding="utf-8") as fh:
            for rec in self.task_log:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")


def _timed(fn, *args):
    start = time.perf_counter()
    result = fn(*args)
    return result, time.perf_counter() - start


def execute(
    plan: ExecutionPlan,
    kgs: Mapping[str, KnowledgeGraph] | Sequence[KnowledgeGraph],
    matcher: Matcher,
    merge_strategy: MergeStrategy = MergeStrategy.NO_DRIFT,
    *,
    jobs: int = 1,
    input_alignment: Alignment | None = None,
    feed_alignment: bool = False,
) -> RunRecord:
    """Execute ``plan`` and collect the leaf-resolved system alignment.

    ``input_alignment`` holds already known correspondences between leaf
    entities; each match call receives the part of it that links its two
    inputs. With ``feed_alignment`` the correspondences found by earlier
    tasks are added to that. ``jobs`` > 1 runs the tasks of non-merging plans
    concurrently; merging plans always run in order because each union feeds
    the next task.
    """
    if not isinstance(kgs, Mapping):
        kgs = {kg.id: kg for kg in kgs}
    missing = set(plan.leaves) - set(kgs)
    if missing:
        raise ConfigError(f"plan references unknown graphs: {sorted(missing)}")
    leaves = {k: kgs[k] for k in plan.leaves}
    rewrite_log = RewriteLog(leaf_membership(leaves.values()))
    seed = list(input_alignment or ())
    if plan.merge_after_match:
        return _execute_incremental(plan, leaves, matcher, merge_strategy, rewrite_log, seed, feed_alignment)
    return _execute_pairs(plan, leaves, matcher, rewrite_log, jobs, seed, feed_alignment)


def _input_alignment(acc: list[Correspondence], source, target) -> Alignment:
    s, t = source.entities, target.entities
    return Alignment(
        c
        for c in acc
        if (c.entity_one in s and c.entity_two in t) or (c.entity_one in t and c.entity_two in s)
    )


def _run_match(task: MatchTask, matcher: Matcher, source, target, input_alignment):
    try:
        return _timed(matcher.match, source, target, input_alignment)
    except MultiMatchError as exc:
        raise TaskFailed(task.index, exc) from exc


def _execute_pairs(plan, leaves, matcher, rewrite_log, jobs, seed, feed_alignment) -> RunRecord:
    def run(task: MatchTask, acc=()):
        source, target = leaves[task.source], leaves[task.target]
        known = seed + list(acc) if feed_alignment else seed
        return _run_match(task, matcher, source, target, _input_alignment(known, source, target))

    if jobs > 1 and not feed_alignment:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, plan.tasks))
    else:
        results, acc = [], []
        for task in plan.tasks:
            res = run(task, acc)
            acc.extend(res[0])
            results.append(res)

    raw: list[Correspondence] = []
    runtimes, task_log = [], []
    for task, (alignment, seconds) in zip(plan.tasks, results):
        raw.extend(resolve_to_leaves(c, rewrite_log) for c in alignment)
        runtimes.append(seconds)
        task_log.append(_log_entry(task, seconds, 0.0, len(alignment)))
    return RunRecord(
        plan.strategy, plan.variant, matcher.name, runtimes, [], Alignment(raw),
        plan.closure_needed, len(plan.tasks), task_log,
    )


def _execute_incremental(plan, leaves, matcher, strategy, rewrite_log, seed, feed_alignment) -> RunRecord:
    nodes: dict[str, KnowledgeGraph] = dict(leaves)
    produced_at: dict[str, int] = {}
    raw: list[Correspondence] = []
    runtimes, merge_times, task_log = [], [], []
    warm = matcher.supports_warm_start
    for task in plan.tasks:
        source, target = select_roles(nodes[task.source], nodes[task.target], produced_at)
        inp = _input_alignment(seed + raw if feed_alignment else seed, source, target)
        alignment, match_s = _run_match(task, matcher, source, target, inp)
        union_id = task.produces
        try:
            result, merge_s = _timed(merge, target, source, alignment, strategy, union_id)
        except MultiMatchError as exc:
            raise TaskFailed(task.index, exc) from exc
        for old, new in result.rewrites.items():
            rewrite_log.record(old, new)
        if warm:
            matcher.update_index(result.added_triples, base_id=target.id, new_id=union_id)
        del nodes[task.source], nodes[task.target]
        nodes[union_id] = result.union
        produced_at[union_id] = task.index
        try:
            raw.extend(resolve_to_leaves(c, rewrite_log) for c in alignment)
        except UnresolvableEntity as exc:
            raise TaskFailed(task.index, exc) from exc
        runtimes.append(match_s)
        merge_times.append(merge_s)
        entry = _log_entry(task, match_s, merge_s, len(alignment))
        entry.update(
            source_role=source.id, target_role=target.id, added_triples=len(result.added_triples)
        )
        task_log.append(entry)
        log.debug("task %d: %s -> %s, %d correspondences", task.index, source.id, target.id, len(alignment))
    return RunRecord(
        plan.strategy, plan.variant, matcher.name, runtimes, merge_times, Alignment(raw),
        plan.closure_needed, len(plan.tasks), task_log,
    )


def _log_entry(task: MatchTask, match_s: float, merge_s: float, n: int) -> dict:
    return {
        "task_index": task.index,
        "source": task.source,
        "target": task.target,
        "match_ms": round(match_s * 1000, 3),
        "merge_ms": round(merge_s * 1000, 3),
        "correspondences": n,
        "error": None,
    }
