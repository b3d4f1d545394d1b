"""Pairwise evaluation of multi-source alignments against gold standards."""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .alignment import Alignment, Correspondence, Pair, closure, expand_to_pairs, split_by_pair
from .orchestrator import RunRecord
from .rdf import EntityKind


class Completeness(enum.Enum):
    COMPLETE = "complete"
    PARTIAL = "partial"


@dataclass(frozen=True)
class GoldStandard:
    pair: Pair
    alignment: Alignment
    completeness: Completeness = Completeness.COMPLETE


def scores(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    """Precision, recall and F1; an empty denominator counts as perfect."""
    p = tp / (tp + fp) if tp + fp else 1.0
    r = tp / (tp + fn) if tp + fn else 1.0
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f1


@dataclass(frozen=True)
class Counts:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    def __add__(self, other: "Counts") -> "Counts":
        return Counts(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn)

    @property
    def precision(self) -> float:
        return scores(self.tp, self.fp, self.fn)[0]

    @property
    def recall(self) -> float:
        return scores(self.tp, self.fp, self.fn)[1]

    @property
    def f1(self) -> float:
        return scores(self.tp, self.fp, self.fn)[2]

    @property
    def has_gold(self) -> bool:
        return self.tp + self.fn > 0


KINDS = (EntityKind.CLASS, EntityKind.PROPERTY, EntityKind.INSTANCE)


@dataclass(frozen=True)
class PairResult:
    pair: Pair
    counts: Counts
    by_kind: dict[EntityKind, Counts] = field(default_factory=dict)

    @property
    def tp(self) -> int:
        return self.counts.tp

    @property
    def fp(self) -> int:
        return self.counts.fp

    @property
    def fn(self) -> int:
        return self.counts.fn

    def kind(self, kind: EntityKind | None) -> Counts:
        return self.counts if kind is None else self.by_kind.get(kind, Counts())


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class EvaluationReport:
    per_pair: tuple[PairResult, ...]
    micro: Metrics
    macro: Metrics
    micro_by_kind: dict[EntityKind, Metrics] = field(default_factory=dict)
    macro_by_kind: dict[EntityKind, Metrics] = field(default_factory=dict)

    @property
    def micro_f1(self) -> float:
        return self.micro.f1

    @property
    def total(self) -> Counts:
        out = Counts()
        for r in self.per_pair:
            out = out + r.counts
        return out


def prepare_system_alignment(
    run: RunRecord, membership: Mapping[str, str], pairs: Iterable[Pair]
) -> dict[Pair, Alignment]:
    """Per-pair system alignments, through the closure when the run needs it."""
    pairs = list(pairs)
    if run.closure_needed:
        clusters = closure(run.raw_alignment, membership)
        return {p: expand_to_pairs(clusters, p) for p in pairs}
    split = split_by_pair(run.raw_alignment, membership)
    return {p: split.get(p) for p in pairs}


def _kind_of(c: Correspondence, kinds: Mapping[str, EntityKind]) -> EntityKind:
    return kinds.get(c.entity_one) or kinds.get(c.entity_two) or EntityKind.INSTANCE


def evaluate_pair(
    system: Alignment, gold: GoldStandard, kinds: Mapping[str, EntityKind]
) -> PairResult:
    """Compare one pair's system alignment with its gold standard.

    Confidences are ignored. With a partial gold standard a wrong
    correspondence only counts as false positive when at least one of its
    entities occurs in the gold standard.
    """
    ref = gold.alignment
    tally: dict[EntityKind, list[int]] = {k: [0, 0, 0] for k in KINDS}
    for c in ref:
        tally[_kind_of(c, kinds)][0 if c in system else 2] += 1
    gold_entities = ref.entities() if gold.completeness is Completeness.PARTIAL else None
    for c in system:
        if c in ref:
            continue
        if gold_entities is not None and not (
            c.entity_one in gold_entities or c.entity_two in gold_entities
        ):
            continue
        tally[_kind_of(c, kinds)][1] += 1
    by_kind = {k: Counts(*v) for k, v in tally.items()}
    total = Counts()
    for v in by_kind.values():
        total = total + v
    return PairResult(gold.pair, total, by_kind)


def _mean_metrics(counts: Sequence[Counts]) -> Metrics | None:
    used = [c for c in counts if c.has_gold]
    if not used:
        return None
    n = len(used)
    return Metrics(
        sum(c.precision for c in used) / n,
        sum(c.recall for c in used) / n,
        sum(c.f1 for c in used) / n,
    )


def _micro(counts: Iterable[Counts]) -> Metrics:
    total = Counts()
    for c in counts:
        total = total + c
    return Metrics(*scores(total.tp, total.fp, total.fn))


def aggregate(per_pair: Sequence[PairResult]) -> EvaluationReport:
    """Micro (summed counts) and macro (mean over pairs with gold) metrics.

    Pairs without any gold correspondence are left out of the macro mean; if
    no pair has gold, macro equals micro.
    """
    if not per_pair:
        raise ValueError("aggregate needs at least one pair result")
    micro = _micro(r.counts for r in per_pair)
    macro = _mean_metrics([r.counts for r in per_pair]) or micro
    micro_k, macro_k = {}, {}
    for k in KINDS:
        ks = [r.kind(k) for r in per_pair]
        micro_k[k] = _micro(ks)
        macro_k[k] = _mean_metrics(ks) or micro_k[k]
    return EvaluationReport(tuple(per_pair), micro, macro, micro_k, macro_k)


def evaluate_run(
    run: RunRecord,
    golds: Sequence[GoldStandard],
    membership: Mapping[str, str],
    kinds: Mapping[str, EntityKind],
) -> EvaluationReport:
    system = prepare_system_alignment(run, membership, [g.pair for g in golds])
    return aggregate([evaluate_pair(system[g.pair], g, kinds) for g in golds])


def evaluate_alignment(
    alignment: Alignment,
    golds: Sequence[GoldStandard],
    membership: Mapping[str, str],
    kinds: Mapping[str, EntityKind],
) -> EvaluationReport:
    """Evaluate an already leaf-resolved alignment without closure."""
    split = split_by_pair(alignment, membership)
    return aggregate([evaluate_pair(split.get(g.pair), g, kinds) for g in golds])


# --- results CSV -----------------------------------------------------------

CSV_COLUMNS = (
    "strategy", "ordering", "matcher", "pair", "kind",
    "precision", "recall", "f1", "tp", "fp", "fn", "runtime_ms",
)
_KIND_LABELS = ((None, "all"),) + tuple((k, k.value) for k in KINDS)


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def report_rows(
    report: EvaluationReport,
    strategy: str,
    ordering: str,
    matcher: str,
    runtime_ms: float | None = None,
) -> list[dict[str, str]]:
    """Rows for every pair and kind, then micro and macro aggregate rows."""
    rows = []
    base = {"strategy": strategy, "ordering": ordering, "matcher": matcher}
    for r in report.per_pair:
        for kind, label in _KIND_LABELS:
            c = r.kind(kind)
            rows.append({
                **base, "pair": f"{r.pair[0]}-{r.pair[1]}", "kind": label,
                "precision": _fmt(c.precision), "recall": _fmt(c.recall), "f1": _fmt(c.f1),
                "tp": str(c.tp), "fp": str(c.fp), "fn": str(c.fn), "runtime_ms": "",
            })
    runtime = "" if runtime_ms is None else f"{runtime_ms:.3f}"
    for agg in ("micro", "macro"):
        for kind, label in _KIND_LABELS:
            if kind is None:
                m = report.micro if agg == "micro" else report.macro
            else:
                m = (report.micro_by_kind if agg == "micro" else report.macro_by_kind)[kind]
            total = Counts()
            for r in report.per_pair:
                total = total + r.kind(kind)
            rows.append({
                **base, "pair": agg, "kind": label,
                "precision": _fmt(m.precision), "recall": _fmt(m.recall), "f1": _fmt(m.f1),
                "tp": str(total.tp), "fp": str(total.fp), "fn": str(total.fn),
                "runtime_ms": runtime,
            })
    return rows


def write_results_csv(rows: Iterable[Mapping[str, str]], path: str | Path, append: bool = False) -> None:
    path = Path(path)
    new_file = not (append and path.exists() and path.stat().st_size > 0)
    with open(path, "a" if append else "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
        if new_file:
            writer.writeheader()
        writer.writerows(rows)


def rows_to_csv(rows: Iterable[Mapping[str, str]], columns: Sequence[str] = CSV_COLUMNS) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
