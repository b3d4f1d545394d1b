"""Library-level experiment runs: load inputs, plan, execute, evaluate, repair.

The command-line interface is a thin layer over these functions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping, Sequence

from . import planner
from .alignment import Alignment, load_alignment
from .errors import ConfigError
from .evaluation import (
    Completeness,
    EvaluationReport,
    GoldStandard,
    evaluate_run,
    report_rows,
    rows_to_csv,
)
from .matcher import BaselineMatcher, ExternalMatcher, ExternalMatcherConfig, Matcher
from .merge import MergeStrategy
from .orchestrator import RunRecord, execute, leaf_membership
from .planner import ExecutionPlan, Linkage, OrderingSpec
from .rdf import EntityKind, KnowledgeGraph, read_ntriples, stats
from .repair import RepairConfig, RepairMethod, repair
from .testbed import MANIFEST, read_golds, read_sources
from .text import profile_kgs, similarity_matrix

DEFAULT_ORDERING = "ModelSizeDescending"


@dataclass(frozen=True)
class RunConfig:
    strategy: str = planner.ALL_PAIRS
    ordering: str | None = None
    linkage: str | None = None
    matcher: str = "baseline"
    external: dict | None = None
    merge_strategy: str = MergeStrategy.NO_DRIFT.value
    repair: dict | None = None
    input_dir: str | None = None
    gold_dir: str | None = None
    output_dir: str | None = None
    gold_completeness: str = Completeness.COMPLETE.value
    input_alignment: str | None = None
    jobs: int = 1
    warm_start: bool = False
    feed_alignment: bool = False

    _ALIASES = {
        "mergeStrategy": "merge_strategy",
        "inputDir": "input_dir",
        "goldDir": "gold_dir",
        "outputDir": "output_dir",
        "goldCompleteness": "gold_completeness",
        "inputAlignment": "input_alignment",
        "warmStart": "warm_start",
        "feedAlignment": "feed_alignment",
    }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        kwargs = {}
        for key, value in data.items():
            key = cls._ALIASES.get(key, key)
            if key not in names:
                raise ConfigError(f"unknown configuration key {key!r}")
            kwargs[key] = value
        return cls(**kwargs)

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
        return cls.from_dict(data)

    def override(self, **changes: Any) -> "RunConfig":
        """Copy with every non-None value of ``changes`` applied."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def validate(self) -> None:
        if self.strategy not in planner.STRATEGIES:
            raise ConfigError(
                f"unknown strategy {self.strategy!r}; expected one of {', '.join(planner.STRATEGIES)}"
            )
        if self.ordering is not None and self.strategy not in planner.ORDER_BASED:
            raise ConfigError(f"ordering only applies to {', '.join(planner.ORDER_BASED)}")
        if self.linkage is not None and self.strategy != planner.IM_SIM:
            raise ConfigError("linkage only applies to im-sim")
        self.ordering_spec()
        self.linkage_value()
        self.merge_value()
        if self.matcher not in ("baseline", "external"):
            raise ConfigError(f"unknown matcher {self.matcher!r}")
        if self.matcher == "external" and not self.external:
            raise ConfigError("external matcher needs an 'external' section")
        if self.repair is not None:
            self.repair_config()
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        try:
            Completeness(self.gold_completeness)
        except ValueError as exc:
            raise ConfigError("goldCompleteness must be complete or partial") from exc

    def ordering_spec(self) -> OrderingSpec | None:
        if self.strategy not in planner.ORDER_BASED:
            return None
        return OrderingSpec.parse(self.ordering or DEFAULT_ORDERING)

    def linkage_value(self) -> Linkage:
        try:
            return Linkage((self.linkage or Linkage.AVERAGE.value).lower())
        except ValueError as exc:
            raise ConfigError(f"unknown linkage {self.linkage!r}") from exc

    def merge_value(self) -> MergeStrategy:
        try:
            return MergeStrategy(self.merge_strategy)
        except ValueError as exc:
            raise ConfigError(f"unknown merge strategy {self.merge_strategy!r}") from exc

    def repair_config(self) -> RepairConfig | None:
        if self.repair is None:
            return None
        try:
            return RepairConfig(
                RepairMethod(self.repair.get("method", RepairMethod.ERROR_DEGREE.value)),
                float(self.repair.get("threshold", 0.9)),
                bool(self.repair.get("reproduction", False)),
            )
        except ValueError as exc:
            raise ConfigError(f"bad repair section: {exc}") from exc

    def ordering_label(self) -> str:
        if self.strategy == planner.IM_SIM:
            return self.linkage_value().value.capitalize()
        spec = self.ordering_spec()
        return spec.name if spec else ""

    def make_matcher(self) -> Matcher:
        if self.matcher == "baseline":
            return BaselineMatcher(warm_start=self.warm_start)
        ext = dict(self.external or {})
        if "command" in ext:
            ext["command_template"] = ext.pop("command")
        if "workDir" in ext:
            ext["work_dir"] = ext.pop("workDir")
        if "oneToOne" in ext:
            ext["one_to_one"] = ext.pop("oneToOne")
        if ext.get("work_dir") is not None:
            ext["work_dir"] = Path(ext["work_dir"])
        try:
            return ExternalMatcher(ExternalMatcherConfig(**ext))
        except TypeError as exc:
            raise ConfigError(f"bad external matcher section: {exc}") from exc


# --- inputs ----------------------------------------------------------------


def load_kgs(input_dir: str | Path) -> list[KnowledgeGraph]:
    """Sources of a corpus directory (with manifest) or every ``*.nt`` file of a directory."""
    path = Path(input_dir)
    if not path.is_dir():
        raise ConfigError(f"input directory {path} does not exist")
    manifest = path / MANIFEST
    if manifest.exists():
        data = json.loads(manifest.read_text(encoding="utf-8"))
        return [read_ntriples(path / s["file"], s["id"]) for s in data["sources"]]
    if (path / "sources").is_dir():
        path = path / "sources"
    kgs = read_sources(path)
    if not kgs:
        raise ConfigError(f"no .nt files in {path}")
    return kgs


def load_golds(
    gold_dir: str | Path, completeness: Completeness = Completeness.COMPLETE
) -> list[GoldStandard]:
    path = Path(gold_dir)
    if not path.is_dir():
        raise ConfigError(f"gold directory {path} does not exist")
    if (path / "gold").is_dir():
        path = path / "gold"
    return read_golds(path, completeness)


def resolve_dirs(config: RunConfig) -> tuple[Path, Path]:
    """Input and gold directory; the gold directory defaults to ``<input>/gold``."""
    if config.input_dir is None:
        raise ConfigError("no input directory given")
    inp = Path(config.input_dir)
    gold = Path(config.gold_dir) if config.gold_dir else inp / "gold"
    return inp, gold


def kinds_of(kgs: Sequence[KnowledgeGraph]) -> dict[str, EntityKind]:
    out: dict[str, EntityKind] = {}
    for kg in sorted(kgs, key=lambda k: k.id):
        for e, k in kg.kinds.items():
            out.setdefault(e, k)
    return out


# --- runs ------------------------------------------------------------------


def build_plan(config: RunConfig, kgs: Sequence[KnowledgeGraph]) -> ExecutionPlan:
    config.validate()
    ids = sorted(kg.id for kg in kgs)
    if config.strategy in planner.SIMILARITY_BASED:
        sim = similarity_matrix(profile_kgs(sorted(kgs, key=lambda k: k.id)))
        return planner.make_plan(config.strategy, similarity=sim, linkage=config.linkage_value())
    stats_by_id = {kg.id: stats(kg) for kg in kgs}
    return planner.make_plan(
        config.strategy, stats_by_id, ordering=config.ordering_spec(), kg_ids=ids
    )


@dataclass
class ExperimentResult:
    config: RunConfig
    plan: ExecutionPlan
    run: RunRecord
    report: EvaluationReport
    repaired: EvaluationReport | None = None
    repaired_alignment: Alignment | None = None
    rows: list[dict[str, str]] = field(default_factory=list)

    @property
    def runtime_ms(self) -> float:
        return self.run.total_runtime * 1000


def run_experiment(
    config: RunConfig,
    kgs: Sequence[KnowledgeGraph],
    golds: Sequence[GoldStandard],
    matcher: Matcher | None = None,
) -> ExperimentResult:
    """Plan, execute, close (when needed), evaluate and optionally repair."""
    plan = build_plan(config, kgs)
    matcher = matcher or config.make_matcher()
    seed = load_alignment(config.input_alignment) if config.input_alignment else None
    run = execute(
        plan, kgs, matcher, config.merge_value(),
        jobs=config.jobs, input_alignment=seed, feed_alignment=config.feed_alignment,
    )
    membership = leaf_membership(kgs)
    kinds = kinds_of(kgs)
    report = evaluate_run(run, golds, membership, kinds)
    label = config.ordering_label()
    rows = report_rows(report, config.strategy, label, run.matcher, run.total_runtime * 1000)
    result = ExperimentResult(config, plan, run, report, rows=rows)
    rc = config.repair_config()
    if rc is not None:
        fixed = repair(run.raw_alignment, membership, rc)
        result.repaired_alignment = fixed
        result.repaired = evaluate_run(replace(run, raw_alignment=fixed), golds, membership, kinds)
        result.rows += report_rows(
            result.repaired, f"{config.strategy}+{rc.label}", label, run.matcher, run.total_runtime * 1000
        )
    return result


COMPARE_COLUMNS = (
    "strategy", "ordering", "matcher", "micro_precision", "micro_recall", "micro_f1",
    "macro_f1", "matcher_calls", "runtime_ms",
)


def compare_row(result: ExperimentResult) -> dict[str, str]:
    m = result.report.micro
    return {
        "strategy": result.config.strategy,
        "ordering": result.config.ordering_label(),
        "matcher": result.run.matcher,
        "micro_precision": f"{m.precision:.6f}",
        "micro_recall": f"{m.recall:.6f}",
        "micro_f1": f"{m.f1:.6f}",
        "macro_f1": f"{result.report.macro.f1:.6f}",
        "matcher_calls": str(result.run.matcher_calls),
        "runtime_ms": f"{result.runtime_ms:.3f}",
    }


def compare(
    configs: Sequence[RunConfig],
    kgs: Sequence[KnowledgeGraph],
    golds: Sequence[GoldStandard],
) -> list[ExperimentResult]:
    """Run each configuration over the same corpus, each with a fresh matcher."""
    return [run_experiment(c, kgs, golds) for c in configs]


def compare_csv(results: Sequence[ExperimentResult]) -> str:
    return rows_to_csv([compare_row(r) for r in results], COMPARE_COLUMNS)


def strategy_grid(base: RunConfig, orderings: Sequence[str] = (DEFAULT_ORDERING,)) -> list[RunConfig]:
    """One configuration per strategy, orderings expanded for order-based ones."""
    out = []
    for s in planner.STRATEGIES:
        if s in planner.ORDER_BASED:
            out += [replace(base, strategy=s, ordering=o, linkage=None) for o in orderings]
        elif s == planner.IM_SIM:
            out.append(replace(base, strategy=s, ordering=None, linkage=base.linkage))
        else:
            out.append(replace(base, strategy=s, ordering=None, linkage=None))
    return out
