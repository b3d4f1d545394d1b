"""Command-line entry point.

Every command maps onto library calls in :mod:`multimatch.experiment`,
:mod:`multimatch.testbed`, :mod:`multimatch.text` and :mod:`multimatch.repair`.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import planner
from .alignment import load_alignment, save_alignment
from .errors import ConfigError, EvaluationError, MatcherError, MultiMatchError, TaskFailed
from .evaluation import Completeness, evaluate_alignment, report_rows, write_results_csv
from .experiment import (
    DEFAULT_ORDERING,
    RunConfig,
    build_plan,
    compare,
    compare_csv,
    kinds_of,
    load_golds,
    load_kgs,
    resolve_dirs,
    run_experiment,
    strategy_grid,
)
from .orchestrator import leaf_membership
from .repair import RepairConfig, RepairMethod, repair
from .testbed import CorpusSpec, generate, write_corpus
from .text import dump_profiles, profile_kgs, similarity_matrix

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_MATCHER = 3
EXIT_EVALUATION = 4

EPILOG = """\
exit codes:
  0  success
  2  configuration or input error (bad config, missing directory, malformed file)
  3  matcher failure (timeout, nonzero exit, invalid or foreign output)
  4  evaluation error (entity of unknown source)
"""

log = logging.getLogger("multimatch")


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, TaskFailed):
        exc = exc.cause
    if isinstance(exc, MatcherError):
        return EXIT_MATCHER
    if isinstance(exc, EvaluationError):
        return EXIT_EVALUATION
    return EXIT_CONFIG


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON run configuration; flags override its values")
    p.add_argument("--input", dest="input_dir", help="corpus directory or directory of .nt files")
    p.add_argument("--gold", dest="gold_dir", help="gold directory (default: <input>/gold)")
    p.add_argument("--output", dest="output_dir", help="output directory")
    p.add_argument("--strategy", choices=planner.STRATEGIES)
    p.add_argument("--ordering", help="e.g. ModelSizeDescending or ModelSize,Desc")
    p.add_argument("--linkage", choices=["single", "average", "complete"])
    p.add_argument("--matcher", choices=["baseline", "external"])
    p.add_argument("--matcher-command", help="external matcher command template")
    p.add_argument("--merge", dest="merge_strategy", choices=["no-drift", "full"])
    p.add_argument("--repair", choices=[m.value for m in RepairMethod])
    p.add_argument("--threshold", type=float, help="error-degree repair threshold")
    p.add_argument("--partial-gold", action="store_true", help="treat gold standards as partial")
    p.add_argument("--input-alignment", help="TSV of already known correspondences between leaf entities")
    p.add_argument("--jobs", type=int, help="worker count for independent tasks (default 1)")
    p.add_argument("--warm-start", action="store_true", default=None)


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.RawDescriptionHelpFormatter
    parser = argparse.ArgumentParser(
        prog="multimatch",
        description="Multi-source knowledge graph matching with binary matchers.",
        epilog=EPILOG,
        formatter_class=fmt,
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a synthetic corpus", epilog=EPILOG, formatter_class=fmt)
    p.add_argument("spec", help="JSON corpus spec")
    p.add_argument("--out", required=True, help="corpus directory to create")

    p = sub.add_parser("profile", help="tf-idf profiles and similarity matrix", epilog=EPILOG, formatter_class=fmt)
    p.add_argument("--input", dest="input_dir", required=True)
    p.add_argument("--profiles", help="write per-KG term weights (TSV) here")

    p = sub.add_parser("plan", help="print the execution plan", epilog=EPILOG, formatter_class=fmt)
    _add_run_options(p)

    p = sub.add_parser("run", help="plan, match, evaluate and append CSV rows", epilog=EPILOG, formatter_class=fmt)
    _add_run_options(p)

    p = sub.add_parser("compare", help="strategy-by-matcher grid", epilog=EPILOG, formatter_class=fmt)
    _add_run_options(p)
    p.add_argument("--configs", nargs="*", default=[], help="several JSON run configurations")
    p.add_argument("--grid", action="store_true", help="run all six strategies")
    p.add_argument("--orderings", nargs="*", help="orderings for the grid (default ModelSizeDescending)")
    p.add_argument("--csv", help="comparison CSV path (default: <output>/comparison.csv or stdout)")

    p = sub.add_parser("repair", help="repair an alignment and evaluate it", epilog=EPILOG, formatter_class=fmt)
    p.add_argument("alignment", help="alignment TSV over leaf IRIs")
    p.add_argument("--input", dest="input_dir", required=True)
    p.add_argument("--gold", dest="gold_dir")
    p.add_argument("--method", choices=[m.value for m in RepairMethod], default="error-degree")
    p.add_argument("--threshold", type=float, default=0.9)
    p.add_argument("--out", help="write the repaired alignment here")
    p.add_argument("--csv", help="write evaluation rows here")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.load(args.config) if args.config else RunConfig()
    external = None
    if args.matcher_command:
        external = dict(config.external or {}, command=args.matcher_command)
    repair_section = None
    if args.repair or args.threshold is not None:
        repair_section = dict(config.repair or {})
        if args.repair:
            repair_section["method"] = args.repair
        if args.threshold is not None:
            repair_section["threshold"] = args.threshold
    config = config.override(
        strategy=args.strategy,
        ordering=args.ordering,
        linkage=args.linkage,
        matcher=args.matcher,
        external=external,
        merge_strategy=args.merge_strategy,
        repair=repair_section,
        input_dir=args.input_dir,
        gold_dir=args.gold_dir,
        output_dir=args.output_dir,
        gold_completeness=Completeness.PARTIAL.value if args.partial_gold else None,
        input_alignment=args.input_alignment,
        jobs=args.jobs,
        warm_start=args.warm_start,
    )
    config.validate()
    return config


def _inputs(config: RunConfig):
    inp, gold = resolve_dirs(config)
    kgs = load_kgs(inp)
    golds = load_golds(gold, Completeness(config.gold_completeness))
    return kgs, golds


def cmd_generate(args) -> int:
    try:
        data = json.loads(Path(args.spec).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read spec {args.spec}: {exc}") from exc
    corpus = generate(CorpusSpec.from_dict(data))
    print(write_corpus(corpus, args.out))
    return EXIT_OK


def cmd_profile(args) -> int:
    kgs = sorted(load_kgs(args.input_dir), key=lambda k: k.id)
    profiles = profile_kgs(kgs)
    if args.profiles:
        dump_profiles(profiles, args.profiles)
    sim = similarity_matrix(profiles)
    print("\t".join(["kg", *sim.ids]))
    for i, a in enumerate(sim.ids):
        print("\t".join([a, *(f"{v:.6f}" for v in sim.values[i])]))
    return EXIT_OK


def cmd_plan(args) -> int:
    config = config_from_args(args)
    inp, _ = resolve_dirs(config)
    plan = build_plan(config, load_kgs(inp))
    sys.stdout.write(plan.dump())
    return EXIT_OK


def cmd_run(args) -> int:
    config = config_from_args(args)
    kgs, golds = _inputs(config)
    result = run_experiment(config, kgs, golds)
    out = Path(config.output_dir or ".")
    out.mkdir(parents=True, exist_ok=True)
    write_results_csv(result.rows, out / "results.csv", append=True)
    result.run.write_log(out / f"run-{config.strategy}.jsonl")
    (out / "plan.tsv").write_text(result.plan.dump(), encoding="utf-8")
    if result.repaired_alignment is not None:
        save_alignment(result.repaired_alignment, out / "repaired.tsv")
    micro = result.report.micro
    print(
        f"{config.strategy} {config.ordering_label() or '-'} P={micro.precision:.4f} "
        f"R={micro.recall:.4f} F1={micro.f1:.4f} calls={result.run.matcher_calls}"
    )
    if result.repaired is not None:
        print(f"repaired F1={result.repaired.micro.f1:.4f}")
    return EXIT_OK


def cmd_compare(args) -> int:
    base = config_from_args(args)
    if args.configs:
        configs = [RunConfig.load(c).override(input_dir=base.input_dir, gold_dir=base.gold_dir) for c in args.configs]
    elif args.grid or args.strategy is None:
        orderings = args.orderings or [DEFAULT_ORDERING]
        configs = strategy_grid(base, orderings)
    else:
        configs = [base]
    for c in configs:
        c.validate()
    kgs, golds = _inputs(base)
    text = compare_csv(compare(configs, kgs, golds))
    target = args.csv or (str(Path(base.output_dir) / "comparison.csv") if base.output_dir else None)
    if target:
        Path(target).parent.mkdir(parents=True, exist_ok=True)
        Path(target).write_text(text, encoding="utf-8")
        print(target)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_repair(args) -> int:
    kgs = load_kgs(args.input_dir)
    gold_dir = args.gold_dir or str(Path(args.input_dir) / "gold")
    golds = load_golds(gold_dir)
    membership = leaf_membership(kgs)
    alignment = load_alignment(args.alignment)
    fixed = repair(alignment, membership, RepairConfig(RepairMethod(args.method), args.threshold))
    kinds = kinds_of(kgs)
    before = evaluate_alignment(alignment, golds, membership, kinds)
    after = evaluate_alignment(fixed, golds, membership, kinds)
    if args.out:
        save_alignment(fixed, args.out)
    if args.csv:
        label = RepairConfig(RepairMethod(args.method), args.threshold).label
        rows = report_rows(before, "input", "", "-") + report_rows(after, label, "", "-")
        write_results_csv(rows, args.csv)
    print(f"kept {len(fixed)} of {len(alignment)} correspondences")
    print(f"F1 before={before.micro.f1:.4f} after={after.micro.f1:.4f}")
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "profile": cmd_profile,
    "plan": cmd_plan,
    "run": cmd_run,
    "compare": cmd_compare,
    "repair": cmd_repair,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s"
    )
    try:
        return COMMANDS[args.command](args)
    except MultiMatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
