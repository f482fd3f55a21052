"""Command-line entry point.

Subcommands cover the whole workflow: ingest, repair, features, train,
classify, annotate-export, judge-llm, exec, report, pipeline.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .analysis import DEFAULT_KNOWN_MODULES, FEATURE_NAMES, FeatureVector, extract_features
from .annotation import derive_label, parse_annotations, strip_annotations
from .corpus import CorpusError, load_corpus, repair_record, save_corpus
from .harness import ExecConfig, run_corpus, write_outcome_log
from .judge_llm import JudgeConfig, judge_corpus
from .parsing import ParseFailure, dump, parse_program
from .report import (PipelineConfig, ReportError, class_distribution,
                     feature_rows, pipeline, render)
from .taxonomy import TaxonomyLabel
from . import tree as tree_judge


def _known_modules(args) -> frozenset[str]:
    if args.known_modules:
        return frozenset(m.strip() for m in args.known_modules.split(",") if m.strip())
    return DEFAULT_KNOWN_MODULES


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    return json.loads(Path(path).read_text(encoding="utf-8"))


def cmd_ingest(args) -> int:
    records = load_corpus(args.corpus)
    print(f"{len(records)} records")
    return 0


def cmd_repair(args) -> int:
    records = load_corpus(args.corpus)
    known = _known_modules(args)
    repaired, reports = [], []
    for record in records:
        fixed, report = repair_record(record, known)
        repaired.append(fixed)
        reports.append(report)
    save_corpus(repaired, args.out)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as handle:
            for rep in reports:
                handle.write(json.dumps({
                    "record_id": rep.record_id,
                    "imports_added": rep.imports_added,
                    "dedent_applied": rep.dedent_applied,
                    "still_unparseable": rep.still_unparseable,
                }, sort_keys=True) + "\n")
    n_bad = sum(1 for r in reports if r.still_unparseable)
    print(f"repaired {len(records)} records; {n_bad} still unparseable")
    return 0


def cmd_features(args) -> int:
    records = load_corpus(args.corpus)
    if args.dump_ast:
        for record in records:
            print(f"# {record.id}")
            try:
                print(dump(parse_program(record.source)))
            except ParseFailure as exc:
                print(f"  <parse failure: {exc}>")
    rows = feature_rows(records, _known_modules(args))
    with open(args.out, "w", encoding="utf-8") as handle:
        for row in rows:
            handle.write(json.dumps(row, sort_keys=True) + "\n")
    print(f"wrote {len(rows)} feature rows to {args.out}")
    return 0


def _load_label_rows(path):
    rows = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            raw = json.loads(line)
            fv = FeatureVector(*(int(raw[name]) for name in FEATURE_NAMES))
            rows.append((fv, TaxonomyLabel(int(raw["label"]))))
    return rows


def cmd_train(args) -> int:
    rows = _load_label_rows(args.labels)
    params = tree_judge.TrainParams(max_depth=args.max_depth,
                                    min_leaf=args.min_leaf, seed=args.seed,
                                    criterion=args.criterion)
    if args.holdout > 0:
        train_rows, held_rows = tree_judge.train_test_split(
            rows, args.holdout, seed=args.seed, stratified=args.stratified)
    else:
        train_rows, held_rows = rows, []
    model = tree_judge.train(train_rows, params)
    tree_judge.save(model, args.out)
    train_acc = tree_judge.evaluate(model, train_rows).accuracy
    print(f"trained on {len(train_rows)} rows; train accuracy {train_acc:.3f}")
    if held_rows:
        held_acc = tree_judge.evaluate(model, held_rows).accuracy
        print(f"held-out ({len(held_rows)} rows) accuracy {held_acc:.3f}")
    return 0


def cmd_classify(args) -> int:
    model = tree_judge.load(args.model)
    records = load_corpus(args.corpus)
    n_skipped = 0
    with open(args.out, "w", encoding="utf-8") as handle:
        for record in records:
            try:
                module = parse_program(record.source)
            except ParseFailure as exc:
                n_skipped += 1
                handle.write(json.dumps({"id": record.id, "label": None,
                                         "error": str(exc)}, sort_keys=True) + "\n")
                continue
            label = tree_judge.predict(model, extract_features(module))
            handle.write(json.dumps({"id": record.id, "label": int(label),
                                     "label_name": label.short_name},
                                    sort_keys=True) + "\n")
    print(f"classified {len(records) - n_skipped} records "
          f"({n_skipped} unparseable) -> {args.out}")
    return 0


def cmd_annotate_export(args) -> int:
    """Convert annotated program files into labeled feature rows."""
    paths = sorted(Path(args.annotations).glob("*.txt")) \
        if Path(args.annotations).is_dir() else [Path(args.annotations)]
    n = 0
    with open(args.out, "w", encoding="utf-8") as handle:
        for path in paths:
            annotations = parse_annotations(path.read_text(encoding="utf-8"))
            label = derive_label(annotations)
            module = parse_program(strip_annotations(annotations))
            fv = extract_features(module)
            row = {"id": path.stem, "label": int(label)}
            row.update(dict(zip(FEATURE_NAMES, fv.as_tuple())))
            handle.write(json.dumps(row, sort_keys=True) + "\n")
            n += 1
    print(f"exported {n} training rows to {args.out}")
    return 0


def cmd_judge_llm(args) -> int:
    records = load_corpus(args.corpus)
    config = JudgeConfig(model_name=args.model_name, cache_dir=args.cache_dir,
                         max_retries=args.max_retries)
    if args.endpoint:
        config.endpoint = args.endpoint
    judgements = judge_corpus(records, config)
    with open(args.out, "w", encoding="utf-8") as handle:
        for j in judgements:
            handle.write(json.dumps({
                "record_id": j.record_id,
                "label": int(j.label) if j.label else None,
                "attempt": j.attempt,
                "from_cache": j.from_cache,
                "error": j.error,
            }, sort_keys=True) + "\n")
    n_failed = sum(1 for j in judgements if j.label is None)
    print(f"judged {len(judgements)} records ({n_failed} failures) -> {args.out}")
    return 0


def cmd_exec(args) -> int:
    records = load_corpus(args.corpus)
    config = ExecConfig(shim_path=args.shim, timeout=args.timeout,
                        entry_name=args.entry, jobs=args.jobs)
    outcomes = run_corpus(records, config)
    write_outcome_log(outcomes, args.out)
    n_ok = sum(1 for o in outcomes if o.status.value == "ok")
    print(f"executed {len(outcomes)} records ({n_ok} ok) -> {args.out}")
    return 0


def cmd_report(args) -> int:
    records = load_corpus(args.corpus)
    labels = {}
    with open(args.labels, encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                raw = json.loads(line)
                if raw.get("label"):
                    labels[raw["id"]] = TaxonomyLabel(raw["label"])
    table = class_distribution(records, labels, args.group_by)
    render(table, args.format, args.out)
    print(f"wrote {args.format} report to {args.out}")
    return 0


def cmd_pipeline(args) -> int:
    file_config = _load_config(args.config)
    config = PipelineConfig(
        known_modules=_known_modules(args),
        run_exec=not args.no_exec,
        shim_path=args.shim or file_config.get("shim_path"),
        timeout=args.timeout,
        entry_name=args.entry,
        jobs=args.jobs,
        seed=args.seed,
    )
    result = pipeline(args.corpus, args.model, config, args.run_dir)
    print(f"pipeline complete: {result.manifest['n_classified']} classified, "
          f"{len(result.discarded)} discarded -> {result.run_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="proglogic",
        description="Classify the logical soundness of LLM-generated math programs.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--jobs", type=int, default=4)
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate a corpus file")
    p.add_argument("--corpus", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("repair", help="apply import and indentation repairs")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    p.add_argument("--known-modules")
    p.set_defaults(func=cmd_repair)

    p = sub.add_parser("features", help="extract structural features")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--known-modules")
    p.add_argument("--dump-ast", action="store_true")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("train", help="train the code-structure judge")
    p.add_argument("--labels", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-depth", type=int, default=5)
    p.add_argument("--min-leaf", type=int, default=1)
    p.add_argument("--criterion", choices=("gini", "entropy"), default="gini")
    p.add_argument("--holdout", type=float, default=0.0)
    p.add_argument("--stratified", action=argparse.BooleanOptionalAction,
                   default=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", help="label a corpus with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("annotate-export",
                       help="convert annotation files to training rows")
    p.add_argument("--annotations", required=True,
                   help="annotated program file or directory of *.txt files")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_annotate_export)

    p = sub.add_parser("judge-llm", help="run the LLM-judge baseline")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--model-name", default="o3-mini")
    p.add_argument("--endpoint")
    p.add_argument("--cache-dir", default=".judge_cache")
    p.add_argument("--max-retries", type=int, default=2)
    p.set_defaults(func=cmd_judge_llm)

    p = sub.add_parser("exec", help="execute programs in sandbox subprocesses")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--shim", required=True)
    p.add_argument("--timeout", type=float, default=10.0)
    p.add_argument("--entry", default="solution")
    p.add_argument("--jobs", type=int, default=4)
    p.set_defaults(func=cmd_exec)

    p = sub.add_parser("report", help="emit class-distribution tables")
    p.add_argument("--corpus", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--group-by", choices=("model", "subdomain"), default="model")
    p.add_argument("--format", choices=("text", "csv", "json", "svg"),
                   default="text")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("pipeline", help="full repair/classify/execute/report run")
    p.add_argument("--corpus", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--run-dir", required=True)
    p.add_argument("--no-exec", action="store_true")
    p.add_argument("--shim")
    p.add_argument("--timeout", type=float, default=10.0)
    p.add_argument("--entry", default="solution")
    p.add_argument("--known-modules")
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CorpusError, ReportError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
