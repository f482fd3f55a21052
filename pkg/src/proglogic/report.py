"""Aggregation and reporting: class distributions, execution accuracy tables,
feature dumps, static charts, and the end-to-end pipeline."""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .analysis import (DEFAULT_KNOWN_MODULES, FEATURE_NAMES, api_calls,
                       cyclomatic, extract_features)
from .corpus import ProgramRecord, RepairReport, load_corpus, repair_record, save_corpus
from .harness import ClassAccuracy, ExecConfig, class_accuracy, run_corpus, write_outcome_log
from .parsing import ParseFailure, parse_program
from .taxonomy import CLASS_ORDER, TaxonomyLabel
from . import tree as tree_judge


class ReportError(Exception):
    pass


@dataclass
class DistributionTable:
    group_by: str  # "model" or "subdomain"
    counts: dict[str, dict[TaxonomyLabel, int]]

    def percentages(self) -> dict[str, dict[TaxonomyLabel, float]]:
        result = {}
        for group, row in self.counts.items():
            total = sum(row.values())
            result[group] = {label: (100.0 * row[label] / total if total else 0.0)
                             for label in CLASS_ORDER}
        return result


def class_distribution(records: Sequence[ProgramRecord],
                       labels: dict[str, TaxonomyLabel],
                       group_by: str = "model") -> DistributionTable:
    if group_by not in ("model", "subdomain"):
        raise ReportError(f"cannot group by {group_by!r}")
    counts: dict[str, dict[TaxonomyLabel, int]] = {}
    for record in records:
        if record.id not in labels:
            continue
        key = record.model if group_by == "model" else (record.subdomain or "unknown")
        row = counts.setdefault(key, {label: 0 for label in CLASS_ORDER})
        row[labels[record.id]] += 1
    return DistributionTable(group_by=group_by, counts=counts)


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

RENDER_FORMATS = ("text", "csv", "json", "svg")


def render(table: DistributionTable, fmt: str, path: str | Path) -> None:
    """Write the table as columnar text, CSV, JSON, or a grouped bar chart.

    Output is deterministic for fixed input; rendering twice produces
    byte-identical files.
    """
    if not table.counts:
        raise ReportError("cannot render an empty table")
    if fmt == "text":
        Path(path).write_text(render_text(table), encoding="utf-8")
    elif fmt == "csv":
        Path(path).write_text(render_csv(table), encoding="utf-8")
    elif fmt == "json":
        Path(path).write_text(render_json(table), encoding="utf-8")
    elif fmt == "svg":
        render_bar_chart(table, path)
    else:
        raise ReportError(f"unknown render format {fmt!r}")


def _header() -> list[str]:
    return [label.short_name for label in CLASS_ORDER]


def render_text(table: DistributionTable) -> str:
    pct = table.percentages()
    groups = sorted(table.counts)
    name_width = max(len(g) for g in groups) + 2
    lines = [table.group_by.ljust(name_width)
             + "".join(h.rjust(16) for h in _header())]
    for group in groups:
        cells = []
        for label in CLASS_ORDER:
            count = table.counts[group][label]
            cells.append(f"{count} ({pct[group][label]:.1f}%)".rjust(16))
        lines.append(group.ljust(name_width) + "".join(cells))
    return "\n".join(lines) + "\n"


def render_csv(table: DistributionTable) -> str:
    lines = [",".join([table.group_by] + [f"{h}_count" for h in _header()]
                      + [f"{h}_pct" for h in _header()])]
    pct = table.percentages()
    for group in sorted(table.counts):
        row = [group]
        row += [str(table.counts[group][label]) for label in CLASS_ORDER]
        row += [f"{pct[group][label]:.4f}" for label in CLASS_ORDER]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def render_json(table: DistributionTable) -> str:
    payload = {
        "group_by": table.group_by,
        "groups": {
            group: {label.short_name: table.counts[group][label]
                    for label in CLASS_ORDER}
            for group in sorted(table.counts)
        },
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def render_bar_chart(table: DistributionTable, path: str | Path) -> None:
    """Grouped bar chart as a static SVG; metadata stripped for determinism."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    matplotlib.rcParams["svg.hashsalt"] = "proglogic"

    groups = sorted(table.counts)
    pct = table.percentages()
    n_groups = len(groups)
    width = 0.8 / len(CLASS_ORDER)
    fig, ax = plt.subplots(figsize=(max(6, 1.5 * n_groups), 4))
    for offset, label in enumerate(CLASS_ORDER):
        xs = [i + offset * width for i in range(n_groups)]
        ys = [pct[g][label] for g in groups]
        ax.bar(xs, ys, width=width, label=label.short_name)
    ax.set_xticks([i + 0.4 - width / 2 for i in range(n_groups)])
    ax.set_xticklabels(groups, rotation=20, ha="right")
    ax.set_ylabel("% of programs")
    ax.set_xlabel(table.group_by)
    ax.legend(ncol=3, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def render_exec_accuracy(acc: ClassAccuracy) -> str:
    lines = ["class  correct/total  accuracy"]
    for label in CLASS_ORDER:
        if label in acc.per_class_counts:
            correct, total = acc.per_class_counts[label]
            lines.append(f"{label.short_name:<6} {correct}/{total:<12} "
                         f"{100.0 * acc.per_class[label]:.1f}%")
    for label in acc.empty_classes:
        lines.append(f"{label.short_name:<6} (no records)")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------

@dataclass
class PipelineConfig:
    known_modules: frozenset[str] = DEFAULT_KNOWN_MODULES
    run_exec: bool = True
    shim_path: Optional[str] = None
    timeout: float = 10.0
    entry_name: str = "solution"
    jobs: int = 4
    seed: int = 0

    def snapshot(self) -> dict:
        return {
            "known_modules": sorted(self.known_modules),
            "run_exec": self.run_exec,
            "shim_path": self.shim_path,
            "timeout": self.timeout,
            "entry_name": self.entry_name,
            "jobs": self.jobs,
            "seed": self.seed,
        }


@dataclass
class PipelineResult:
    run_dir: Path
    manifest: dict
    labels: dict[str, TaxonomyLabel]
    discarded: list[str] = field(default_factory=list)


def _sha256_file(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def feature_rows(records: Sequence[ProgramRecord],
                 known_modules=DEFAULT_KNOWN_MODULES) -> list[dict]:
    """Per-record analysis rows: features, complexity total, API counts.

    Unparseable records get a row with ``parse_error`` set; they stay in
    characteristics reporting but are excluded from classification.
    """
    rows = []
    for record in records:
        row: dict = {"id": record.id, "model": record.model,
                     "dataset": record.dataset, "subdomain": record.subdomain}
        try:
            module = parse_program(record.source)
        except ParseFailure as exc:
            row["parse_error"] = str(exc)
            rows.append(row)
            continue
        fv = extract_features(module)
        row.update(dict(zip(FEATURE_NAMES, fv.as_tuple())))
        row["complexity_total"] = cyclomatic(module).program_total
        row["api_calls"] = dict(sorted(
            api_calls(module, known_modules).per_library.items()))
        rows.append(row)
    return rows


def pipeline(corpus_path: str | Path, model_path: str | Path,
             config: PipelineConfig, run_dir: str | Path) -> PipelineResult:
    """Full run: repair -> parse -> features -> classify -> execute -> report.

    Every artifact lands under ``run_dir``; reruns with identical inputs
    reproduce identical label files and report tables.
    """
    run_dir = Path(run_dir)
    run_dir.mkdir(parents=True, exist_ok=True)
    started = time.time()

    records = load_corpus(corpus_path)
    model = tree_judge.load(model_path)

    repaired: list[ProgramRecord] = []
    reports: list[RepairReport] = []
    for record in records:
        fixed, report = repair_record(record, config.known_modules)
        repaired.append(fixed)
        reports.append(report)
    save_corpus(repaired, run_dir / "repaired_corpus.jsonl")
    with open(run_dir / "repairs.jsonl", "w", encoding="utf-8") as handle:
        for rep in reports:
            handle.write(json.dumps({
                "record_id": rep.record_id,
                "imports_added": rep.imports_added,
                "dedent_applied": rep.dedent_applied,
                "still_unparseable": rep.still_unparseable,
            }, sort_keys=True) + "\n")

    discarded = [rep.record_id for rep in reports if rep.still_unparseable]
    usable = [r for r in repaired if r.id not in set(discarded)]

    rows = feature_rows(repaired, config.known_modules)
    with open(run_dir / "features.jsonl", "w", encoding="utf-8") as handle:
        for row in rows:
            handle.write(json.dumps(row, sort_keys=True) + "\n")

    labels: dict[str, TaxonomyLabel] = {}
    with open(run_dir / "labels.jsonl", "w", encoding="utf-8") as handle:
        for record in usable:
            module = parse_program(record.source)
            label = tree_judge.predict(model, extract_features(module))
            labels[record.id] = label
            handle.write(json.dumps(
                {"id": record.id, "label": int(label),
                 "label_name": label.short_name}, sort_keys=True) + "\n")

    by_model = class_distribution(usable, labels, "model")
    render(by_model, "text", run_dir / "distribution_by_model.txt")
    render(by_model, "csv", run_dir / "distribution_by_model.csv")
    if any(r.subdomain for r in usable):
        by_subdomain = class_distribution(usable, labels, "subdomain")
        render(by_subdomain, "text", run_dir / "distribution_by_subdomain.txt")
        render(by_subdomain, "csv", run_dir / "distribution_by_subdomain.csv")

    stage_errors: list[str] = []
    if config.run_exec:
        if not config.shim_path:
            raise ReportError("execution requested but no shim path configured")
        exec_config = ExecConfig(shim_path=config.shim_path,
                                 timeout=config.timeout,
                                 entry_name=config.entry_name, jobs=config.jobs)
        outcomes = run_corpus(usable, exec_config)
        write_outcome_log(outcomes, run_dir / "outcomes.jsonl")
        gold = {r.id: r.gold_answer for r in usable}
        acc = class_accuracy(outcomes, labels, gold)
        (run_dir / "exec_accuracy.txt").write_text(render_exec_accuracy(acc),
                                                   encoding="utf-8")

    manifest = {
        "tool_version": __version__,
        "corpus_path": str(corpus_path),
        "corpus_sha256": _sha256_file(corpus_path),
        "model_path": str(model_path),
        "model_sha256": _sha256_file(model_path),
        "config": config.snapshot(),
        "n_records": len(records),
        "n_classified": len(usable),
        "discarded_unparseable": discarded,
        "stage_errors": stage_errors,
        "started_at": started,
        "finished_at": time.time(),
    }
    (run_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return PipelineResult(run_dir=run_dir, manifest=manifest, labels=labels,
                          discarded=discarded)
