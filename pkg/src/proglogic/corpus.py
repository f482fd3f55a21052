"""Corpus ingestion and repair.

Corpora are UTF-8 JSON-lines files, one program record per line.  Two
mechanical repairs are applied before classification: prepending imports for
known math modules used but never imported, and stripping a global
misindentation prefix shared by every line.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .analysis import DEFAULT_KNOWN_MODULES
from .parsing import ParseFailure, parse_program

REQUIRED_FIELDS = ("id", "model", "dataset", "question", "source", "gold_answer")


class CorpusError(Exception):
    pass


@dataclass
class ProgramRecord:
    id: str
    model: str
    dataset: str
    question: str
    source: str
    gold_answer: str
    subdomain: Optional[str] = None

    def to_json(self) -> str:
        payload = {
            "id": self.id,
            "model": self.model,
            "dataset": self.dataset,
            "subdomain": self.subdomain,
            "question": self.question,
            "source": self.source,
            "gold_answer": self.gold_answer,
        }
        return json.dumps(payload, sort_keys=True, ensure_ascii=False)


@dataclass
class RepairReport:
    record_id: str
    imports_added: list[str] = field(default_factory=list)
    dedent_applied: bool = False
    still_unparseable: bool = False


def load_corpus(path: str | Path) -> list[ProgramRecord]:
    """Load records in file order; malformed lines and duplicate ids fail loudly."""
    records: list[ProgramRecord] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}:{line_no}: malformed record: {exc}") from None
            if not isinstance(raw, dict):
                raise CorpusError(f"{path}:{line_no}: record must be an object")
            missing = [f for f in REQUIRED_FIELDS if f not in raw]
            if missing:
                raise CorpusError(
                    f"{path}:{line_no}: missing fields: {', '.join(missing)}")
            if not raw["source"]:
                raise CorpusError(f"{path}:{line_no}: empty source")
            record = ProgramRecord(
                id=str(raw["id"]),
                model=str(raw["model"]),
                dataset=str(raw["dataset"]),
                subdomain=raw.get("subdomain"),
                question=str(raw["question"]),
                source=str(raw["source"]),
                gold_answer=str(raw["gold_answer"]),
            )
            if record.id in seen:
                raise CorpusError(f"duplicate record id {record.id!r}")
            seen.add(record.id)
            records.append(record)
    return records


def save_corpus(records: Iterable[ProgramRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(record.to_json() + "\n")


def repair_imports(source: str,
                   known_modules: frozenset[str] | set[str] = DEFAULT_KNOWN_MODULES,
                   ) -> tuple[str, list[str]]:
    """Prepend ``import m`` for every known module used as ``m.attr`` but never
    imported or otherwise defined.  Unknown names are left for def/use to flag."""
    try:
        module = parse_program(source)
    except ParseFailure:
        return source, []

    bound: set[str] = set()
    attribute_roots: set[str] = set()
    for node in module.walk():
        kind = node.kind
        if kind in ("Import", "ImportFrom"):
            bound.update(alias for _, alias in node.imports)
        elif kind == "FunctionDef":
            bound.add(node.name)
            bound.update(node.params)
        elif kind == "Name" and node.ctx == "store":
            bound.add(node.name)
        elif kind == "Attribute" and node.children[0].kind == "Name":
            attribute_roots.add(node.children[0].name)

    missing = sorted((attribute_roots & set(known_modules)) - bound)
    if not missing:
        return source, []
    preamble = "".join(f"import {name}\n" for name in missing)
    return preamble + source, missing


def repair_indentation(source: str) -> str:
    """Strip a leading-whitespace prefix common to every non-blank line.

    Applies only when the common prefix is non-empty, so correctly indented
    programs pass through untouched.  Idempotent.
    """
    lines = source.splitlines(keepends=True)
    nonblank = [ln for ln in lines if ln.strip()]
    if not nonblank:
        return source

    prefix = _leading_whitespace(nonblank[0])
    for line in nonblank[1:]:
        prefix = _common_prefix(prefix, _leading_whitespace(line))
        if not prefix:
            return source
    if not prefix:
        return source
    width = len(prefix)
    return "".join(ln[width:] if ln.strip() else ln for ln in lines)


def _leading_whitespace(line: str) -> str:
    stripped = line.lstrip()
    return line[: len(line) - len(stripped)]


def _common_prefix(a: str, b: str) -> str:
    limit = min(len(a), len(b))
    i = 0
    while i < limit and a[i] == b[i]:
        i += 1
    return a[:i]


def repair_record(record: ProgramRecord,
                  known_modules: frozenset[str] | set[str] = DEFAULT_KNOWN_MODULES,
                  ) -> tuple[ProgramRecord, RepairReport]:
    """Apply both repairs (imports first, then dedent) at most once each."""
    report = RepairReport(record_id=record.id)
    source = record.source

    if not _parses(source):
        dedented = repair_indentation(source)
        if dedented != source and _parses(dedented):
            source = dedented
            report.dedent_applied = True

    repaired, added = repair_imports(source, known_modules)
    if added:
        source = repaired
        report.imports_added = added

    report.still_unparseable = not _parses(source)
    fixed = ProgramRecord(
        id=record.id, model=record.model, dataset=record.dataset,
        subdomain=record.subdomain, question=record.question,
        source=source, gold_answer=record.gold_answer,
    )
    return fixed, report


def _parses(source: str) -> bool:
    try:
        parse_program(source)
    except ParseFailure:
        return False
    return True
