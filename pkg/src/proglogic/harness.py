"""Sandboxed execution of generated programs.

Each program runs in its own interpreter subprocess through an external shim
script; the harness never executes program text in-process.  The shim prints
a single result envelope line, sentinel-prefixed with a per-run random token,
so program-printed noise cannot be mistaken for the answer.
"""

from __future__ import annotations

import json
import re
import secrets
import subprocess
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence

from .corpus import ProgramRecord
from .taxonomy import CLASS_ORDER, TaxonomyLabel

NO_ENTRY_EXIT_CODE = 3


class ExecStatus(str, Enum):
    OK = "ok"
    RUNTIME_ERROR = "runtime_error"
    TIMEOUT = "timeout"
    NO_ENTRY = "no_entry"


class ErrorBucket(str, Enum):
    UNDEFINED_SYMBOL = "undefined_symbol"
    UNDEFINED_LIBRARY_ATTRIBUTE = "undefined_library_attribute"
    TYPE_ATTRIBUTE_ERROR = "type_attribute_error"
    OTHER = "other"


@dataclass
class ExecConfig:
    shim_path: str
    timeout: float = 10.0
    entry_name: str = "solution"
    interpreter_path: str = sys.executable
    jobs: int = 4


@dataclass
class ExecutionOutcome:
    record_id: str
    status: ExecStatus
    stdout_result: Optional[str]  # the shim's envelope value, only when ok
    error_text: Optional[str]
    wall_time_ms: float

    def to_json(self) -> str:
        return json.dumps({
            "record_id": self.record_id,
            "status": self.status.value,
            "stdout_result": self.stdout_result,
            "error_text": self.error_text,
            "wall_time_ms": round(self.wall_time_ms, 3),
        }, sort_keys=True)


def execute(record: ProgramRecord, config: ExecConfig) -> ExecutionOutcome:
    sentinel = secrets.token_hex(16)
    start = time.monotonic()
    with tempfile.NamedTemporaryFile("w", suffix=".py", delete=False,
                                     encoding="utf-8") as handle:
        handle.write(record.source)
        source_path = handle.name
    try:
        try:
            proc = subprocess.run(
                [config.interpreter_path, config.shim_path, source_path,
                 config.entry_name, sentinel],
                capture_output=True, text=True, timeout=config.timeout,
            )
        except subprocess.TimeoutExpired:
            wall = (time.monotonic() - start) * 1000.0
            return ExecutionOutcome(record.id, ExecStatus.TIMEOUT, None,
                                    f"timed out after {config.timeout}s", wall)
        wall = (time.monotonic() - start) * 1000.0
        if proc.returncode == NO_ENTRY_EXIT_CODE:
            return ExecutionOutcome(record.id, ExecStatus.NO_ENTRY, None,
                                    _tail(proc.stderr), wall)
        if proc.returncode != 0:
            return ExecutionOutcome(record.id, ExecStatus.RUNTIME_ERROR, None,
                                    _tail(proc.stderr), wall)
        value = _parse_envelope(proc.stdout, sentinel)
        if value is None:
            return ExecutionOutcome(record.id, ExecStatus.RUNTIME_ERROR, None,
                                    "no result envelope on stdout", wall)
        return ExecutionOutcome(record.id, ExecStatus.OK, value, None, wall)
    finally:
        Path(source_path).unlink(missing_ok=True)


def _parse_envelope(stdout: str, sentinel: str) -> Optional[str]:
    value = None
    for line in stdout.splitlines():
        if line.startswith(sentinel + " OK "):
            value = line[len(sentinel) + 4:]
    return value


def _tail(text: str, max_lines: int = 10) -> str:
    lines = text.strip().splitlines()
    return "\n".join(lines[-max_lines:])


def run_corpus(records: Sequence[ProgramRecord], config: ExecConfig,
               ) -> list[ExecutionOutcome]:
    """Execute all records with a bounded worker pool; results in record order."""
    with ThreadPoolExecutor(max_workers=max(config.jobs, 1)) as pool:
        return list(pool.map(lambda r: execute(r, config), records))


def write_outcome_log(outcomes: Sequence[ExecutionOutcome], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for outcome in outcomes:
            handle.write(outcome.to_json() + "\n")


_NUMERIC = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def _normalize(answer: str) -> str:
    text = answer.strip()
    if text.startswith("$"):
        text = text[1:].strip()
    if text.endswith("%"):
        text = text[:-1].strip()
    return text


def match_answer(result: str, gold: str) -> bool:
    """String equality after normalization, else numeric comparison at
    relative tolerance 1e-6."""
    a, b = _normalize(result), _normalize(gold)
    if a == b:
        return True
    if _NUMERIC.match(a) and _NUMERIC.match(b):
        return abs(float(a) - float(b)) <= 1e-6 * max(1.0, abs(float(b)))
    return False


def bucket_error(outcome: ExecutionOutcome) -> ErrorBucket:
    if outcome.status != ExecStatus.RUNTIME_ERROR:
        raise ValueError("error bucketing applies only to runtime errors")
    text = outcome.error_text or ""
    if "NameError" in text:
        return ErrorBucket.UNDEFINED_SYMBOL
    if re.search(r"AttributeError: module ['\"]?\w+['\"]? has no attribute", text):
        return ErrorBucket.UNDEFINED_LIBRARY_ATTRIBUTE
    if "AttributeError" in text:
        return ErrorBucket.TYPE_ATTRIBUTE_ERROR
    return ErrorBucket.OTHER


@dataclass
class ClassAccuracy:
    per_class: dict[TaxonomyLabel, float]  # classes with records only
    per_class_counts: dict[TaxonomyLabel, tuple[int, int]]  # (correct, total)
    empty_classes: list[TaxonomyLabel]


def class_accuracy(outcomes: Sequence[ExecutionOutcome],
                   labels: dict[str, TaxonomyLabel],
                   gold_answers: dict[str, str]) -> ClassAccuracy:
    """Execution accuracy per taxonomy class; non-ok statuses are incorrect."""
    totals: dict[TaxonomyLabel, int] = {label: 0 for label in CLASS_ORDER}
    correct: dict[TaxonomyLabel, int] = {label: 0 for label in CLASS_ORDER}
    for outcome in outcomes:
        label = labels[outcome.record_id]
        totals[label] += 1
        if outcome.status == ExecStatus.OK and match_answer(
                outcome.stdout_result or "", gold_answers[outcome.record_id]):
            correct[label] += 1
    per_class = {label: correct[label] / totals[label]
                 for label in CLASS_ORDER if totals[label]}
    counts = {label: (correct[label], totals[label])
              for label in CLASS_ORDER if totals[label]}
    empty = [label for label in CLASS_ORDER if not totals[label]]
    return ClassAccuracy(per_class=per_class, per_class_counts=counts,
                         empty_classes=empty)
