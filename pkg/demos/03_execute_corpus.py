"""Execute a small corpus in sandbox subprocesses and score the results.

Run from the repo root:  python3 demos/03_execute_corpus.py
"""
from pathlib import Path

from proglogic.corpus import ProgramRecord
from proglogic.harness import (ExecConfig, ExecStatus, bucket_error,
                               class_accuracy, match_answer, run_corpus)
from proglogic.taxonomy import TaxonomyLabel

SHIM = Path(__file__).resolve().parents[1] / "shim" / "run_program.py"


def rec(record_id, source, gold):
    return ProgramRecord(id=record_id, model="demo", dataset="demo",
                         question="", source=source, gold_answer=gold)


corpus = [
    rec("good", "def solution():\n    return 3 * 11\n", "33"),
    rec("float_ok", "def solution():\n    return 33.0\n", "33"),
    rec("wrong", "def solution():\n    return 35\n", "33"),
    rec("crash", "def solution():\n    return unknown_var\n", "33"),
    rec("hangs", "def solution():\n    while True:\n        pass\n", "33"),
    rec("no_entry", "def main():\n    return 33\n", "33"),
]

config = ExecConfig(shim_path=str(SHIM), timeout=2.0, jobs=4)
outcomes = run_corpus(corpus, config)

for outcome in outcomes:
    line = f"{outcome.record_id:>9}  {outcome.status.value:<14}"
    if outcome.status == ExecStatus.OK:
        gold = next(r.gold_answer for r in corpus if r.id == outcome.record_id)
        verdict = "match" if match_answer(outcome.stdout_result, gold) else "mismatch"
        line += f"result={outcome.stdout_result!r} ({verdict})"
    elif outcome.status == ExecStatus.RUNTIME_ERROR:
        line += f"bucket={bucket_error(outcome).value}"
    print(line)

# per-class execution accuracy (here everything is one class)
labels = {r.id: TaxonomyLabel.PRIMITIVE for r in corpus}
gold = {r.id: r.gold_answer for r in corpus}
acc = class_accuracy(outcomes, labels, gold)
correct, total = acc.per_class_counts[TaxonomyLabel.PRIMITIVE]
print(f"\nexecution accuracy: {correct}/{total} "
      f"({100 * acc.per_class[TaxonomyLabel.PRIMITIVE]:.0f}%)")
