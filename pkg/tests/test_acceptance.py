"""Acceptance gate: one test per release criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v``; the summary lines are printed
unconditionally so they survive output capture.
"""

import contextlib
import random
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from proglogic.analysis import FeatureVector, extract_features
from proglogic.annotation import (LineAnnotation, derive_label, agreement,
                                  parse_annotations, serialize_annotations)
from proglogic.corpus import save_corpus
from proglogic.harness import (ErrorBucket, ExecConfig, ExecStatus,
                               bucket_error, execute, run_corpus)
from proglogic.judge_llm import (JudgeConfig, VerdictInvalid, VerdictMissing,
                                 judge_corpus, parse_verdict)
from proglogic.metrics import evaluate_predictions
from proglogic.parsing import parse_program
from proglogic.report import PipelineConfig, pipeline
from proglogic.taxonomy import TaxonomyLabel
from proglogic import tree as tree_judge
from proglogic.analysis import cyclomatic

from fixtures.complexity_programs import COMPLEXITY_PROGRAMS
from fixtures.feature_programs import FEATURE_PROGRAMS
from test_analysis import EXPECTED_FEATURES
from test_harness import EXEC_FIXTURES, SHIM
from test_harness import make_record as exec_record
from test_judge_llm import CountingTransport, tagged
from test_report import synthetic_corpus, train_pool_model
from oracles import oracle_greedy_tree_predict

ANNOTATION_DIR = Path(__file__).parent / "fixtures" / "annotations"


@contextlib.contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"[acceptance] {name}: FAIL", file=sys.__stdout__, flush=True)
        raise
    print(f"[acceptance] {name}: PASS", file=sys.__stdout__, flush=True)


def test_feature_extraction_oracle():
    with criterion("feature-extraction oracle (25 programs, exact, <1s)"):
        start = time.monotonic()
        for name, source in FEATURE_PROGRAMS.items():
            fv = extract_features(parse_program(source))
            assert fv.as_tuple() == EXPECTED_FEATURES[name], name
        assert len(FEATURE_PROGRAMS) == 25
        assert time.monotonic() - start < 1.0


def test_complexity_oracle():
    with criterion("complexity oracle (15 fixtures, exact, <1s)"):
        start = time.monotonic()
        assert len(COMPLEXITY_PROGRAMS) == 15
        for name, (source, expected) in COMPLEXITY_PROGRAMS.items():
            assert cyclomatic(parse_program(source)).per_function == expected, name
        assert time.monotonic() - start < 1.0


def test_tree_vs_exhaustive_oracle():
    with criterion("tree-vs-exhaustive oracle (200 trials, zero mismatch, <10s)"):
        start = time.monotonic()
        rng = random.Random(424242)
        mismatches = 0
        for _ in range(200):
            n_rows = rng.randrange(2, 21)
            xs = [(rng.randrange(4), rng.randrange(4), rng.randrange(4))
                  for _ in range(n_rows)]
            ys = [rng.randrange(1, 7) for _ in range(n_rows)]
            rows = [(FeatureVector(a, b, c, 0, 0, 0), TaxonomyLabel(y))
                    for (a, b, c), y in zip(xs, ys)]
            model = tree_judge.train(rows, tree_judge.TrainParams(max_depth=2))
            for probe in xs:
                expected = oracle_greedy_tree_predict(xs, ys, probe, max_depth=2)
                got = tree_judge.predict(
                    model, FeatureVector(probe[0], probe[1], probe[2], 0, 0, 0))
                if int(got) != expected:
                    mismatches += 1
        assert mismatches == 0
        assert time.monotonic() - start < 10.0


def _separable_row(rng, label):
    """Feature vector drawn from the axis-aligned region owned by `label`."""
    if label == TaxonomyLabel.CONCEPTUAL:
        return FeatureVector(rng.randrange(1, 4), rng.randrange(1, 4),
                             rng.randrange(0, 5), 0, 0, 0)
    if label == TaxonomyLabel.DISORGANIZED:
        return FeatureVector(rng.randrange(0, 3), 0, rng.randrange(0, 5),
                             rng.randrange(0, 3), rng.randrange(0, 3),
                             rng.randrange(1, 4))
    if label == TaxonomyLabel.PRIMITIVE:
        return FeatureVector(0, 0, rng.randrange(1, 6), 0, 0, 0)
    if label == TaxonomyLabel.NO_LOGIC:
        return FeatureVector(0, 0, 0, 0, rng.randrange(0, 3), 0)
    if label == TaxonomyLabel.BRUTE_FORCE:
        return FeatureVector(0, 0, rng.randrange(1, 5), rng.randrange(3, 6), 0, 0)
    assert label == TaxonomyLabel.FROM_SCRATCH
    return FeatureVector(0, 0, rng.randrange(1, 5), rng.randrange(1, 3), 0, 0)


def test_separability_and_seed_stability():
    with criterion("separability (100% held-out, 4 seeds, spread <=0.01, <5s)"):
        start = time.monotonic()
        rng = random.Random(11)
        rows = []
        for label in TaxonomyLabel:
            rows.extend((_separable_row(rng, label), label) for _ in range(20))
        accuracies = []
        for seed in range(4):
            train_rows, held = tree_judge.train_test_split(
                rows, 0.25, seed=seed, stratified=True)
            model = tree_judge.train(train_rows,
                                     tree_judge.TrainParams(max_depth=5, seed=seed))
            accuracies.append(tree_judge.evaluate(model, held).accuracy)
        assert all(acc == 1.0 for acc in accuracies), accuracies
        assert max(accuracies) - min(accuracies) <= 0.01
        assert time.monotonic() - start < 5.0


def test_metrics_exactness():
    with criterion("metrics exactness (incl. trace 73/90 -> 0.8111 +-1e-4)"):
        T = TaxonomyLabel
        # hand-computed small case
        gold = [T(1), T(1), T(2), T(3)]
        pred = [T(1), T(2), T(2), T(3)]
        result = evaluate_predictions(gold, pred)
        assert result.accuracy == 0.75
        one = result.per_class[T.CONCEPTUAL]
        assert (one.precision, one.recall) == (1.0, 0.5)
        assert one.f1 == pytest.approx(2 / 3, abs=0)
        two = result.per_class[T.PRIMITIVE]
        assert (two.precision, two.recall, two.f1) == (0.5, 1.0, 2 / 3)
        # paper-shaped case: 73 of 90 on the diagonal
        gold, pred = [], []
        for cls in range(1, 7):
            diag = 13 if cls < 6 else 8
            gold += [T(cls)] * diag
            pred += [T(cls)] * diag
        for g, p in [(1, 6)] * 9 + [(4, 3)] * 8:
            gold.append(T(g))
            pred.append(T(p))
        result = evaluate_predictions(gold, pred)
        assert int(np.trace(result.confusion)) == 73
        assert result.confusion.sum() == 90
        assert result.accuracy == pytest.approx(0.8111, abs=1e-4)


def _hundred_line_pair():
    """Four 25-line programs; annotator B disagrees on 7 marks, none of which
    move any program across a class boundary."""
    programs_a, programs_b = [], []
    flips = {(0, 3), (0, 9), (1, 6), (2, 7), (2, 11), (3, 2), (3, 21)}
    for p in range(4):
        prog_a, prog_b = [], []
        for i in range(25):
            processing = (p + 1) if i % 5 == 0 else None
            transcription = processing is None and i % 3 == 0
            ann = LineAnnotation(i + 1, transcription, processing, False,
                                 i == 24, "line")
            prog_a.append(ann)
            if (p, i) in flips:
                # flip a mark that cannot change the derived label: toggle
                # transcription on a no-processing line
                assert ann.processing is None
                ann = LineAnnotation(i + 1, not transcription, None, False,
                                     ann.result, "line")
            prog_b.append(ann)
        programs_a.append(prog_a)
        programs_b.append(prog_b)
    return programs_a, programs_b


def test_annotation_round_trip_and_agreement():
    with criterion("annotation round trip, derived labels, 0.93/1.00 agreement"):
        for path in sorted(ANNOTATION_DIR.glob("*.txt")):
            text = path.read_text(encoding="utf-8")
            assert serialize_annotations(parse_annotations(text)) + "\n" == text, \
                path.name
        inference_only = parse_annotations(
            (ANNOTATION_DIR / "lcm_inference.txt").read_text(encoding="utf-8"))
        assert derive_label(inference_only) == TaxonomyLabel.NO_LOGIC
        gcd = parse_annotations(
            (ANNOTATION_DIR / "gcd.txt").read_text(encoding="utf-8"))
        assert derive_label(gcd) == TaxonomyLabel.CONCEPTUAL

        a, b = _hundred_line_pair()
        report = agreement(a, b)
        assert report.n_lines == 100
        assert report.line_agreement == 0.93
        assert report.program_agreement == 1.0


EXPECTED_BUCKETS = {
    "name_error": ErrorBucket.UNDEFINED_SYMBOL,
    "module_attr_error": ErrorBucket.UNDEFINED_LIBRARY_ATTRIBUTE,
    "type_attr_error": ErrorBucket.TYPE_ATTRIBUTE_ERROR,
    "zero_division": ErrorBucket.OTHER,
    "unparseable": ErrorBucket.OTHER,
}


def test_execution_harness(tmp_path):
    with criterion("execution harness (12 fixtures + stub shim, <30s)"):
        start = time.monotonic()
        records = [exec_record(name, source)
                   for name, (source, _, _) in sorted(EXEC_FIXTURES.items())]
        config = ExecConfig(shim_path=SHIM, timeout=2.0, jobs=4)
        outcomes = {o.record_id: o for o in run_corpus(records, config)}
        assert len(outcomes) == 12
        for name, (_, status, value) in EXEC_FIXTURES.items():
            assert outcomes[name].status == status, name
            assert outcomes[name].stdout_result == value, name
        for name, bucket in EXPECTED_BUCKETS.items():
            assert bucket_error(outcomes[name]) == bucket, name
        assert outcomes["golf_balls"].stdout_result == "33"

        # shim-free variant: a scripted stand-in emits the envelopes directly
        stub = tmp_path / "stub_shim.py"
        stub.write_text("import sys\n"
                        "print('noise before')\n"
                        "print(sys.argv[3] + ' OK stubbed')\n",
                        encoding="utf-8")
        outcome = execute(exec_record("stub", "x = 1\n"),
                          ExecConfig(shim_path=str(stub), timeout=2.0))
        assert outcome.status == ExecStatus.OK
        assert outcome.stdout_result == "stubbed"
        assert time.monotonic() - start < 30.0


def test_pipeline_determinism(tmp_path):
    with criterion("pipeline determinism (50 records, byte-identical reruns)"):
        records, _ = synthetic_corpus(50)
        corpus_path = tmp_path / "corpus.jsonl"
        save_corpus(records, corpus_path)
        model_path = tmp_path / "model.json"
        train_pool_model(model_path)
        config = PipelineConfig(run_exec=False)
        first = pipeline(corpus_path, model_path, config, tmp_path / "run1")
        second = pipeline(corpus_path, model_path, config, tmp_path / "run2")
        for artifact in ("labels.jsonl", "distribution_by_model.txt",
                         "distribution_by_model.csv",
                         "distribution_by_subdomain.txt",
                         "distribution_by_subdomain.csv"):
            assert (first.run_dir / artifact).read_bytes() == \
                (second.run_dir / artifact).read_bytes(), artifact


def test_llm_judge_parsing_and_caching(tmp_path):
    with criterion("LLM-judge verdict parsing and full caching"):
        assert parse_verdict("\\boxed{3}") == TaxonomyLabel.FROM_SCRATCH
        assert parse_verdict("\\boxed{1} no, \\boxed{5}") == \
            TaxonomyLabel.DISORGANIZED
        with pytest.raises(VerdictMissing):
            parse_verdict("the class is 3")
        with pytest.raises(VerdictInvalid):
            parse_verdict("\\boxed{9}")
        with pytest.raises(VerdictInvalid):
            parse_verdict("\\boxed{two}")

        config = JudgeConfig(endpoint="stub",
                             cache_dir=str(tmp_path / "cache"))
        records = [tagged("a"), tagged("b"), tagged("c")]
        transport = CountingTransport({"a": ["\\boxed{1}"], "b": ["\\boxed{4}"],
                                       "c": ["\\boxed{6}"]})
        first = judge_corpus(records, config, transport)
        assert transport.requests == 3
        second = judge_corpus(records, config, transport)
        assert transport.requests == 3  # fully cached: zero new requests
        assert [j.label for j in second] == [j.label for j in first]
        assert all(j.from_cache for j in second)
