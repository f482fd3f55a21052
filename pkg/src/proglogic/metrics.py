"""Confusion-matrix based evaluation metrics for the six-class task."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .taxonomy import CLASS_ORDER, N_CLASSES, TaxonomyLabel


@dataclass
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int
    zero_predicted: bool = False  # precision forced to 0 by convention


@dataclass
class EvalMetrics:
    confusion: np.ndarray  # rows = gold, columns = predicted, 6x6 counts
    accuracy: float
    per_class: dict[TaxonomyLabel, ClassMetrics] = field(default_factory=dict)

    @property
    def n_evaluated(self) -> int:
        return int(self.confusion.sum())


def confusion_matrix(gold: Sequence[TaxonomyLabel],
                     predicted: Sequence[TaxonomyLabel]) -> np.ndarray:
    if len(gold) != len(predicted):
        raise ValueError("gold and predicted lengths differ")
    matrix = np.zeros((N_CLASSES, N_CLASSES), dtype=np.int64)
    for g, p in zip(gold, predicted):
        matrix[int(g) - 1, int(p) - 1] += 1
    return matrix


def evaluate_predictions(gold: Sequence[TaxonomyLabel],
                         predicted: Sequence[TaxonomyLabel]) -> EvalMetrics:
    if not gold:
        raise ValueError("cannot evaluate an empty prediction set")
    matrix = confusion_matrix(gold, predicted)
    accuracy = float(np.trace(matrix)) / float(matrix.sum())
    per_class: dict[TaxonomyLabel, ClassMetrics] = {}
    for label in CLASS_ORDER:
        i = int(label) - 1
        tp = float(matrix[i, i])
        predicted_count = float(matrix[:, i].sum())
        gold_count = float(matrix[i, :].sum())
        zero_predicted = predicted_count == 0
        precision = tp / predicted_count if predicted_count else 0.0
        recall = tp / gold_count if gold_count else 0.0
        f1 = (2 * precision * recall / (precision + recall)
              if (precision + recall) else 0.0)
        per_class[label] = ClassMetrics(precision=precision, recall=recall, f1=f1,
                                        support=int(gold_count),
                                        zero_predicted=zero_predicted)
    return EvalMetrics(confusion=matrix, accuracy=accuracy, per_class=per_class)
