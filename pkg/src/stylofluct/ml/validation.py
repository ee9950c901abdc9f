"""k-fold cross-validation and the binomial significance test against chance."""
from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import asdict, dataclass

import numpy as np

from .classifiers import make_classifier
from .dataset import LabeledDataset

log = logging.getLogger(__name__)


def binomial_p_value(correct: int, total: int, chance: float) -> float:
    """P(X >= correct) for X ~ Binomial(total, chance), summed in log space."""
    if not 0 <= correct <= total:
        raise ValueError(f"need 0 <= correct <= total, got {correct}/{total}")
    if correct == 0:
        return 1.0
    if chance <= 0.0:
        return 0.0
    if chance >= 1.0:
        return 1.0
    lp, lq = math.log(chance), math.log1p(-chance)
    terms = [
        math.lgamma(total + 1) - math.lgamma(i + 1) - math.lgamma(total - i + 1) + i * lp + (total - i) * lq
        for i in range(correct, total + 1)
    ]
    top = max(terms)
    return min(1.0, math.exp(top) * math.fsum(math.exp(t - top) for t in terms))


def make_folds(labels, k: int, seed: int) -> list[np.ndarray]:
    """Stratified folds from a seeded shuffle.

    Rows of each class are shuffled and dealt round-robin, continuing where the
    previous class stopped so fold sizes differ by at most one. If any class has
    fewer than ``k`` rows, plain shuffled folds are used instead.
    """
    labels = list(labels)
    n = len(labels)
    if k > n:
        raise ValueError(f"cannot make {k} folds from {n} rows")
    if k < 2:
        raise ValueError("need at least 2 folds")
    rng = np.random.default_rng(seed)
    counts = Counter(labels)
    assignment = np.empty(n, dtype=int)
    if min(counts.values()) >= k:
        offset = 0
        for cls in sorted(counts):
            rows = np.array([i for i, c in enumerate(labels) if c == cls])
            rows = rows[rng.permutation(len(rows))]
            assignment[rows] = (offset + np.arange(len(rows))) % k
            offset += len(rows)
    else:
        log.warning(
            "smallest class has %d rows (< %d folds); falling back to unstratified folds",
            min(counts.values()), k,
        )
        assignment[rng.permutation(n)] = np.arange(n) % k
    return [np.flatnonzero(assignment == f) for f in range(k)]


@dataclass
class CVReport:
    model_kind: str
    fold_accuracies: list[float]
    mean_accuracy: float
    p_value: float
    labels: list[str]
    confusion: list[list[int]]   # rows: true class, columns: predicted class
    seed: int
    correct: int
    total: int

    def to_json_dict(self) -> dict:
        d = asdict(self)
        return {
            "modelKind": d["model_kind"],
            "foldAccuracies": d["fold_accuracies"],
            "meanAccuracy": d["mean_accuracy"],
            "pValue": d["p_value"],
            "confusion": {"labels": d["labels"], "counts": d["confusion"]},
            "seed": d["seed"],
            "correct": d["correct"],
            "total": d["total"],
        }

    def confusion_table(self) -> str:
        width = max(len(c) for c in self.labels + ["true\\pred"])
        head = "true\\pred".ljust(width) + " " + " ".join(c[:8].rjust(8) for c in self.labels)
        rows = [
            c.ljust(width) + " " + " ".join(str(v).rjust(8) for v in row)
            for c, row in zip(self.labels, self.confusion)
        ]
        return "\n".join([head, *rows])


def cross_validate(
    dataset: LabeledDataset, model_kind: str, folds: int = 10, seed: int = 0, **params
) -> CVReport:
    """k-fold CV; the reported accuracy is the mean of the per-fold accuracies.

    Each model standardizes on its own training fold, so test folds never leak
    into the scaling statistics.
    """
    labels = list(dataset.classes)
    if len(labels) < 2:
        raise ValueError("need at least two classes")
    fold_rows = make_folds(dataset.y, folds, seed)
    confusion = np.zeros((len(labels), len(labels)), dtype=int)
    accuracies = []
    for f, test in enumerate(fold_rows):
        train_rows = np.setdiff1d(np.arange(dataset.n_rows), test)
        train = dataset.subset(train_rows)
        model = make_classifier(model_kind, seed=seed + f, **params).fit(train.x, train.y)
        predicted = model.predict(dataset.x[test])
        hits = 0
        for row, guess in zip(test, predicted):
            truth = dataset.y[row]
            confusion[labels.index(truth), labels.index(guess)] += 1
            hits += truth == guess
        accuracies.append(hits / len(test))
    correct = int(np.trace(confusion))
    total = int(confusion.sum())
    return CVReport(
        model_kind=model_kind,
        fold_accuracies=accuracies,
        mean_accuracy=float(np.mean(accuracies)),
        p_value=binomial_p_value(correct, total, 1.0 / len(labels)),
        labels=labels,
        confusion=confusion.tolist(),
        seed=seed,
        correct=correct,
        total=total,
    )
