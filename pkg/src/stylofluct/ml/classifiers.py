"""From-scratch supervised classifiers: k-nearest neighbours, Gaussian naive
Bayes, a binary-split decision tree and a one-vs-rest perceptron.

All models expose ``fit(x, y)`` and ``predict(x)``. Class labels are kept in
sorted order, and every tie is resolved toward the earlier label.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dataset import LabeledDataset, Standardizer
from .infogain import entropy

KINDS = ("knn", "naiveBayes", "decisionTree", "perceptron")


class DegenerateDatasetError(ValueError):
    pass


def _check_training(x, y, min_per_class: int = 1):
    x = np.asarray(x, dtype=float)
    y = list(y)
    if x.ndim != 2 or x.shape[0] != len(y):
        raise ValueError(f"shape mismatch: x {x.shape}, {len(y)} labels")
    counts = Counter(y)
    if len(counts) < 2:
        raise DegenerateDatasetError("need at least two classes to train")
    thin = [c for c, n in counts.items() if n < min_per_class]
    if thin:
        raise DegenerateDatasetError(f"classes {sorted(thin)} have fewer than {min_per_class} rows")
    return x, y, tuple(sorted(counts))


class Classifier:
    kind = ""
    classes_: tuple[str, ...]
    n_features_: int

    def _check_input(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            x = x[None, :]
        if x.shape[1] != self.n_features_:
            raise ValueError(f"expected {self.n_features_} features, got {x.shape[1]}")
        return x

    def predict_one(self, beta: Sequence[float]) -> str:
        return self.predict(np.asarray(beta, dtype=float)[None, :])[0]


class KNearestNeighbors(Classifier):
    """Majority vote of the k closest z-scored training rows.

    Vote ties go to the class with the smaller summed distance, then to label order.
    """

    kind = "knn"

    def __init__(self, k: int = 1):
        self.k = k

    def fit(self, x, y):
        x, y, self.classes_ = _check_training(x, y)
        self.n_features_ = x.shape[1]
        self.scaler_ = Standardizer().fit(x)
        self.train_x_ = self.scaler_.transform(x)
        self.train_y_ = np.array([self.classes_.index(c) for c in y])
        return self

    def predict(self, x) -> list[str]:
        z = self.scaler_.transform(self._check_input(x))
        k = min(self.k, len(self.train_y_))
        out = []
        for row in z:
            dist = np.sqrt(((self.train_x_ - row) ** 2).sum(axis=1))
            nearest = np.argsort(dist, kind="stable")[:k]
            votes = np.bincount(self.train_y_[nearest], minlength=len(self.classes_))
            summed = np.bincount(self.train_y_[nearest], weights=dist[nearest], minlength=len(self.classes_))
            best = min(
                (c for c in range(len(self.classes_)) if votes[c] == votes.max()),
                key=lambda c: (summed[c], c),
            )
            out.append(self.classes_[best])
        return out


class GaussianNaiveBayes(Classifier):
    """Maximum a posteriori rule with independent per-attribute Gaussian likelihoods."""

    kind = "naiveBayes"

    def __init__(self, var_floor: float = 1e-9):
        self.var_floor = var_floor

    def fit(self, x, y):
        x, y, self.classes_ = _check_training(x, y)
        self.n_features_ = x.shape[1]
        y = np.array(y)
        sizes = np.array([(y == c).sum() for c in self.classes_])
        if (sizes < 2).all():
            raise DegenerateDatasetError("every class has a single row; variances are undefined")
        self.log_prior_ = np.log(sizes / sizes.sum())
        self.mean_ = np.array([x[y == c].mean(axis=0) for c in self.classes_])
        var = np.array([x[y == c].var(axis=0) for c in self.classes_])
        # a one-row class has no spread of its own: borrow the pooled within-class variance
        pooled = (var * sizes[:, None]).sum(axis=0) / sizes[sizes >= 2].sum()
        var[sizes < 2] = pooled
        self.var_ = np.maximum(var, self.var_floor)
        return self

    def log_posterior(self, x) -> np.ndarray:
        x = self._check_input(x)
        diff = x[:, None, :] - self.mean_[None, :, :]
        loglik = -0.5 * (np.log(2 * np.pi * self.var_)[None] + diff**2 / self.var_[None]).sum(axis=2)
        return loglik + self.log_prior_[None, :]

    def predict(self, x) -> list[str]:
        return [self.classes_[i] for i in np.argmax(self.log_posterior(x), axis=1)]


@dataclass
class TreeNode:
    label: str                      # majority class, used at leaves
    counts: dict[str, int]
    attribute: int | None = None    # internal nodes test x[attribute] >= threshold
    threshold: float | None = None
    yes: "TreeNode | None" = None
    no: "TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.attribute is None

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.yes.depth(), self.no.depth())


class DecisionTree(Classifier):
    """Recursive binary splits ``x[a] >= theta`` chosen by information gain.

    Nodes with fewer than ``min_split`` rows are not split, and each child must
    keep at least ``min_leaf`` rows. Recursion stops at pure nodes or when no
    admissible split exists; a zero-gain split is still taken so balanced
    interactions (XOR) can be resolved one level down.
    """

    kind = "decisionTree"

    def __init__(self, min_split: int = 2, min_leaf: int = 1, max_depth: int | None = None):
        self.min_split = min_split
        self.min_leaf = min_leaf
        self.max_depth = max_depth

    def fit(self, x, y):
        x, y, self.classes_ = _check_training(x, y)
        self.n_features_ = x.shape[1]
        codes = np.array([self.classes_.index(c) for c in y])
        self.root_ = self._grow(x, codes, 0)
        return self

    def _leaf(self, codes) -> TreeNode:
        counts = np.bincount(codes, minlength=len(self.classes_))
        return TreeNode(
            self.classes_[int(np.argmax(counts))],
            {self.classes_[i]: int(n) for i, n in enumerate(counts) if n},
        )

    def _grow(self, x, codes, depth) -> TreeNode:
        node = self._leaf(codes)
        if len(node.counts) == 1 or len(codes) < self.min_split:
            return node
        if self.max_depth is not None and depth >= self.max_depth:
            return node
        split = self.best_split(x, codes)
        if split is None:
            return node
        attribute, threshold, _ = split
        mask = x[:, attribute] >= threshold
        node.attribute, node.threshold = attribute, threshold
        node.yes = self._grow(x[mask], codes[mask], depth + 1)
        node.no = self._grow(x[~mask], codes[~mask], depth + 1)
        return node

    def best_split(self, x, codes) -> tuple[int, float, float] | None:
        """(attribute, threshold, gain) maximizing gain; ties to lower attribute, then lower threshold."""
        n, n_classes = len(codes), len(self.classes_)
        parent = entropy(codes.tolist())
        best = None
        for a in range(x.shape[1]):
            order = np.argsort(x[:, a], kind="stable")
            vals, cls = x[order, a], codes[order]
            below = np.zeros(n_classes)
            total = np.bincount(cls, minlength=n_classes).astype(float)
            for i in range(n - 1):
                below[cls[i]] += 1
                left = i + 1
                if vals[i] == vals[i + 1] or left < self.min_leaf or n - left < self.min_leaf:
                    continue
                above = total - below
                h = (left * _entropy_counts(below) + (n - left) * _entropy_counts(above)) / n
                gain = parent - h
                if best is None or gain > best[2] + 1e-12:
                    best = (a, (vals[i] + vals[i + 1]) / 2.0, gain)
        return best

    def leaf_for(self, beta) -> TreeNode:
        node = self.root_
        while not node.is_leaf:
            node = node.yes if beta[node.attribute] >= node.threshold else node.no
        return node

    def predict(self, x) -> list[str]:
        return [self.leaf_for(row).label for row in self._check_input(x)]

    def describe(self, attribute_names: Sequence[str] | None = None) -> str:
        names = attribute_names or [f"x{i}" for i in range(self.n_features_)]
        lines = []

        def walk(node, indent):
            pad = "  " * indent
            if node.is_leaf:
                lines.append(f"{pad}-> {node.label} {node.counts}")
                return
            lines.append(f"{pad}{names[node.attribute]} >= {node.threshold:.6g}?")
            lines.append(f"{pad}YES:")
            walk(node.yes, indent + 1)
            lines.append(f"{pad}NO:")
            walk(node.no, indent + 1)

        walk(self.root_, 0)
        return "\n".join(lines)


def _entropy_counts(counts: np.ndarray) -> float:
    n = counts.sum()
    if n == 0:
        return 0.0
    p = counts[counts > 0] / n
    return float(-(p * np.log(p)).sum())


class Perceptron(Classifier):
    """One-vs-rest single-layer perceptron with step transfer.

    Each class owns one unit; weights follow ``w <- w + eta * err * x`` with
    ``err = target - step(w.x + b)`` on z-scored inputs. Prediction takes the
    unit with the largest activation.
    """

    kind = "perceptron"

    def __init__(self, eta: float = 0.01, epochs: int = 500, seed: int = 0):
        self.eta = eta
        self.epochs = epochs
        self.seed = seed

    def fit(self, x, y):
        x, y, self.classes_ = _check_training(x, y)
        self.n_features_ = x.shape[1]
        self.scaler_ = Standardizer().fit(x)
        z = np.hstack([self.scaler_.transform(x), np.ones((len(y), 1))])
        targets = np.array([[1.0 if c == k else 0.0 for k in self.classes_] for c in y])
        rng = np.random.default_rng(self.seed)
        w = rng.normal(scale=0.01, size=(len(self.classes_), z.shape[1]))
        self.epochs_run_ = 0
        for _ in range(self.epochs):
            self.epochs_run_ += 1
            mistakes = 0
            for i in rng.permutation(len(y)):
                out = (w @ z[i] > 0).astype(float)
                err = targets[i] - out
                if err.any():
                    mistakes += 1
                    w += self.eta * np.outer(err, z[i])
            if mistakes == 0:
                break
        self.weights_ = w
        return self

    def activations(self, x) -> np.ndarray:
        z = self.scaler_.transform(self._check_input(x))
        return np.hstack([z, np.ones((z.shape[0], 1))]) @ self.weights_.T

    def predict(self, x) -> list[str]:
        return [self.classes_[i] for i in np.argmax(self.activations(x), axis=1)]


def make_classifier(kind: str, seed: int = 0, **params) -> Classifier:
    if kind == "knn":
        return KNearestNeighbors(**params)
    if kind == "naiveBayes":
        return GaussianNaiveBayes(**params)
    if kind == "decisionTree":
        return DecisionTree(**params)
    if kind == "perceptron":
        return Perceptron(seed=seed, **params)
    raise ValueError(f"unknown classifier kind {kind!r}; expected one of {KINDS}")


def train(kind: str, dataset: LabeledDataset, seed: int = 0, **params) -> Classifier:
    return make_classifier(kind, seed=seed, **params).fit(dataset.x, dataset.y)


def train_knn(dataset: LabeledDataset, k: int = 1) -> KNearestNeighbors:
    return KNearestNeighbors(k).fit(dataset.x, dataset.y)


def train_naive_bayes(dataset: LabeledDataset) -> GaussianNaiveBayes:
    return GaussianNaiveBayes().fit(dataset.x, dataset.y)


def train_decision_tree(dataset: LabeledDataset, min_split: int = 2) -> DecisionTree:
    return DecisionTree(min_split).fit(dataset.x, dataset.y)


def train_perceptron(dataset: LabeledDataset, eta: float = 0.01, epochs: int = 500, seed: int = 0) -> Perceptron:
    return Perceptron(eta, epochs, seed).fit(dataset.x, dataset.y)


def predict(model: Classifier, beta: Sequence[float]) -> str:
    return model.predict_one(beta)
