"""Entropy and information gain of attributes with respect to the class label."""
from __future__ import annotations

from collections import Counter
from typing import Sequence

import numpy as np

from .dataset import LabeledDataset

N_BINS = 10


def entropy(labels: Sequence) -> float:
    """Shannon entropy in nats."""
    n = len(labels)
    if n == 0:
        return 0.0
    p = np.array(list(Counter(labels).values()), dtype=float) / n
    return float(-(p * np.log(p)).sum())


def equal_frequency_bins(values: Sequence[float], n_bins: int = N_BINS) -> np.ndarray:
    """Bin index per value, roughly n/n_bins values per bin.

    Equal values always share a bin. When there are no more distinct values
    than bins, every distinct value is its own bin.
    """
    v = np.asarray(values, dtype=float)
    uniq, inverse = np.unique(v, return_inverse=True)
    if len(uniq) <= n_bins:
        return inverse
    order = np.argsort(v, kind="stable")
    sorted_v = v[order]
    # rank of the first occurrence of each value keeps ties together
    first_rank = np.searchsorted(sorted_v, v, side="left")
    return np.minimum(first_rank * n_bins // len(v), n_bins - 1)


def conditional_entropy(labels: Sequence, groups: Sequence) -> float:
    labels = list(labels)
    n = len(labels)
    by_group: dict = {}
    for g, c in zip(groups, labels):
        by_group.setdefault(g, []).append(c)
    return sum(len(sub) / n * entropy(sub) for sub in by_group.values())


def information_gain(dataset: LabeledDataset, attribute: str | int, n_bins: int = N_BINS) -> float:
    """H(S) - H(S | attribute), with the attribute discretized into equal-frequency bins."""
    if dataset.n_rows == 0:
        raise ValueError("empty dataset")
    col = dataset.column(attribute)
    bins = equal_frequency_bins(col, n_bins)
    gain = entropy(dataset.y) - conditional_entropy(dataset.y, bins)
    return max(gain, 0.0)


def rank_attributes(dataset: LabeledDataset, n_bins: int = N_BINS) -> list[tuple[str, float]]:
    """All attributes sorted by information gain (descending), ties by name."""
    scores = [(name, information_gain(dataset, k, n_bins)) for k, name in enumerate(dataset.attribute_names)]
    return sorted(scores, key=lambda s: (-round(s[1], 12), s[0]))
