from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class LabeledDataset:
    """Books x attributes feature matrix with one author label per row."""

    x: np.ndarray
    y: tuple[str, ...]
    attribute_names: tuple[str, ...]
    book_ids: tuple[str, ...] = ()
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        if x.ndim != 2:
            raise ValueError(f"feature matrix must be 2-D, got shape {x.shape}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", tuple(self.y))
        object.__setattr__(self, "attribute_names", tuple(self.attribute_names))
        if len(self.y) != x.shape[0]:
            raise ValueError(f"{x.shape[0]} rows but {len(self.y)} labels")
        if len(self.attribute_names) != x.shape[1]:
            raise ValueError(f"{x.shape[1]} columns but {len(self.attribute_names)} attribute names")
        if not self.book_ids:
            object.__setattr__(self, "book_ids", tuple(f"row{i}" for i in range(x.shape[0])))
        else:
            object.__setattr__(self, "book_ids", tuple(self.book_ids))

    @property
    def classes(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.y)))

    @property
    def n_rows(self) -> int:
        return self.x.shape[0]

    def column(self, attribute: str | int) -> np.ndarray:
        if isinstance(attribute, str):
            try:
                attribute = self.attribute_names.index(attribute)
            except ValueError:
                raise KeyError(f"unknown attribute {attribute!r}") from None
        return self.x[:, attribute]

    def subset(self, rows: Sequence[int]) -> "LabeledDataset":
        rows = list(rows)
        return LabeledDataset(
            self.x[rows],
            tuple(self.y[i] for i in rows),
            self.attribute_names,
            tuple(self.book_ids[i] for i in rows),
            self.meta,
        )

    def select(self, attributes: Sequence[str]) -> "LabeledDataset":
        idx = [self.attribute_names.index(a) for a in attributes]
        return LabeledDataset(self.x[:, idx], self.y, tuple(attributes), self.book_ids, self.meta)


class Standardizer:
    """Per-column z-score with statistics frozen at fit time; constant columns map to 0."""

    def fit(self, x: np.ndarray) -> "Standardizer":
        x = np.asarray(x, dtype=float)
        self.mean_ = x.mean(axis=0)
        std = x.std(axis=0)
        self.scale_ = np.where(std > 0, std, 1.0)
        return self

    def transform(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=float) - self.mean_) / self.scale_

    def fit_transform(self, x: np.ndarray) -> np.ndarray:
        return self.fit(x).transform(x)
