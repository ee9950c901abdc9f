"""Recurrence-time series of words and their intermittency (burstiness)."""
from __future__ import annotations

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

log = logging.getLogger(__name__)


class WordAbsentError(KeyError):
    """The word never occurs in the stream."""


@dataclass(frozen=True)
class RecurrenceSeries:
    word: str
    f: int
    gaps: tuple[int, ...]  # tokens before first, between consecutive, after last occurrence
    n: int

    @property
    def mean_distance(self) -> float:
        """Mean recurrence distance, (N + 1) / (f + 1)."""
        return (self.n + 1) / (self.f + 1)


def recurrence_series(tokens: Sequence[str], word: str) -> RecurrenceSeries:
    positions = [i for i, t in enumerate(tokens) if t == word]
    if not positions:
        raise WordAbsentError(word)
    return _series_from_positions(word, positions, len(tokens))


def _series_from_positions(word: str, positions: Sequence[int], n: int) -> RecurrenceSeries:
    pos = np.asarray(positions)
    bounds = np.concatenate([[-1], pos, [n]])
    gaps = np.diff(bounds) - 1
    return RecurrenceSeries(word, len(pos), tuple(int(g) for g in gaps), n)


def intermittency(series: RecurrenceSeries) -> float:
    """Population std of the recurrence distances divided by their mean.

    Distances are gaps + 1, so they sum to N + 1 and average (N + 1)/(f + 1).
    The shift does not change the spread: I is 0 exactly when all gaps match.
    """
    if series.f < 1:
        raise ValueError("intermittency needs at least one occurrence")
    gaps = np.asarray(series.gaps, dtype=float)
    mean = series.mean_distance
    spread = np.sqrt(np.mean((gaps + 1.0 - mean) ** 2))
    return float(spread / mean)


def word_positions(tokens: Sequence[str]) -> dict[str, list[int]]:
    positions: dict[str, list[int]] = defaultdict(list)
    for i, t in enumerate(tokens):
        positions[t].append(i)
    return positions


def all_recurrence_series(tokens: Sequence[str]) -> dict[str, RecurrenceSeries]:
    n = len(tokens)
    return {w: _series_from_positions(w, p, n) for w, p in word_positions(tokens).items()}


def top_frequent_words(corpus: Iterable[Sequence[str]], n: int = 100) -> list[str]:
    """Corpus-wide most frequent tokens, ties broken alphabetically."""
    if n <= 0:
        return []
    counts: Counter[str] = Counter()
    empty = True
    for book in corpus:
        empty = False
        counts.update(book)
    if empty:
        raise ValueError("corpus is empty")
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    if len(ranked) < n:
        log.warning("only %d distinct tokens, fewer than the %d requested", len(ranked), n)
    return [w for w, _ in ranked[:n]]


@dataclass(frozen=True)
class IntermittencyVector:
    book_id: str
    author: str
    words: tuple[str, ...]
    values: np.ndarray
    missing: np.ndarray  # True where the word occurs at most once


def intermittency_vector(
    tokens: Sequence[str], words: Sequence[str], book_id: str = "", author: str = ""
) -> IntermittencyVector:
    """I for each word; a word seen at most once gets 0 and a missing flag."""
    positions = word_positions(tokens)
    n = len(tokens)
    values = np.zeros(len(words))
    missing = np.zeros(len(words), dtype=bool)
    for k, w in enumerate(words):
        pos = positions.get(w, ())
        if len(pos) <= 1:
            missing[k] = True
            continue
        values[k] = intermittency(_series_from_positions(w, pos, n))
    return IntermittencyVector(book_id, author, tuple(words), values, missing)


def intermittency_frequency_correlation(
    tokens: Sequence[str], min_count: int = 5, min_words: int = 10
) -> float:
    """Pearson r between frequency and intermittency over words seen >= ``min_count`` times."""
    if len(tokens) < 1000:
        raise ValueError(f"need at least 1000 tokens, got {len(tokens)}")
    series = [s for s in all_recurrence_series(tokens).values() if s.f >= min_count]
    if len(series) < min_words:
        raise ValueError(f"only {len(series)} words occur at least {min_count} times")
    f = np.array([s.f for s in series], dtype=float)
    i = np.array([intermittency(s) for s in series])
    if f.std() == 0 or i.std() == 0:
        raise ValueError("correlation undefined: zero variance in frequency or intermittency")
    return float(np.corrcoef(f, i)[0, 1])


def burstiest_words(tokens: Sequence[str], n: int = 20, min_count: int = 5) -> list[tuple[str, int, float]]:
    """(word, f, I) for the ``n`` most intermittent words seen at least ``min_count`` times."""
    scored = [
        (s.word, s.f, intermittency(s)) for s in all_recurrence_series(tokens).values() if s.f >= min_count
    ]
    scored.sort(key=lambda t: (-t[2], t[0]))
    return scored[:n]
