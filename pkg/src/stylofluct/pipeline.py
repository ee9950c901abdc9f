"""Corpus-level orchestration shared by the CLI and the acceptance suite."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .config import RunConfig
from .intermittency import intermittency_vector, top_frequent_words
from .io import BookRef, DataError, discover_corpus
from .ml.dataset import LabeledDataset
from .ml.validation import CVReport, cross_validate
from .series import SeriesTooShortError, book_spectral_features, feature_names
from .text import LemmaDictionary, StopwordList, lemmatize, remove_stopwords, tokenize

log = logging.getLogger(__name__)


def load_lexicons(cfg: RunConfig) -> tuple[StopwordList, LemmaDictionary]:
    stops = StopwordList.from_file(cfg.stopwordFile) if cfg.stopwordFile else StopwordList.default()
    lemmas = LemmaDictionary.from_tsv(cfg.lemmaFile) if cfg.lemmaFile else LemmaDictionary.default()
    return stops, lemmas


def parallel_map(fn: Callable, items: Iterable, workers: int = 1) -> list:
    """Ordered map; results come back in input order whatever the scheduling."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _read_book(path: Path) -> str:
    return path.read_text(encoding="utf-8")


def _count_tokens(ref: BookRef, stops: frozenset, lemmas: dict) -> dict:
    try:
        raw = tokenize(_read_book(ref.path), ref.book_id)
    except (OSError, UnicodeDecodeError) as exc:
        return {"book": ref.book_id, "error": f"{type(exc).__name__}: {exc}"}
    filtered = lemmatize(remove_stopwords(raw, StopwordList(stops)), lemmas)
    return {"book": ref.book_id, "rawTokens": len(raw), "filteredTokens": len(filtered)}


def build_manifest(cfg: RunConfig) -> dict:
    stops, lemmas = load_lexicons(cfg)
    root = Path(cfg.corpusRoot)
    books, empty_authors, warnings = discover_corpus(root)
    for w in warnings:
        log.warning(w)
    counts = parallel_map(
        partial(_count_tokens, stops=stops.words, lemmas=dict(lemmas)), books, cfg.workers
    )
    authors: dict[str, list] = {a: [] for a in empty_authors}
    errors = []
    for ref, info in zip(books, counts):
        authors.setdefault(ref.author, [])
        if "error" in info:
            log.error("%s: %s", ref.book_id, info["error"])
            errors.append(info)
            continue
        authors[ref.author].append({"book": ref.book_id, "path": ref.path.relative_to(root).as_posix(), **{
            k: info[k] for k in ("rawTokens", "filteredTokens")
        }})
    return {
        **cfg.stamp(),
        "corpusRoot": cfg.corpusRoot,
        "authors": [{"author": a, "books": authors[a]} for a in sorted(authors)],
        "warnings": warnings,
        "errors": errors,
    }


def manifest_books(manifest: dict, corpus_root: str | Path) -> list[BookRef]:
    root = Path(corpus_root)
    try:
        return [
            BookRef(entry["author"], b["book"], root / b["path"])
            for entry in manifest["authors"]
            for b in entry["books"]
        ]
    except (KeyError, TypeError) as exc:
        raise DataError(f"malformed manifest: missing {exc}") from exc


def _book_spectral(ref: BookRef, window_sizes: Sequence[int], stops: frozenset, lemmas: dict) -> dict:
    stream = lemmatize(remove_stopwords(tokenize(_read_book(ref.path), ref.book_id), StopwordList(stops)), lemmas)
    out = {}
    for w in window_sizes:
        try:
            out[w] = book_spectral_features(stream, w, ref.book_id)
        except SeriesTooShortError as exc:
            out[w] = str(exc)
    return out


def spectral_datasets(cfg: RunConfig, books: Sequence[BookRef]) -> dict[int, tuple[LabeledDataset, list[dict]]]:
    """One dataset per window size plus the excluded books (with reasons)."""
    stops, lemmas = load_lexicons(cfg)
    fn = partial(_book_spectral, window_sizes=cfg.windowSizes, stops=stops.words, lemmas=dict(lemmas))
    per_book = parallel_map(fn, books, cfg.workers)
    names = feature_names()
    result = {}
    for w in cfg.windowSizes:
        rows, labels, ids, excluded = [], [], [], []
        for ref, feats in zip(books, per_book):
            value = feats[w]
            if isinstance(value, str):
                log.info("excluding %s at W=%d: %s", ref.book_id, w, value)
                excluded.append({"book": ref.book_id, "author": ref.author, "reason": value})
                continue
            rows.append(value)
            labels.append(ref.author)
            ids.append(ref.book_id)
        x = np.array(rows) if rows else np.zeros((0, len(names)))
        result[w] = (LabeledDataset(x, labels, names, ids, {"W": w}), excluded)
    return result


def _raw_tokens(ref: BookRef) -> tuple[str, ...]:
    return tokenize(_read_book(ref.path), ref.book_id).tokens


def intermittency_dataset(
    cfg: RunConfig, books: Sequence[BookRef], words: Sequence[str] | None = None
) -> tuple[LabeledDataset, list[str]]:
    """Intermittency of the corpus' most frequent words, on unfiltered lowercase tokens."""
    streams = parallel_map(_raw_tokens, books, cfg.workers)
    if words is None:
        words = top_frequent_words(streams, cfg.functionWordCount)
    words = list(words)
    rows = []
    for ref, tokens in zip(books, streams):
        vec = intermittency_vector(tokens, words, ref.book_id, ref.author)
        rows.append(np.concatenate([vec.values, vec.missing.astype(float)]) if cfg.intermittencyFlags else vec.values)
    names = [f"I_{w}" for w in words]
    if cfg.intermittencyFlags:
        names += [f"missing_{w}" for w in words]
    x = np.array(rows) if rows else np.zeros((0, len(names)))
    dataset = LabeledDataset(x, [b.author for b in books], names, [b.book_id for b in books])
    return dataset, words


def classifier_params(cfg: RunConfig, kind: str) -> dict:
    if kind == "knn":
        return {"k": cfg.knnK}
    if kind == "perceptron":
        return {"eta": cfg.perceptronEta, "epochs": cfg.perceptronEpochs}
    return {}


def classify(cfg: RunConfig, dataset: LabeledDataset) -> list[CVReport]:
    if dataset.n_rows < cfg.cvFolds:
        raise DataError(f"{dataset.n_rows} rows is fewer than cvFolds={cfg.cvFolds}")
    return [
        cross_validate(dataset, kind, cfg.cvFolds, cfg.seed, **classifier_params(cfg, kind))
        for kind in cfg.classifierKinds
    ]


def best_report(reports: Sequence[CVReport]) -> CVReport:
    """Highest mean accuracy; ties go to the earlier classifier in the run."""
    return max(reports, key=lambda r: r.mean_accuracy)
