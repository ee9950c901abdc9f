"""Tokenization, stopword removal, lemmatization and fixed-length windowing."""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

# letters only; an apostrophe survives when it sits between two letters
_TOKEN_RE = re.compile(r"[^\W\d_]+(?:'[^\W\d_]+)*")
_APOSTROPHES = str.maketrans({"’": "'", "‘": "'", "ʼ": "'"})


class TextTooShortError(ValueError):
    """Raised when a book has fewer tokens than the requested window size."""


@dataclass(frozen=True)
class TokenStream:
    tokens: tuple[str, ...]
    source_id: str = ""
    raw_length: int = 0

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __getitem__(self, item):
        return self.tokens[item]


@dataclass(frozen=True)
class StopwordList:
    words: frozenset[str] = field(default_factory=frozenset)

    def __contains__(self, word: str) -> bool:
        return word in self.words

    @classmethod
    def from_file(cls, path: str | Path) -> "StopwordList":
        """One word per line; blank lines and ``#`` comments are ignored."""
        words = set()
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line and not line.startswith("#"):
                    words.add(line.lower())
        return cls(frozenset(words))

    @classmethod
    def default(cls) -> "StopwordList":
        with resources.as_file(resources.files("stylofluct.data") / "stopwords_en.txt") as p:
            return cls.from_file(p)


class LemmaDictionary(Mapping[str, str]):
    """Inflected form -> canonical form, with every canonical form a fixed point."""

    def __init__(self, mapping: Mapping[str, str] | None = None):
        table = {k: v for k, v in (mapping or {}).items() if k != v}
        for key, value in table.items():
            if value in table:
                raise ValueError(
                    f"canonical form {value!r} (of {key!r}) is itself mapped to {table[value]!r}"
                )
        self._table = table

    def __getitem__(self, key: str) -> str:
        return self._table[key]

    def __iter__(self):
        return iter(self._table)

    def __len__(self) -> int:
        return len(self._table)

    def canonical(self, word: str) -> str:
        return self._table.get(word, word)

    @classmethod
    def from_tsv(cls, path: str | Path) -> "LemmaDictionary":
        table: dict[str, str] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise ValueError(f"{path}:{lineno}: expected 2 tab-separated columns")
                key, value = parts[0].strip().lower(), parts[1].strip().lower()
                if key in table and table[key] != value:
                    raise ValueError(f"{path}:{lineno}: {key!r} mapped twice")
                table[key] = value
        return cls(table)

    @classmethod
    def default(cls) -> "LemmaDictionary":
        with resources.as_file(resources.files("stylofluct.data") / "lemmas_en.tsv") as p:
            return cls.from_tsv(p)


def tokenize(raw_text: str, source_id: str = "") -> TokenStream:
    """Split text into lowercase runs of letters.

    >>> tokenize("don't stop—now!").tokens
    ("don't", 'stop', 'now')
    """
    tokens = tuple(_fold(t) for t in _letter_runs(raw_text.translate(_APOSTROPHES)))
    return TokenStream(tokens, source_id, len(tokens))


def _fold(token: str) -> str:
    low = token.lower()
    # a few capitals lowercase to letter + combining mark (e.g. dotted I)
    return low if low.replace("'", "").isalpha() else "".join(c for c in low if c.isalpha() or c == "'")


def _letter_runs(text: str):
    for m in _TOKEN_RE.finditer(text):
        tok = m.group(0)
        if tok.replace("'", "").isalpha():
            yield tok
        else:
            # \w also admits numeric symbols such as superscripts; blank them and rescan
            yield from _letter_runs("".join(c if c.isalpha() or c == "'" else " " for c in tok))


def remove_stopwords(stream: TokenStream, stops: StopwordList | Iterable[str]) -> TokenStream:
    if not isinstance(stops, StopwordList):
        stops = StopwordList(frozenset(stops))
    return replace(stream, tokens=tuple(t for t in stream.tokens if t not in stops))


def lemmatize(stream: TokenStream, lemmas: Mapping[str, str]) -> TokenStream:
    return replace(stream, tokens=tuple(lemmas.get(t, t) for t in stream.tokens))


def window_split(stream: TokenStream, w: int) -> list[TokenStream]:
    """Cut the stream into ``len // w`` consecutive windows; the remainder is dropped."""
    if w < 2:
        raise ValueError(f"window size must be >= 2, got {w}")
    n_windows = len(stream) // w
    if n_windows == 0:
        raise TextTooShortError(
            f"{stream.source_id or 'stream'}: {len(stream)} tokens is shorter than W={w}"
        )
    return [
        replace(stream, tokens=stream.tokens[j * w:(j + 1) * w], raw_length=w)
        for j in range(n_windows)
    ]


def preprocess(
    raw_text: str,
    stops: StopwordList | None = None,
    lemmas: Mapping[str, str] | None = None,
    source_id: str = "",
) -> TokenStream:
    """Tokenize, drop stopwords, lemmatize. ``raw_length`` keeps the pre-filter count."""
    stream = tokenize(raw_text, source_id)
    if stops is not None:
        stream = remove_stopwords(stream, stops)
    if lemmas is not None:
        stream = lemmatize(stream, lemmas)
    return stream


def strip_gutenberg_boilerplate(raw_text: str) -> str:
    """Keep only the text between the ``*** START OF`` / ``*** END OF`` marker lines, if present."""
    lines = raw_text.splitlines()
    start, end = 0, len(lines)
    for i, line in enumerate(lines):
        if line.startswith("*** START OF"):
            start = i + 1
        elif line.startswith("*** END OF"):
            end = i
            break
    return "\n".join(lines[start:end])
