"""Corpus discovery, feature CSVs and small output writers."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .ml.dataset import LabeledDataset


class DataError(ValueError):
    """Bad input data: malformed files, missing manifest, unusable corpus."""


@dataclass(frozen=True)
class BookRef:
    author: str
    book_id: str     # "<author>/<file stem>"
    path: Path


def discover_corpus(root: str | Path) -> tuple[list[BookRef], list[str], list[str]]:
    """Books under ``root/<author>/<file>``, sorted; also authors lacking books and warnings."""
    root = Path(root)
    if not root.is_dir():
        raise DataError(f"corpus root {root} is not a directory")
    books, empty, warnings = [], [], []
    for author_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        files = sorted(p for p in author_dir.iterdir() if p.is_file() and not p.name.startswith("."))
        if not files:
            empty.append(author_dir.name)
            warnings.append(f"author directory {author_dir.name!r} contains no books")
        for f in files:
            books.append(BookRef(author_dir.name, f"{author_dir.name}/{f.stem}", f))
    return books, empty, warnings


def header_line(fields: Mapping[str, object]) -> str:
    return "# stylofluct " + " ".join(f"{k}={v}" for k, v in fields.items())


def format_float(value: float) -> str:
    return repr(float(value))


def write_feature_csv(path: str | Path, dataset: LabeledDataset, header: Mapping[str, object]) -> None:
    buf = io.StringIO()
    buf.write(header_line(header) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["book", "author", *dataset.attribute_names])
    for book, author, row in zip(dataset.book_ids, dataset.y, dataset.x):
        writer.writerow([book, author, *(format_float(v) for v in row)])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def read_header(path: str | Path) -> dict[str, str]:
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().strip()
    if not first.startswith("# stylofluct"):
        return {}
    return dict(part.split("=", 1) for part in first.split()[2:] if "=" in part)


def read_feature_csv(path: str | Path) -> LabeledDataset:
    """Parse a feature CSV; errors name the offending line and column."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    lines = text.splitlines()
    body_start = 0
    while body_start < len(lines) and lines[body_start].startswith("#"):
        body_start += 1
    rows = list(csv.reader(lines[body_start:]))
    if not rows:
        raise DataError(f"{path}: no header row")
    header = rows[0]
    if len(header) < 3 or header[:2] != ["book", "author"]:
        raise DataError(f"{path}:{body_start + 1}: header must start with 'book,author' and name >= 1 feature")
    books, authors, values = [], [], []
    for offset, row in enumerate(rows[1:], start=body_start + 2):
        if not row:
            continue
        if len(row) != len(header):
            raise DataError(f"{path}:{offset}: expected {len(header)} fields, found {len(row)}")
        parsed = []
        for col, cell in enumerate(row[2:], start=3):
            try:
                v = float(cell)
            except ValueError:
                raise DataError(f"{path}:{offset}: column {col} ({header[col - 1]}): not a number: {cell!r}") from None
            if not math.isfinite(v):
                raise DataError(f"{path}:{offset}: column {col} ({header[col - 1]}): non-finite value")
            parsed.append(v)
        books.append(row[0])
        authors.append(row[1])
        values.append(parsed)
    if not values:
        raise DataError(f"{path}: no data rows")
    return LabeledDataset(np.array(values), authors, header[2:], books, {"source": str(path)})


def write_json(path: str | Path, payload: object) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=False) + "\n", encoding="utf-8")


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def scatter_svg(
    coords: np.ndarray,
    labels: Sequence[str],
    title: str = "",
    axis_labels: tuple[str, str] = ("PC1", "PC2"),
    size: tuple[int, int] = (640, 480),
) -> str:
    """Minimal standalone SVG scatter plot, points coloured by label, with a legend."""
    width, height = size
    margin, legend_w = 50, 170
    plot_w, plot_h = width - 2 * margin - legend_w, height - 2 * margin
    xs, ys = coords[:, 0], coords[:, 1]

    def scale(v, lo, hi, span):
        return span / 2 if hi == lo else (v - lo) / (hi - lo) * span

    xlo, xhi, ylo, yhi = xs.min(), xs.max(), ys.min(), ys.max()
    classes = sorted(set(labels))
    colour = {c: _PALETTE[i % len(_PALETTE)] for i, c in enumerate(classes)}
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{margin}" y="{margin}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#444"/>',
        f'<text x="{margin}" y="{margin - 15}" font-family="sans-serif" font-size="14">{_esc(title)}</text>',
        f'<text x="{margin + plot_w / 2:.1f}" y="{height - 12}" font-family="sans-serif" font-size="12" '
        f'text-anchor="middle">{_esc(axis_labels[0])}</text>',
        f'<text x="14" y="{margin + plot_h / 2:.1f}" font-family="sans-serif" font-size="12" '
        f'text-anchor="middle" transform="rotate(-90 14 {margin + plot_h / 2:.1f})">{_esc(axis_labels[1])}</text>',
    ]
    for x, y, lab in zip(xs, ys, labels):
        cx = margin + 8 + scale(x, xlo, xhi, plot_w - 16)
        cy = margin + plot_h - 8 - scale(y, ylo, yhi, plot_h - 16)
        out.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="5" fill="{colour[lab]}" fill-opacity="0.8"/>')
    lx = width - legend_w - margin / 2 + 10
    for i, c in enumerate(classes):
        y = margin + 10 + 20 * i
        out.append(f'<circle cx="{lx:.1f}" cy="{y}" r="5" fill="{colour[c]}"/>')
        out.append(
            f'<text x="{lx + 12:.1f}" y="{y + 4}" font-family="sans-serif" font-size="12">{_esc(c)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")
