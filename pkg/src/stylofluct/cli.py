"""``stylofluct`` command line: one subcommand per pipeline stage.

Exit codes: 0 success, 1 usage error, 2 data error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__, pipeline
from .config import ConfigError, RunConfig
from .io import (
    DataError,
    format_float,
    header_line,
    read_feature_csv,
    scatter_svg,
    write_feature_csv,
    write_json,
)
from .intermittency import burstiest_words
from .ml.classifiers import KINDS, DegenerateDatasetError
from .ml.infogain import rank_attributes
from .ml.pca import pca
from .text import tokenize

log = logging.getLogger("stylofluct")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _kind_list(text: str) -> list[str]:
    kinds = [t.strip() for t in text.split(",") if t.strip()]
    bad = [k for k in kinds if k not in KINDS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown classifier(s) {bad}; choose from {','.join(KINDS)}")
    return kinds


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("configuration overrides")
    g.add_argument("--config", help="JSON file with RunConfig fields")
    g.add_argument("--corpus-root", dest="corpusRoot")
    g.add_argument("--stopword-file", dest="stopwordFile")
    g.add_argument("--lemma-file", dest="lemmaFile")
    g.add_argument("--window-sizes", dest="windowSizes", type=_int_list, metavar="W1,W2,...")
    g.add_argument("--function-words", dest="functionWordCount", type=int, metavar="N")
    g.add_argument("--classifiers", dest="classifierKinds", type=_kind_list, metavar="K1,K2,...")
    g.add_argument("--cv-folds", dest="cvFolds", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--output-dir", dest="outputDir")
    g.add_argument("--workers", type=int)
    g.add_argument("--knn-k", dest="knnK", type=int)
    g.add_argument("--intermittency-flags", dest="intermittencyFlags", action="store_const", const=True,
                   help="append a missing_<word> indicator column per word")
    g.add_argument("-v", "--verbose", action="count", default=0)

    parser = _Parser(prog="stylofluct", description="Fluctuation-based authorship attribution.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("ingest", parents=[common], help="scan the corpus and write manifest.json")
    sub.add_parser("spectral", parents=[common], help="network-metric spectral features, one CSV per W")
    sub.add_parser("intermit", parents=[common], help="intermittency of the most frequent words")
    for name, text in (
        ("classify", "cross-validated classification of a feature CSV"),
        ("rank", "rank attributes of a feature CSV by information gain"),
        ("pca", "2-D principal component projection of a feature CSV"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("features", help="feature CSV written by 'spectral' or 'intermit'")
        if name == "pca":
            p.add_argument("--top", type=int, metavar="K", help="keep only the K highest info-gain attributes")
    p = sub.add_parser("keywords", parents=[common], help="debug: most intermittent words of one text file")
    p.add_argument("book", help="UTF-8 text file")
    p.add_argument("--top", type=int, default=20, metavar="N")
    p.add_argument("--min-count", type=int, default=5, metavar="F")
    return parser


def _config_from_args(args, require_corpus: bool) -> RunConfig:
    overrides = {
        k: getattr(args, k)
        for k in ("corpusRoot", "stopwordFile", "lemmaFile", "windowSizes", "functionWordCount",
                  "classifierKinds", "cvFolds", "seed", "outputDir", "workers", "knnK", "intermittencyFlags")
    }
    return RunConfig.load(args.config, require_corpus=require_corpus, **overrides)


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.outputDir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_manifest(cfg: RunConfig) -> dict:
    path = Path(cfg.outputDir) / "manifest.json"
    if not path.is_file():
        raise DataError(f"{path} not found; run 'stylofluct ingest' first")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON: {exc}") from exc


def cmd_ingest(cfg: RunConfig, args) -> list[Path]:
    manifest = pipeline.build_manifest(cfg)
    path = _out_dir(cfg) / "manifest.json"
    write_json(path, manifest)
    n = sum(len(a["books"]) for a in manifest["authors"])
    log.info("manifest: %d books by %d authors", n, len(manifest["authors"]))
    return [path]


def cmd_spectral(cfg: RunConfig, args) -> list[Path]:
    books = pipeline.manifest_books(_load_manifest(cfg), cfg.corpusRoot)
    out = _out_dir(cfg)
    written, summary = [], []
    for w, (dataset, excluded) in pipeline.spectral_datasets(cfg, books).items():
        path = out / f"spectral_W{w}.csv"
        write_feature_csv(path, dataset, cfg.stamp(W=w, books=dataset.n_rows, excluded=len(excluded)))
        written.append(path)
        summary.append({"W": w, "included": list(dataset.book_ids), "excluded": excluded})
    path = out / "spectral_summary.json"
    write_json(path, {**cfg.stamp(), "windows": summary})
    return [*written, path]


def cmd_intermit(cfg: RunConfig, args) -> list[Path]:
    books = pipeline.manifest_books(_load_manifest(cfg), cfg.corpusRoot)
    if not books:
        raise DataError("manifest lists no books")
    dataset, words = pipeline.intermittency_dataset(cfg, books)
    path = _out_dir(cfg) / "intermittency.csv"
    write_feature_csv(path, dataset, cfg.stamp(words=len(words)))
    return [path]


def cmd_classify(cfg: RunConfig, args) -> list[Path]:
    dataset = read_feature_csv(args.features)
    reports = pipeline.classify(cfg, dataset)
    best = pipeline.best_report(reports)
    stem = Path(args.features).stem
    out = _out_dir(cfg)
    summary = (
        f"best classifier: {best.model_kind} accuracy={best.mean_accuracy:.4f} "
        f"p={best.p_value:.3g} (chance={1 / len(best.labels):.4f}, n={best.total})"
    )
    json_path = out / f"classify_{stem}.json"
    write_json(json_path, {
        **cfg.stamp(),
        "features": Path(args.features).name,
        "reports": [r.to_json_dict() for r in reports],
        "best": {"modelKind": best.model_kind, "meanAccuracy": best.mean_accuracy, "pValue": best.p_value},
    })
    lines = [header_line({**cfg.stamp(), "features": Path(args.features).name})]
    for r in reports:
        lines += [
            "",
            f"{r.model_kind}: accuracy={r.mean_accuracy:.4f} p={r.p_value:.3g} correct={r.correct}/{r.total}",
            r.confusion_table(),
        ]
    lines += ["", summary]
    txt_path = out / f"classify_{stem}.txt"
    txt_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(summary)
    return [json_path, txt_path]


def cmd_rank(cfg: RunConfig, args) -> list[Path]:
    dataset = read_feature_csv(args.features)
    ranking = rank_attributes(dataset)
    stem = Path(args.features).stem
    rows = [header_line({**cfg.stamp(), "features": Path(args.features).name}), "rank,attribute,infoGain"]
    rows += [f"{i},{name},{format_float(g)}" for i, (name, g) in enumerate(ranking, start=1)]
    path = _out_dir(cfg) / f"rank_{stem}.csv"
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return [path]


def cmd_pca(cfg: RunConfig, args) -> list[Path]:
    dataset = read_feature_csv(args.features)
    if args.top is not None:
        if args.top < 2:
            raise UsageError("--top must be at least 2")
        dataset = dataset.select([name for name, _ in rank_attributes(dataset)[: args.top]])
    result = pca(dataset, dims=2)
    stem = Path(args.features).stem
    out = _out_dir(cfg)
    stamp = {**cfg.stamp(), "features": Path(args.features).name}

    csv_path = out / f"pca_{stem}.csv"
    rows = [header_line(stamp), "book,author,pc1,pc2"]
    rows += [
        f"{b},{a},{format_float(p[0])},{format_float(p[1])}"
        for b, a, p in zip(dataset.book_ids, dataset.y, result.coords)
    ]
    csv_path.write_text("\n".join(rows) + "\n", encoding="utf-8")

    json_path = out / f"pca_{stem}.json"
    write_json(json_path, {
        **stamp,
        "attributes": list(dataset.attribute_names),
        "explainedVarianceRatio": [float(v) for v in result.explained_variance_ratio],
        "eigenvalues": [float(v) for v in result.eigenvalues[:2]],
    })

    ratio = result.explained_variance_ratio
    svg = scatter_svg(
        result.coords,
        list(dataset.y),
        title=f"PCA of {Path(args.features).name}",
        axis_labels=(f"PC1 ({100 * ratio[0]:.1f}%)", f"PC2 ({100 * ratio[1]:.1f}%)"),
    )
    svg_path = out / f"pca_{stem}.svg"
    comment = " ".join(f"{k}={v}" for k, v in stamp.items()).replace("--", "- -")
    svg_path.write_text(f"<!-- stylofluct {comment} -->\n{svg}", encoding="utf-8")
    return [csv_path, json_path, svg_path]


def cmd_keywords(cfg: RunConfig, args) -> list[Path]:
    if args.top < 1 or args.min_count < 2:
        raise UsageError("--top must be >= 1 and --min-count >= 2")
    try:
        text = Path(args.book).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"cannot read {args.book}: {exc}") from exc
    ranked = burstiest_words(tokenize(text).tokens, args.top, args.min_count)
    rows = [header_line({**cfg.stamp(), "book": Path(args.book).name}), "rank,word,f,I"]
    rows += [f"{i},{w},{f},{format_float(v)}" for i, (w, f, v) in enumerate(ranked, start=1)]
    path = _out_dir(cfg) / f"keywords_{Path(args.book).stem}.csv"
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return [path]


COMMANDS = {
    "ingest": (cmd_ingest, True),
    "spectral": (cmd_spectral, True),
    "intermit": (cmd_intermit, True),
    "classify": (cmd_classify, False),
    "rank": (cmd_rank, False),
    "pca": (cmd_pca, False),
    "keywords": (cmd_keywords, False),
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    fn, needs_corpus = COMMANDS[args.command]
    try:
        cfg = _config_from_args(args, needs_corpus)
        for path in fn(cfg, args):
            log.info("wrote %s", path)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"stylofluct: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, DataError, DegenerateDatasetError, ValueError, OSError) as exc:
        print(f"stylofluct: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
