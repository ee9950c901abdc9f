"""Assemble the desk corpus from the stdlib-js dataset tarballs on the npm registry.

    npm pack @stdlib/datasets-sotu @stdlib/datasets-moby-dick
    python scripts/build_desk_corpus.py --sotu stdlib-datasets-sotu-0.2.3.tgz \
        --moby stdlib-datasets-moby-dick-0.2.3.tgz --out corpus

Selection rule for the attribution corpus (``corpus/desk``): State of the Union
addresses with at least ``--min-words`` whitespace-separated words are
"qualifying"; the four presidents with the most qualifying addresses are kept
(ties broken by total qualifying words), and each contributes its ``--per-author``
longest qualifying addresses. Moby Dick (chapters 1-135 plus epilogue) goes to
``corpus/reference/herman_melville/moby_dick.txt``.
"""
import argparse
import re
import tarfile
from collections import defaultdict
from pathlib import Path

SOTU_NAME = re.compile(r"package/data/(\d{4})_([a-z_]+?)_[a-z]+\.txt$")
CHAPTER_NAME = re.compile(r"package/data/chapter_(\d+)\.txt$")


def _read_members(tgz):
    with tarfile.open(tgz) as tar:
        for member in tar.getmembers():
            if member.isfile():
                yield member.name, tar.extractfile(member).read().decode("utf-8")


def build_sotu(tgz, out, min_words, authors, per_author):
    by_president = defaultdict(list)
    for name, text in _read_members(tgz):
        match = SOTU_NAME.search(name)
        if match is None:
            continue
        year, president = match.groups()
        n_words = len(text.split())
        if n_words >= min_words:
            by_president[president].append((n_words, year, text))
    ranked = sorted(
        by_president.items(),
        key=lambda kv: (-len(kv[1]), -sum(n for n, _, _ in kv[1]), kv[0]),
    )
    for president, addresses in ranked[:authors]:
        addresses.sort(key=lambda a: (-a[0], a[1]))
        author_dir = out / "desk" / president
        author_dir.mkdir(parents=True, exist_ok=True)
        for n_words, year, text in sorted(addresses[:per_author], key=lambda a: a[1]):
            (author_dir / f"sotu_{year}.txt").write_text(text.strip() + "\n", encoding="utf-8")
            print(f"desk/{president}/sotu_{year}.txt  {n_words} words")


def build_moby(tgz, out):
    chapters = {}
    epilogue = None
    for name, text in _read_members(tgz):
        match = CHAPTER_NAME.search(name)
        if match:
            chapters[int(match.group(1))] = text
        elif name.endswith("package/data/epilogue.txt"):
            epilogue = text
    parts = [chapters[i].strip() for i in sorted(chapters)]
    if epilogue:
        parts.append(epilogue.strip())
    target = out / "reference" / "herman_melville"
    target.mkdir(parents=True, exist_ok=True)
    (target / "moby_dick.txt").write_text("\n\n".join(parts) + "\n", encoding="utf-8")
    print(f"reference/herman_melville/moby_dick.txt  {len(chapters)} chapters")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sotu", type=Path, required=True)
    parser.add_argument("--moby", type=Path, required=True)
    parser.add_argument("--out", type=Path, default=Path("corpus"))
    parser.add_argument("--min-words", type=int, default=10_000)
    parser.add_argument("--authors", type=int, default=4)
    parser.add_argument("--per-author", type=int, default=5)
    args = parser.parse_args()
    build_sotu(args.sotu, args.out, args.min_words, args.authors, args.per_author)
    build_moby(args.moby, args.out)


if __name__ == "__main__":
    main()
