"""Regenerate the bundled English stopword list and lemma dictionary.

Stopwords come from scikit-learn's ``ENGLISH_STOP_WORDS`` (BSD-3); lemmas from
the ``en_lemma_lookup`` table of spacy-lookups-data (MIT):

    pip download --no-deps --no-binary :all: spacy-lookups-data==1.0.5
    python scripts/build_lexicons.py --spacy-sdist spacy_lookups_data-1.0.5.tar.gz

Lemma entries are kept only when both sides are valid tokens, keys are
lowercased, and chains (a -> b -> c) are collapsed so every canonical form is a
fixed point of the mapping.
"""
import argparse
import gzip
import json
import re
import tarfile
from pathlib import Path

TOKEN = re.compile(r"^[a-z]+(?:'[a-z]+)*$")
DATA = Path(__file__).resolve().parents[1] / "src" / "stylofluct" / "data"


def write_stopwords(path):
    from sklearn.feature_extraction.text import ENGLISH_STOP_WORDS

    lines = ["# English stopwords (scikit-learn ENGLISH_STOP_WORDS, BSD-3-Clause)"]
    lines += sorted(ENGLISH_STOP_WORDS)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_spacy_lookup(sdist):
    with tarfile.open(sdist) as tar:
        member = next(m for m in tar.getmembers() if m.name.endswith("data/en_lemma_lookup.json.gz"))
        return json.loads(gzip.decompress(tar.extractfile(member).read()))


def clean_lemmas(raw):
    table = {}
    # lowercase keys first so they win over capitalised duplicates
    for key, value in sorted(raw.items(), key=lambda kv: (kv[0] != kv[0].lower(), kv[0])):
        key, value = key.lower(), value.lower()
        if key == value or key in table or not (TOKEN.match(key) and TOKEN.match(value)):
            continue
        table[key] = value
    resolved = {}
    for key, value in table.items():
        seen = {key}
        while value in table and value not in seen:
            seen.add(value)
            value = table[value]
        if value in table or value == key:
            continue  # cycle
        resolved[key] = value
    return resolved


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--spacy-sdist", type=Path, required=True)
    args = parser.parse_args()
    write_stopwords(DATA / "stopwords_en.txt")
    lemmas = clean_lemmas(load_spacy_lookup(args.spacy_sdist))
    with open(DATA / "lemmas_en.tsv", "w", encoding="utf-8") as fh:
        for key in sorted(lemmas):
            fh.write(f"{key}\t{lemmas[key]}\n")
    print(f"{len(lemmas)} lemma entries")


if __name__ == "__main__":
    main()
