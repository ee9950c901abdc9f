import json
import xml.etree.ElementTree as ET

import pytest
from conftest import DESK

from stylofluct.cli import main
from stylofluct.config import ConfigError, RunConfig
from stylofluct.io import read_feature_csv


@pytest.fixture(scope="module")
def small_corpus(tmp_path_factory):
    """Three truncated books for each desk author."""
    root = tmp_path_factory.mktemp("corpus")
    for author in sorted(p for p in DESK.iterdir() if p.is_dir()):
        (root / author.name).mkdir()
        for book in sorted(author.iterdir())[:3]:
            words = book.read_text(encoding="utf-8").split()[:5000]
            (root / author.name / book.name).write_text(" ".join(words), encoding="utf-8")
    return root


def run_all(corpus, out, *extra):
    common = ["--corpus-root", str(corpus), "--output-dir", str(out), "--window-sizes", "300,600",
              "--cv-folds", "4", "--function-words", "30", *extra]
    assert main(["ingest", *common]) == 0
    assert main(["spectral", *common]) == 0
    assert main(["intermit", *common]) == 0
    for features in ("spectral_W300.csv", "intermittency.csv"):
        path = str(out / features)
        assert main(["classify", path, *common]) == 0
        assert main(["rank", path, *common]) == 0
        assert main(["pca", path, "--top", "5", *common]) == 0
    book = next(p for p in sorted(corpus.rglob("*.txt")))
    assert main(["keywords", str(book), *common]) == 0
    return {p.name: p.read_bytes() for p in sorted(out.iterdir())}


@pytest.fixture(scope="module")
def outputs(small_corpus, tmp_path_factory):
    first = run_all(small_corpus, tmp_path_factory.mktemp("out1"))
    second = run_all(small_corpus, tmp_path_factory.mktemp("out2"), "--workers", "2")
    return first, second


def test_double_run_byte_identical(outputs):
    first, second = outputs
    assert first.keys() == second.keys()
    assert [name for name in first if first[name] != second[name]] == []


def test_every_artifact_stamped(outputs):
    cfg_hash = json.loads(outputs[0]["manifest.json"])["config"]
    for name, data in outputs[0].items():
        text = data.decode("utf-8")
        assert f"config={cfg_hash}" in text or f'"config": "{cfg_hash}"' in text, name
        assert "seed=1" in text or '"seed": 1' in text, name


def test_manifest_contents(outputs, small_corpus):
    manifest = json.loads(outputs[0]["manifest.json"])
    assert [a["author"] for a in manifest["authors"]] == sorted(p.name for p in small_corpus.iterdir())
    for entry in manifest["authors"]:
        assert len(entry["books"]) == 3
        for b in entry["books"]:
            assert 0 < b["filteredTokens"] < b["rawTokens"]


def test_spectral_accounting(outputs):
    manifest = json.loads(outputs[0]["manifest.json"])
    n_books = sum(len(a["books"]) for a in manifest["authors"])
    summary = json.loads(outputs[0]["spectral_summary.json"])
    for window in summary["windows"]:
        assert len(window["included"]) + len(window["excluded"]) == n_books
    w600 = next(w for w in summary["windows"] if w["W"] == 600)
    assert w600["excluded"] and "fewer than 4 windows" in w600["excluded"][0]["reason"]


def test_feature_csv_shapes(outputs, tmp_path):
    path = tmp_path / "s.csv"
    path.write_bytes(outputs[0]["spectral_W300.csv"])
    d = read_feature_csv(path)
    assert d.x.shape[1] == 24
    path.write_bytes(outputs[0]["intermittency.csv"])
    d = read_feature_csv(path)
    assert d.x.shape[1] == 30 and all(n.startswith("I_") for n in d.attribute_names)


def test_classify_report(outputs):
    report = json.loads(outputs[0]["classify_intermittency.json"])
    assert [r["modelKind"] for r in report["reports"]] == ["knn", "naiveBayes", "decisionTree", "perceptron"]
    assert report["best"]["meanAccuracy"] == max(r["meanAccuracy"] for r in report["reports"])
    assert outputs[0]["classify_intermittency.txt"].decode().rstrip().splitlines()[-1].startswith("best classifier:")


def test_pca_outputs(outputs):
    ET.fromstring(outputs[0]["pca_intermittency.svg"])
    meta = json.loads(outputs[0]["pca_intermittency.json"])
    assert len(meta["attributes"]) == 5 and len(meta["explainedVarianceRatio"]) == 2
    lines = outputs[0]["pca_intermittency.csv"].decode().splitlines()
    assert lines[1] == "book,author,pc1,pc2" and len(lines) == 2 + 12


def test_rank_seed_free(outputs, tmp_path):
    src = tmp_path / "i.csv"
    src.write_bytes(outputs[0]["intermittency.csv"])
    out = tmp_path / "o"
    assert main(["rank", str(src), "--output-dir", str(out), "--seed", "99"]) == 0
    body = (out / "rank_i.csv").read_text().splitlines()[1:]
    assert body == outputs[0]["rank_intermittency.csv"].decode().splitlines()[1:]


class TestErrors:
    def test_usage_errors_exit_1(self, capsys):
        assert_exit(["frobnicate"], 1)
        assert_exit(["classify"], 1)
        assert_exit(["ingest", "--window-sizes", "a,b"], 1)
        assert_exit(["ingest", "--classifiers", "svm"], 1)

    def test_missing_manifest_exit_2(self, small_corpus, tmp_path):
        assert main(["spectral", "--corpus-root", str(small_corpus), "--output-dir", str(tmp_path)]) == 2

    def test_bad_corpus_root_exit_2(self, tmp_path):
        assert main(["ingest", "--corpus-root", str(tmp_path / "nope"), "--output-dir", str(tmp_path)]) == 2

    def test_malformed_csv_positional(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("# stylofluct\nbook,author,x,y\na/1,a,1.0,2.0\na/2,a,1.0,oops\n", encoding="utf-8")
        assert main(["classify", str(bad), "--output-dir", str(tmp_path)]) == 2
        assert f"{bad}:4: column 4 (y)" in capsys.readouterr().err

    def test_ragged_csv(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("book,author,x\na/1,a,1.0,2.0\n", encoding="utf-8")
        assert main(["rank", str(bad), "--output-dir", str(tmp_path)]) == 2
        assert ":2: expected 3 fields" in capsys.readouterr().err

    def test_too_few_rows(self, tmp_path):
        csv = tmp_path / "f.csv"
        csv.write_text("book,author,x\na/1,a,1\nb/1,b,2\n", encoding="utf-8")
        assert main(["classify", str(csv), "--output-dir", str(tmp_path)]) == 2

    def test_config_file(self, tmp_path, small_corpus):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"corpusRoot": str(small_corpus), "bogus": 1}), encoding="utf-8")
        assert main(["ingest", "--config", str(cfg), "--output-dir", str(tmp_path)]) == 2
        cfg.write_text(json.dumps({"corpusRoot": str(small_corpus), "seed": 5}), encoding="utf-8")
        assert main(["ingest", "--config", str(cfg), "--output-dir", str(tmp_path)]) == 0
        assert json.loads((tmp_path / "manifest.json").read_text())["seed"] == 5


def assert_exit(argv, code):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == code


def test_ingest_warnings_and_errors(tmp_path):
    root = tmp_path / "c"
    (root / "empty_author").mkdir(parents=True)
    (root / "a").mkdir()
    (root / "a" / "ok.txt").write_text("some words here", encoding="utf-8")
    (root / "a" / "bad.txt").write_bytes(b"\xff\xfe\xfa not utf8")
    assert main(["ingest", "--corpus-root", str(root), "--output-dir", str(tmp_path / "o")]) == 0
    manifest = json.loads((tmp_path / "o" / "manifest.json").read_text())
    authors = {a["author"]: a["books"] for a in manifest["authors"]}
    assert authors["empty_author"] == []
    assert [b["book"] for b in authors["a"]] == ["a/ok"]
    assert manifest["errors"][0]["book"] == "a/bad"
    assert any("empty_author" in w for w in manifest["warnings"])


class TestConfig:
    def test_defaults(self, small_corpus):
        cfg = RunConfig.load(corpusRoot=str(small_corpus))
        assert cfg.windowSizes == [500, 700, 900, 1100, 1300]
        assert cfg.functionWordCount == 100 and cfg.cvFolds == 10

    def test_hash_ignores_execution_keys(self, small_corpus):
        a = RunConfig.load(corpusRoot=str(small_corpus))
        b = RunConfig.load(corpusRoot=str(small_corpus), workers=3, outputDir="elsewhere")
        c = RunConfig.load(corpusRoot=str(small_corpus), seed=2)
        assert a.config_hash() == b.config_hash() != c.config_hash()

    @pytest.mark.parametrize("override", [{"windowSizes": [1]}, {"cvFolds": 1}, {"classifierKinds": ["svm"]},
                                          {"stopwordFile": "/no/such/file"}, {"workers": 0}])
    def test_invalid(self, small_corpus, override):
        with pytest.raises(ConfigError):
            RunConfig.load(corpusRoot=str(small_corpus), **override)
