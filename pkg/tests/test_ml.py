import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from stylofluct.ml import (
    KINDS,
    DecisionTree,
    DegenerateDatasetError,
    GaussianNaiveBayes,
    KNearestNeighbors,
    LabeledDataset,
    Standardizer,
    binomial_p_value,
    cross_validate,
    entropy,
    equal_frequency_bins,
    information_gain,
    jacobi_eigh,
    make_classifier,
    make_folds,
    pca,
    predict,
    rank_attributes,
    train,
    train_decision_tree,
    train_knn,
    train_naive_bayes,
    train_perceptron,
)


def ds(x, y, names=None):
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    return LabeledDataset(x, y, names or [f"a{i}" for i in range(x.shape[1])])


def blobs(seed=0, n=20):
    rng = np.random.default_rng(seed)
    x = np.vstack([rng.normal((0, 0), 0.5, (n, 2)), rng.normal((6, 6), 0.5, (n, 2))])
    return ds(x, ["A"] * n + ["B"] * n)


def xor(seed=0):
    rng = np.random.default_rng(seed)
    centres = [(1, 1), (-1, -1), (1, -1), (-1, 1)]
    x = np.vstack([np.array(c) + rng.normal(0, 0.3, (20, 2)) for c in centres])
    return ds(x, ["A"] * 40 + ["B"] * 40)


def accuracy(model, d):
    return float(np.mean(np.array(model.predict(d.x)) == np.array(d.y)))


# (column, labels, bin per row worked out by hand)
TOY_TABLES = [
    ([1, 1, 2, 2], "AABB", [0, 0, 1, 1]),
    ([5, 5, 5, 5, 5], "AABBB", [0, 0, 0, 0, 0]),
    ([1, 1, 2, 2, 3, 3], "ABABAA", [0, 0, 1, 1, 2, 2]),
    ([1, 2, 3, 1, 2, 3], "ABCABB", [0, 1, 2, 0, 1, 2]),
    # 12 distinct values: rank * 10 // 12
    (list(range(12)), "AAABBBCCCAAA", [0, 0, 1, 2, 3, 4, 5, 5, 6, 7, 8, 9]),
]


class TestInformationGain:
    @pytest.mark.parametrize("column,labels,bins", TOY_TABLES)
    def test_toy_tables(self, column, labels, bins):
        d = ds(column, list(labels))
        expected = oracles.entropy(list(labels)) - oracles.conditional_entropy(bins, list(labels))
        assert equal_frequency_bins(column).tolist() == bins
        assert abs(information_gain(d, 0) - expected) < 1e-12

    def test_perfect_separation(self):
        d = ds([1, 1, 2, 2], list("AABB"))
        assert information_gain(d, "a0") == pytest.approx(math.log(2), abs=1e-12)

    def test_ties_share_a_bin(self):
        bins = equal_frequency_bins([3.0] * 8 + list(range(20)))
        assert len(set(bins[:8])) == 1

    @given(st.lists(st.tuples(st.integers(0, 30), st.sampled_from("ABC")), min_size=1, max_size=60))
    def test_bounds(self, rows):
        col, labels = zip(*rows)
        g = information_gain(ds(list(col), list(labels)), 0)
        assert 0 <= g <= entropy(labels) + 1e-12

    def test_rank_informative_first_constant_last(self):
        rng = np.random.default_rng(0)
        y = ["A"] * 15 + ["B"] * 15
        x = np.column_stack([rng.normal(size=30), [0] * 15 + [1] * 15, np.ones(30)])
        ranking = rank_attributes(LabeledDataset(x, y, ["noise", "signal", "const"]))
        assert ranking[0][0] == "signal" and ranking[-1] == ("const", 0.0)

    def test_rank_ties_lexicographic(self):
        x = np.array([[1, 1], [1, 1], [2, 2], [2, 2]])
        assert [n for n, _ in rank_attributes(LabeledDataset(x, list("AABB"), ["zeta", "alpha"]))] == ["alpha", "zeta"]


class TestClassifiers:
    @pytest.mark.parametrize("kind", KINDS)
    def test_separable_blobs(self, kind):
        d = blobs()
        assert accuracy(train(kind, d, seed=0), d) == 1.0

    def test_xor_tree_perfect(self):
        for seed in range(10):
            d = xor(seed)
            assert accuracy(train_decision_tree(d), d) == 1.0

    def test_xor_perceptron_linear_limit(self):
        accs = [accuracy(train_perceptron(xor(seed)), xor(seed)) for seed in range(10)]
        # no linear rule beats 3 of the 4 XOR clusters
        assert max(accs) <= 0.75
        assert np.median(accs) <= 0.6

    def test_tree_toy_threshold(self):
        d = ds([[1, 7], [1, 3], [2, 7], [2, 3]], list("AABB"))
        tree = train_decision_tree(d)
        assert tree.root_.attribute == 0 and 1 < tree.root_.threshold < 2

    def test_tree_walk_matches_prediction(self):
        d = xor(1)
        tree = train_decision_tree(d)
        for row in d.x[:10]:
            node = tree.root_
            while not node.is_leaf:
                node = node.yes if row[node.attribute] >= node.threshold else node.no
            assert predict(tree, row) == node.label
        assert "YES:" in tree.describe(["x", "y"])

    def test_knn_returns_training_label(self):
        d = xor(2)
        model = train_knn(d)
        assert all(predict(model, row) == lab for row, lab in zip(d.x, d.y))

    def test_knn_vote_tie_uses_distance(self):
        model = KNearestNeighbors(k=2).fit([[0.0], [3.0]], ["B", "A"])
        assert model.predict_one([1.0]) == "B"
        assert model.predict_one([2.0]) == "A"

    def test_bayes_midpoint_tie_goes_to_first_class(self):
        model = train_naive_bayes(ds([0, 2, 4, 6], list("BBAA")))
        assert model.predict_one([3.0]) == "A"

    def test_bayes_analytic_boundary(self):
        model = GaussianNaiveBayes().fit([[0.0], [2.0], [4.0], [6.0]], list("AABB"))
        lo, hi = 1.0, 5.0
        for _ in range(80):
            mid = (lo + hi) / 2
            lp = model.log_posterior([[mid]])[0]
            lo, hi = (mid, hi) if lp[0] > lp[1] else (lo, mid)
        assert abs(lo - 3.0) < 1e-6

    def test_bayes_singleton_class_uses_pooled_variance(self):
        model = GaussianNaiveBayes().fit([[0.0], [2.0], [10.0]], list("AAB"))
        assert model.var_[1, 0] == pytest.approx(model.var_[0, 0])
        with pytest.raises(DegenerateDatasetError):
            GaussianNaiveBayes().fit([[0.0], [1.0]], list("AB"))

    @pytest.mark.parametrize("kind", KINDS)
    def test_single_class_rejected(self, kind):
        with pytest.raises(DegenerateDatasetError):
            make_classifier(kind).fit([[0.0], [1.0]], ["A", "A"])

    @pytest.mark.parametrize("kind", KINDS)
    def test_arity_mismatch(self, kind):
        model = train(kind, blobs())
        with pytest.raises(ValueError):
            model.predict([[1.0, 2.0, 3.0]])

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            make_classifier("svm")

    @pytest.mark.parametrize("kind", ["knn", "perceptron"])
    def test_affine_invariance(self, kind):
        d = xor(3)
        scaled = LabeledDataset(d.x * np.array([3.0, 0.01]) + np.array([-5.0, 40.0]), d.y, d.attribute_names)
        rng = np.random.default_rng(9)
        probe = rng.normal(size=(30, 2))
        a = train(kind, d, seed=4).predict(probe)
        b = train(kind, scaled, seed=4).predict(probe * np.array([3.0, 0.01]) + np.array([-5.0, 40.0]))
        assert a == b

    def test_perceptron_deterministic(self):
        d = xor(0)
        assert np.array_equal(train_perceptron(d, seed=3).weights_, train_perceptron(d, seed=3).weights_)

    def test_standardizer_constant_column(self):
        z = Standardizer().fit_transform(np.array([[1.0, 5.0], [3.0, 5.0]]))
        assert z[:, 1].tolist() == [0.0, 0.0]

    def test_tree_depth_limit(self):
        assert DecisionTree(max_depth=1).fit(xor(0).x, xor(0).y).root_.depth() <= 1


class TestCrossValidation:
    def test_folds_partition(self):
        labels = ["A"] * 20 + ["B"] * 13
        folds = make_folds(labels, 10, 0)
        assert sorted(np.concatenate(folds).tolist()) == list(range(33))
        sizes = [len(f) for f in folds]
        assert max(sizes) - min(sizes) <= 1

    def test_fallback_warns(self, caplog):
        with caplog.at_level("WARNING"):
            make_folds(["A"] * 8 + ["B"] * 3, 5, 0)
        assert "unstratified" in caplog.text

    def test_too_many_folds(self):
        with pytest.raises(ValueError):
            cross_validate(blobs(n=2), "knn", folds=10)

    def test_separable_is_perfect(self):
        for kind in KINDS:
            assert cross_validate(blobs(), kind, 10, seed=0).mean_accuracy == 1.0

    def test_noise_is_chance(self):
        rng = np.random.default_rng(0)
        y = [f"c{i % 8}" for i in range(400)]
        r = cross_validate(LabeledDataset(rng.normal(size=(400, 5)), y, list("abcde")), "naiveBayes", 10, seed=0)
        # three binomial standard deviations around 1/8
        assert abs(r.mean_accuracy - 0.125) < 3 * math.sqrt(0.125 * 0.875 / 400)

    def test_report_invariants(self):
        d = xor(4)  # 80 rows, 10 folds of 8
        r = cross_validate(d, "decisionTree", 10, seed=2)
        counts = np.array(r.confusion)
        assert counts.sum(axis=1).tolist() == [40, 40]
        assert np.trace(counts) / counts.sum() == pytest.approx(r.mean_accuracy, abs=1e-15)
        assert len(r.fold_accuracies) == 10
        assert set(r.to_json_dict()) >= {"modelKind", "foldAccuracies", "meanAccuracy", "pValue", "confusion", "seed"}

    @pytest.mark.parametrize("kind", KINDS)
    def test_deterministic(self, kind):
        d = xor(5)
        assert cross_validate(d, kind, 10, seed=7) == cross_validate(d, kind, 10, seed=7)


class TestBinomial:
    def test_all_correct(self):
        assert binomial_p_value(10, 10, 0.5) == pytest.approx(2**-10, rel=1e-12)

    def test_zero_correct(self):
        assert binomial_p_value(0, 10, 0.25) == 1.0

    def test_high_precision_oracle(self):
        p = binomial_p_value(18, 40, 0.125)
        assert p < 1e-6
        assert p == pytest.approx(oracles.binomial_tail(18, 40, 0.125), rel=1e-10)

    @settings(max_examples=50)
    @given(st.integers(1, 300).flatmap(lambda n: st.tuples(st.integers(0, n), st.just(n))), st.floats(0.01, 0.99))
    def test_against_oracle(self, ct, chance):
        correct, total = ct
        assert binomial_p_value(correct, total, chance) == pytest.approx(
            oracles.binomial_tail(correct, total, chance), rel=1e-9, abs=1e-300
        )

    def test_invalid(self):
        with pytest.raises(ValueError):
            binomial_p_value(5, 4, 0.5)


class TestPca:
    def test_line(self):
        t = np.linspace(0, 1, 50)
        r = pca(np.column_stack([t, 2 * t + 1]))
        assert r.explained_variance_ratio[0] >= 0.999

    def test_isotropic(self):
        x = np.random.default_rng(0).normal(size=(4000, 2))
        r = pca(x)
        assert r.explained_variance_ratio == pytest.approx([0.5, 0.5], abs=0.03)

    def test_residuals_and_sign(self):
        x = np.random.default_rng(1).normal(size=(40, 6)) @ np.random.default_rng(2).normal(size=(6, 6))
        r = pca(x)
        values, vectors = jacobi_eigh(r.covariance)
        for lam, v in zip(values, vectors.T):
            assert np.linalg.norm(r.covariance @ v - lam * v) < 1e-8
        for j in range(r.components.shape[1]):
            col = r.components[:, j]
            assert col[np.argmax(np.abs(col))] > 0
        assert sorted(values, reverse=True) == pytest.approx(np.linalg.eigvalsh(r.covariance)[::-1])

    def test_jacobi_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            jacobi_eigh(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_errors(self):
        with pytest.raises(ValueError):
            pca(np.ones((1, 3)))
        with pytest.raises(ValueError):
            pca(np.ones((5, 3)))
        with pytest.raises(ValueError):
            pca(np.ones((5, 1)))
