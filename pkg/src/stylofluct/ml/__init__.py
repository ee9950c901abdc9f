from .classifiers import (
    KINDS,
    DecisionTree,
    DegenerateDatasetError,
    GaussianNaiveBayes,
    KNearestNeighbors,
    Perceptron,
    make_classifier,
    predict,
    train,
    train_decision_tree,
    train_knn,
    train_naive_bayes,
    train_perceptron,
)
from .dataset import LabeledDataset, Standardizer
from .infogain import entropy, equal_frequency_bins, information_gain, rank_attributes
from .pca import PCAResult, jacobi_eigh, pca
from .validation import CVReport, binomial_p_value, cross_validate, make_folds

__all__ = [
    "KINDS",
    "CVReport",
    "DecisionTree",
    "DegenerateDatasetError",
    "GaussianNaiveBayes",
    "KNearestNeighbors",
    "LabeledDataset",
    "PCAResult",
    "Perceptron",
    "Standardizer",
    "binomial_p_value",
    "cross_validate",
    "entropy",
    "equal_frequency_bins",
    "information_gain",
    "jacobi_eigh",
    "make_classifier",
    "make_folds",
    "pca",
    "predict",
    "rank_attributes",
    "train",
    "train_decision_tree",
    "train_knn",
    "train_naive_bayes",
    "train_perceptron",
]
