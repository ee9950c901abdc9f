"""Authorship attribution from stylistic fluctuations: co-occurrence network
time series, word intermittency, and from-scratch classifiers."""

__version__ = "0.1.0"
