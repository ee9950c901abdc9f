"""Per-window network measurement series and their low-order Fourier magnitudes."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .network import accessibility, betweenness, build_network, clustering, shortest_paths
from .text import TextTooShortError, TokenStream, window_split

MEASUREMENTS = (
    "M",
    "meanClustering",
    "meanPathLen",
    "meanBetweenness",
    "meanAccess2",
    "meanAccess3",
)
N_COMPONENTS = 4


class SeriesTooShortError(ValueError):
    pass


@dataclass(frozen=True)
class MetricSeries:
    name: str
    values: np.ndarray
    w: int = 0

    @property
    def p(self) -> int:
        return len(self.values)


def window_measurements(tokens: Sequence[str]) -> dict[str, float]:
    """All six measurements for the network of one window."""
    net = build_network(tokens, d=1)
    path = shortest_paths(net)
    return {
        "M": float(net.m),
        "meanClustering": float(clustering(net).mean()),
        "meanPathLen": path.mean,
        "meanBetweenness": float(betweenness(net).mean()),
        "meanAccess2": float(accessibility(net, 2).mean()),
        "meanAccess3": float(accessibility(net, 3).mean()),
    }


def _single_measurement(tokens: Sequence[str], name: str) -> float:
    net = build_network(tokens, d=1)
    if name == "M":
        return float(net.m)
    if name == "meanClustering":
        return float(clustering(net).mean())
    if name == "meanPathLen":
        return shortest_paths(net).mean
    if name == "meanBetweenness":
        return float(betweenness(net).mean())
    if name == "meanAccess2":
        return float(accessibility(net, 2).mean())
    if name == "meanAccess3":
        return float(accessibility(net, 3).mean())
    raise KeyError(f"unknown measurement {name!r}; expected one of {MEASUREMENTS}")


def metric_series(windows: Sequence[TokenStream | Sequence[str]], name: str) -> MetricSeries:
    if not windows:
        raise ValueError("need at least one window")
    values = np.array([_single_measurement(list(win), name) for win in windows])
    return MetricSeries(name, values, len(windows[0]))


def all_metric_series(windows: Sequence[TokenStream | Sequence[str]]) -> dict[str, MetricSeries]:
    """Every measurement series at once, building each window's network a single time."""
    if not windows:
        raise ValueError("need at least one window")
    rows = [window_measurements(list(win)) for win in windows]
    w = len(windows[0])
    return {
        name: MetricSeries(name, np.array([r[name] for r in rows]), w) for name in MEASUREMENTS
    }


def dft(values: Sequence[float] | MetricSeries) -> np.ndarray:
    """Direct evaluation of F_j = sum_k x_k exp(-2 pi i j k / P)."""
    x = np.asarray(values.values if isinstance(values, MetricSeries) else values, dtype=float)
    p = len(x)
    if p == 0:
        raise ValueError("empty series")
    jk = np.outer(np.arange(p), np.arange(p))
    return np.exp(-2j * np.pi * jk / p) @ x


def feature_names(measurements: Sequence[str] = MEASUREMENTS, n: int = N_COMPONENTS) -> list[str]:
    return [f"F({name})_{j}" for name in measurements for j in range(n)]


def spectral_features(series: MetricSeries, book: str = "", n: int = N_COMPONENTS) -> np.ndarray:
    """Magnitudes of the first ``n`` DFT components."""
    if series.p < n:
        raise SeriesTooShortError(
            f"{book or 'book'}: only {series.p} windows of W={series.w}; need at least {n}"
        )
    return np.abs(dft(series)[:n])


def book_spectral_features(
    stream: TokenStream | Sequence[str], w: int, book: str = ""
) -> np.ndarray:
    """24-entry feature vector (measurement-major, component-minor) for one book."""
    if not isinstance(stream, TokenStream):
        stream = TokenStream(tuple(stream), book, len(stream))
    book = book or stream.source_id
    if len(stream) < N_COMPONENTS * w:
        raise SeriesTooShortError(
            f"{book or 'book'}: {len(stream)} tokens gives fewer than {N_COMPONENTS} windows of W={w}"
        )
    try:
        windows = window_split(stream, w)
    except TextTooShortError as exc:
        raise SeriesTooShortError(str(exc)) from exc
    series = all_metric_series(windows)
    return np.concatenate([spectral_features(series[name], book) for name in MEASUREMENTS])
