"""Word co-occurrence networks and their topological measurements.

Windows hold at most a few thousand tokens, so node counts stay in the
hundreds: all-source BFS, Brandes dependency accumulation and random-walk
powers keep one dense row per source and advance every source together with
a sparse adjacency product.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix, diags


@dataclass(frozen=True)
class CoocNetwork:
    nodes: tuple[str, ...]
    edges: frozenset[tuple[int, int]]  # (i, j) with i < j

    @property
    def m(self) -> int:
        return len(self.nodes)

    @cached_property
    def index(self) -> dict[str, int]:
        return {w: i for i, w in enumerate(self.nodes)}

    @cached_property
    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.m, self.m))
        if self.edges:
            i, j = np.array(sorted(self.edges)).T
            a[i, j] = a[j, i] = 1.0
        a.setflags(write=False)
        return a

    @cached_property
    def sparse_adjacency(self) -> csr_matrix:
        if not self.edges:
            return csr_matrix((self.m, self.m))
        i, j = np.array(sorted(self.edges)).T
        rows, cols = np.concatenate([i, j]), np.concatenate([j, i])
        return csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(self.m, self.m))

    @cached_property
    def degree(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def has_edge(self, u: str, v: str) -> bool:
        i, j = self.index[u], self.index[v]
        return (min(i, j), max(i, j)) in self.edges

    def edge_words(self) -> list[tuple[str, str]]:
        """Edges as word pairs, each pair and the list sorted lexicographically."""
        pairs = (tuple(sorted((self.nodes[i], self.nodes[j]))) for i, j in self.edges)
        return sorted(pairs)

    def to_edgelist(self) -> str:
        return "".join(f"{u}\t{v}\n" for u, v in self.edge_words())

    @classmethod
    def from_edges(cls, nodes: Sequence[str], edges: Iterable[tuple[str, str]]) -> "CoocNetwork":
        idx = {w: i for i, w in enumerate(nodes)}
        es = set()
        for u, v in edges:
            i, j = idx[u], idx[v]
            if i != j:
                es.add((min(i, j), max(i, j)))
        return cls(tuple(nodes), frozenset(es))


def build_network(tokens: Sequence[str], d: int = 1) -> CoocNetwork:
    """Connect every pair of tokens at most ``d`` positions apart.

    Nodes are numbered in order of first appearance. Equal tokens never link,
    so the graph is simple.
    """
    tokens = list(tokens)
    if not tokens:
        raise ValueError("cannot build a network from an empty token stream")
    if d < 1:
        raise ValueError(f"d must be a positive integer, got {d}")
    index: dict[str, int] = {}
    ids = [index.setdefault(t, len(index)) for t in tokens]
    edges = set()
    for offset in range(1, d + 1):
        for a, b in zip(ids, ids[offset:]):
            if a != b:
                edges.add((a, b) if a < b else (b, a))
    return CoocNetwork(tuple(index), frozenset(edges))


def vocab_size(net: CoocNetwork) -> int:
    return net.m


def clustering(net: CoocNetwork) -> np.ndarray:
    """Local clustering coefficient; 0 for nodes of degree < 2."""
    a = net.adjacency
    k = net.degree
    links_among_neighbours = ((a @ a) * a).sum(axis=1) / 2.0
    out = np.zeros(net.m)
    ok = k >= 2
    out[ok] = 2.0 * links_among_neighbours[ok] / (k[ok] * (k[ok] - 1.0))
    return out


@dataclass(frozen=True)
class PathStats:
    distances: np.ndarray       # hop counts, inf when unreachable
    per_node: np.ndarray        # mean distance to reachable nodes, 0 when isolated
    isolated: np.ndarray        # bool flag for nodes with no reachable partner
    mean: float                 # mean over reachable ordered pairs
    reachable_fraction: float   # reachable ordered pairs / M(M-1)


def _bfs_all_sources(net: CoocNetwork) -> tuple[np.ndarray, np.ndarray]:
    """Hop distances (-1 when unreachable) and shortest-path counts from every source.

    Row ``s`` is the BFS from node ``s``; each level advances all sources at
    once with one sparse product.
    """
    m = net.m
    a = net.sparse_adjacency
    level = np.full((m, m), -1, dtype=np.int64)
    np.fill_diagonal(level, 0)
    sigma = np.eye(m)
    frontier = sigma.copy()
    h = 0
    while True:
        h += 1
        reached = _right_mul(frontier, a)
        new = (reached > 0) & (level < 0)
        if not new.any():
            break
        level[new] = h
        frontier = np.where(new, reached, 0.0)
        sigma += frontier
    return level, sigma


def _right_mul(x: np.ndarray, sym: csr_matrix) -> np.ndarray:
    # x @ sym for a symmetric sparse matrix, kept in sparse-times-dense form
    return np.asarray(sym @ x.T).T


def distance_matrix(net: CoocNetwork) -> np.ndarray:
    level, _ = _bfs_all_sources(net)
    return np.where(level >= 0, level, np.inf).astype(float)


def shortest_paths(net: CoocNetwork) -> PathStats:
    dist = distance_matrix(net)
    m = net.m
    finite = np.isfinite(dist)
    np.fill_diagonal(finite, False)
    counts = finite.sum(axis=1)
    sums = np.where(finite, dist, 0.0).sum(axis=1)
    isolated = counts == 0
    per_node = np.divide(sums, counts, out=np.zeros(m), where=~isolated)
    total_pairs = counts.sum()
    mean = float(sums.sum() / total_pairs) if total_pairs else 0.0
    frac = float(total_pairs / (m * (m - 1))) if m > 1 else 0.0
    return PathStats(dist, per_node, isolated, mean, frac)


def betweenness(net: CoocNetwork) -> np.ndarray:
    """Shortest-path betweenness over unordered source/target pairs (raw counts).

    Brandes' dependency accumulation for all sources simultaneously: row ``s``
    of ``sigma`` and ``delta`` holds the path counts and dependencies of
    source ``s``, walked back level by level from the deepest BFS layer.
    """
    m = net.m
    if m < 3 or not net.edges:
        return np.zeros(m)
    a = net.sparse_adjacency
    level, sigma = _bfs_all_sources(net)
    delta = np.zeros((m, m))
    below = level == level.max()
    for h in range(int(level.max()), 0, -1):
        above = level == h - 1
        coeff = np.divide(1.0 + delta, sigma, out=np.zeros_like(delta), where=below)
        delta += sigma * _right_mul(coeff, a) * above
        below = above
    np.fill_diagonal(delta, 0.0)
    return delta.sum(axis=0) / 2.0


def transition_power(net: CoocNetwork, h: int) -> np.ndarray:
    """h-step random-walk probabilities; isolated nodes keep all mass on themselves."""
    k = net.degree
    inv = np.divide(1.0, k, out=np.zeros_like(k), where=k > 0)
    step = diags(inv) @ net.sparse_adjacency
    isolated = np.flatnonzero(k == 0)
    step = (step + csr_matrix((np.ones(len(isolated)), (isolated, isolated)), shape=step.shape)).tocsr()
    p = np.eye(net.m)
    for _ in range(h):
        p = np.asarray((step.T @ p.T).T)
    return p


def accessibility(net: CoocNetwork, h: int = 2) -> np.ndarray:
    """exp of the entropy of each node's h-step walk distribution."""
    if h < 1:
        raise ValueError(f"h must be >= 1, got {h}")
    p = transition_power(net, h)
    with np.errstate(divide="ignore", invalid="ignore"):
        plogp = np.where(p > 0, p * np.log(p), 0.0)
    return np.exp(-plogp.sum(axis=1))


@dataclass(frozen=True)
class NodeMetrics:
    degree: np.ndarray
    clustering: np.ndarray
    path: PathStats
    betweenness: np.ndarray
    access2: np.ndarray
    access3: np.ndarray


def node_metrics(net: CoocNetwork) -> NodeMetrics:
    path = shortest_paths(net)
    return NodeMetrics(
        degree=net.degree.copy(),
        clustering=clustering(net),
        path=path,
        betweenness=betweenness(net),
        access2=accessibility(net, 2),
        access3=accessibility(net, 3),
    )
