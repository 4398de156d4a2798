"""Small graph builders and seeded corpora shared by the test modules."""
from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Tuple

import numpy as np

from src.core.multigraph import Dimension, Multigraph

D2 = Dimension(2)
D3 = Dimension(3)


def graph(n: int, pairs: Iterable[Tuple[int, int]]) -> Multigraph:
    return Multigraph.from_pairs(n, list(pairs))


def cycle(n: int) -> Multigraph:
    return graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Multigraph:
    return graph(n, [(i, i + 1) for i in range(n - 1)])


def complete(n: int) -> Multigraph:
    return graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def double_edge() -> Multigraph:
    return graph(2, [(0, 1), (0, 1)])


def k23() -> Multigraph:
    """K_{2,3}: hubs 0 and 1, degree-2 vertices 2, 3, 4."""
    return graph(5, [(0, 2), (1, 2), (0, 3), (1, 3), (0, 4), (1, 4)])


def bowtie() -> Multigraph:
    """Two triangles sharing vertex 0."""
    return graph(5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)])


def theta(lengths: Tuple[int, int, int]) -> Multigraph:
    """Hubs 0 and 1 joined by three internally disjoint paths with the given edge counts."""
    pairs, nxt = [], 2
    for length in lengths:
        previous = 0
        for _ in range(length - 1):
            pairs.append((previous, nxt))
            previous, nxt = nxt, nxt + 1
        pairs.append((previous, 1))
    return graph(nxt, pairs)


def multigraph_corpus(max_vertices: int = 4, max_edges: int = 6) -> Iterator[Multigraph]:
    """Every connected multigraph on 2..max_vertices labelled vertices with at most max_edges edges."""
    for n in range(2, max_vertices + 1):
        pairs = list(itertools.combinations(range(n), 2))
        for m in range(n - 1, max_edges + 1):
            for chosen in itertools.combinations_with_replacement(pairs, m):
                g = graph(n, chosen)
                if g.is_connected():
                    yield g


def random_multigraphs(count: int, seed: int, max_vertices: int = 5, max_edges: int = 8,
                       connected: bool = True) -> Iterator[Multigraph]:
    draw = np.random.default_rng(seed)
    produced = 0
    while produced < count:
        n = int(draw.integers(2, max_vertices + 1))
        m = int(draw.integers(n - 1, max(n, max_edges + 1)))
        pairs = []
        while len(pairs) < m:
            u, v = (int(x) for x in draw.integers(0, n, size=2))
            if u != v:
                pairs.append((u, v))
        g = graph(n, pairs)
        if connected and not g.is_connected():
            continue
        produced += 1
        yield g


def random_simple_graphs(count: int, seed: int, max_vertices: int = 7, min_degree: int = 2) -> Iterator[Multigraph]:
    draw = np.random.default_rng(seed)
    produced = 0
    while produced < count:
        n = int(draw.integers(3, max_vertices + 1))
        pairs = [p for p in itertools.combinations(range(n), 2) if draw.random() < 0.5]
        g = graph(n, pairs)
        if g.min_degree() < min_degree:
            continue
        produced += 1
        yield g
