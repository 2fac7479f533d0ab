"""Seeded synthetic network generators for benchmarks and tests.

Both generators are deterministic for a given seed and return the ground
truth alongside the graph, so they double as independent oracles for the
clustering and dense-region algorithms.
"""

from __future__ import annotations

import random
from typing import Sequence

from .corpus import KIND_PAPER, KIND_PATENT
from .errors import ValidationError
from .netbuild import CitationGraph


def planted_partition_graph(
    sizes: Sequence[int],
    p_in: float,
    p_out: float,
    seed: int,
    kind: str = KIND_PAPER,
) -> tuple[CitationGraph, dict[str, int]]:
    """Planted-partition benchmark: dense groups, sparse between.

    Every within-group pair becomes an edge with probability ``p_in`` and
    every cross-group pair with ``p_out``; edge orientation is a fair coin.
    Returns the graph and the planted node -> group labels.
    """
    if not sizes or min(sizes) < 1:
        raise ValidationError("sizes must be nonempty positive counts")
    rng = random.Random(seed)
    labels: dict[str, int] = {}
    nodes: list[str] = []
    for group, size in enumerate(sizes):
        for _ in range(size):
            node = f"n{len(nodes):04d}"
            nodes.append(node)
            labels[node] = group
    edges = []
    for i, a in enumerate(nodes):
        for b in nodes[i + 1 :]:
            p = p_in if labels[a] == labels[b] else p_out
            if rng.random() < p:
                edges.append((a, b) if rng.random() < 0.5 else (b, a))
    return CitationGraph(nodes=tuple(nodes), edges=tuple(edges), kind=kind), labels


def planted_clique_graph(
    n_nodes: int = 16,
    clique_size: int = 4,
    seed: int = 0,
    kind: str = KIND_PATENT,
) -> tuple[CitationGraph, tuple[str, ...]]:
    """One planted clique among sparse chains, as a dense-region benchmark.

    The non-clique nodes form short chains; each chain hooks into the
    clique or an earlier chain by a single edge, so no triangles exist
    outside the clique and clique members keep the exact K_{clique_size}
    core weight.  Returns the graph and the sorted clique members.
    """
    if clique_size < 3 or clique_size > n_nodes:
        raise ValidationError("need 3 <= clique_size <= n_nodes")
    rng = random.Random(seed)
    nodes = [f"p{i:03d}" for i in range(n_nodes)]
    clique = rng.sample(nodes, clique_size)
    rest = [v for v in nodes if v not in clique]
    rng.shuffle(rest)
    edges: list[tuple[str, str]] = []

    def link(a: str, b: str) -> None:
        edges.append((a, b) if rng.random() < 0.5 else (b, a))

    for i, a in enumerate(clique):
        for b in clique[i + 1 :]:
            link(a, b)
    attach_points = list(clique)
    position = 0
    while position < len(rest):
        length = min(rng.randint(2, 4), len(rest) - position)
        chain = rest[position : position + length]
        position += length
        link(rng.choice(attach_points), chain[0])
        for a, b in zip(chain, chain[1:]):
            link(a, b)
        attach_points.extend(chain)
    graph = CitationGraph(nodes=tuple(nodes), edges=tuple(edges), kind=kind)
    return graph, tuple(sorted(clique))
