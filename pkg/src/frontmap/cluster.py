"""Modularity clustering of citation networks and cluster-level aggregation.

Modularity is computed on the symmetrized graph: each directed edge counts
as one undirected edge and mutual citations collapse to a single edge, so
the within-cluster fractions are fractions of distinct undirected edges.
Direction is preserved for aggregation (knowledge flows citing -> cited).

The greedy clusterer is an agglomerative merge of the connected cluster
pair with the largest modularity gain, with fully specified tie rules so
identical inputs always produce identical partitions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Mapping

from .errors import ValidationError
from .netbuild import CitationGraph


@dataclass(frozen=True)
class Partition:
    """A node -> cluster assignment with its modularity score.

    Cluster indices are contiguous from 0 and renumbered by size descending
    (ties by smallest member id), so cluster 0 is always the largest.
    """

    assignment: Mapping[str, int]
    q: float

    @classmethod
    def from_assignment(
        cls, graph: CitationGraph, assignment: Mapping[str, int]
    ) -> "Partition":
        """Canonicalize an arbitrary assignment and score it."""
        members: dict[int, list[str]] = {}
        for node in graph.nodes:
            if node not in assignment:
                raise ValidationError(f"assignment does not cover node {node!r}")
            members.setdefault(assignment[node], []).append(node)
        order = sorted(members.values(), key=lambda m: (-len(m), min(m)))
        renumbered = {
            node: index for index, group in enumerate(order) for node in group
        }
        return cls(assignment=renumbered, q=modularity(graph, renumbered))

    @cached_property
    def clusters(self) -> tuple[tuple[str, ...], ...]:
        """Member ids per cluster, sorted within each cluster."""
        groups: dict[int, list[str]] = {}
        for node, index in self.assignment.items():
            groups.setdefault(index, []).append(node)
        return tuple(
            tuple(sorted(groups[index])) for index in range(len(groups))
        )

    @property
    def n_clusters(self) -> int:
        return len(self.clusters)


@dataclass(frozen=True)
class ClusterGraph:
    """Cluster-level citation flows with an edge-weight threshold applied.

    Inter-cluster edges carry the number of directed citations between the
    two clusters' members; intra-cluster citation counts are stored per
    cluster, never as self-edges.
    """

    cluster_sizes: tuple[int, ...]
    intra_citations: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]  # (from_cluster, to_cluster, weight)
    threshold_applied: int

    @property
    def n_clusters(self) -> int:
        return len(self.cluster_sizes)


def modularity(graph: CitationGraph, assignment: Mapping[str, int]) -> float:
    """Newman modularity Q of a node assignment on the symmetrized graph.

    Q is the sum over clusters of (fraction of edges inside the cluster)
    minus (fraction of edge-ends in the cluster) squared.  A graph with no
    edges has Q = 0 by convention.
    """
    for node in graph.nodes:
        if node not in assignment:
            raise ValidationError(f"assignment does not cover node {node!r}")
    edges = graph.undirected_edges
    m = len(edges)
    if m == 0:
        return 0.0
    inside: dict[int, int] = {}
    ends: dict[int, int] = {}
    for a, b in edges:
        ca, cb = assignment[a], assignment[b]
        ends[ca] = ends.get(ca, 0) + 1
        ends[cb] = ends.get(cb, 0) + 1
        if ca == cb:
            inside[ca] = inside.get(ca, 0) + 1
    q = 0.0
    for cluster, end_count in ends.items():
        e_ii = inside.get(cluster, 0) / m
        a_i = end_count / (2 * m)
        q += e_ii - a_i * a_i
    return q


def _pair_key(
    min_a: str, max_a: str, min_b: str, max_b: str
) -> tuple[str, str, str, str, str, str]:
    # Primary tie rule: lexicographically smallest (min member id, max member
    # id) over the merged pair; the per-cluster extrema break residual ties.
    if min_b < min_a:
        min_a, max_a, min_b, max_b = min_b, max_b, min_a, max_a
    return (min(min_a, min_b), max(max_a, max_b), min_a, max_a, min_b, max_b)


def greedy_modularity_clustering(graph: CitationGraph) -> Partition:
    """Agglomerative fast-greedy modularity clustering.

    Starts from singletons, repeatedly merges the connected cluster pair
    with maximum modularity gain, and returns the partition at the global
    maximum of the recorded merge sequence (later states win ties, so a
    single clique collapses to one cluster).  Isolated nodes stay
    singletons unless a merge raises Q.
    """
    if graph.n_nodes == 0:
        raise ValidationError("cannot cluster an empty graph")
    singletons = {node: index for index, node in enumerate(graph.nodes)}
    edges = graph.undirected_edges
    m = len(edges)
    if m == 0:
        return Partition.from_assignment(graph, singletons)

    # Per-cluster state, keyed by an arbitrary integer id.
    node_cluster = dict(singletons)
    members: dict[int, list[str]] = {i: [node] for node, i in singletons.items()}
    min_id = {i: node for node, i in singletons.items()}
    max_id = {i: node for node, i in singletons.items()}
    degree_sum = {i: 0 for i in members}
    cross: dict[int, dict[int, int]] = {i: {} for i in members}
    for a, b in edges:
        ca, cb = node_cluster[a], node_cluster[b]
        degree_sum[ca] += 1
        degree_sum[cb] += 1
        cross[ca][cb] = cross[ca].get(cb, 0) + 1
        cross[cb][ca] = cross[cb].get(ca, 0) + 1

    two_m = 2.0 * m
    q_current = -sum((d / two_m) ** 2 for d in degree_sum.values())
    best_q = q_current
    best_assignment = dict(node_cluster)

    while True:
        best_gain = None
        best_key = None
        best_pair = None
        for i, row in cross.items():
            a_i = degree_sum[i] / two_m
            for j, weight in row.items():
                if j <= i:
                    continue
                gain = weight / m - 2.0 * a_i * (degree_sum[j] / two_m)
                key = _pair_key(min_id[i], max_id[i], min_id[j], max_id[j])
                if (
                    best_gain is None
                    or gain > best_gain
                    or (gain == best_gain and key < best_key)
                ):
                    best_gain, best_key, best_pair = gain, key, (i, j)
        if best_pair is None:
            break  # no connected pairs left (disconnected components stay apart)
        i, j = best_pair
        # Merge j into i.
        for node in members[j]:
            node_cluster[node] = i
        members[i].extend(members[j])
        del members[j]
        min_id[i] = min(min_id[i], min_id.pop(j))
        max_id[i] = max(max_id[i], max_id.pop(j))
        degree_sum[i] += degree_sum.pop(j)
        row_j = cross.pop(j)
        for k, weight in row_j.items():
            del cross[k][j]
            if k != i:
                cross[i][k] = cross[i].get(k, 0) + weight
                cross[k][i] = cross[k].get(i, 0) + weight
        q_current += best_gain
        if q_current >= best_q:
            best_q = q_current
            best_assignment = dict(node_cluster)

    return Partition.from_assignment(graph, best_assignment)


def _set_partitions(n: int) -> Iterator[list[int]]:
    """All set partitions of range(n) as restricted-growth strings, lexicographic."""
    code = [0] * n

    def grow(position: int, max_used: int) -> Iterator[list[int]]:
        if position == n:
            yield code
            return
        for value in range(max_used + 2):
            code[position] = value
            yield from grow(position + 1, max(max_used, value))

    if n:
        yield from grow(1, 0)
    else:
        yield code


def brute_force_best_partition(
    graph: CitationGraph, max_nodes: int = 10
) -> Partition:
    """Exhaustive maximum-modularity partition (test oracle for the greedy).

    Enumerates every set partition of the nodes; ties are broken by fewer
    clusters, then by lexicographically smallest assignment code.
    """
    n = graph.n_nodes
    if n > max_nodes:
        raise ValidationError(
            f"graph has {n} nodes; brute force is limited to {max_nodes}"
        )
    nodes = graph.nodes
    best: tuple[float, int, list[int]] | None = None
    for code in _set_partitions(n):
        assignment = {nodes[i]: code[i] for i in range(n)}
        q = modularity(graph, assignment)
        n_clusters = max(code) + 1 if code else 0
        if (
            best is None
            or q > best[0]
            or (q == best[0] and (n_clusters, code) < (best[1], best[2]))
        ):
            best = (q, n_clusters, list(code))
    if best is None:
        return Partition(assignment={}, q=0.0)
    final = {nodes[i]: best[2][i] for i in range(n)}
    return Partition.from_assignment(graph, final)


def aggregate_clusters(
    graph: CitationGraph, partition: Partition, threshold: int
) -> ClusterGraph:
    """Sum directed citations between clusters and apply the edge threshold.

    Intra-cluster citation counts are recorded per cluster; inter-cluster
    edges with weight below ``threshold`` are removed (0 keeps all).
    """
    assignment = partition.assignment
    for node in graph.nodes:
        if node not in assignment:
            raise ValidationError(f"partition does not cover node {node!r}")
    n_clusters = partition.n_clusters
    sizes = [0] * n_clusters
    for node in graph.nodes:
        sizes[assignment[node]] += 1
    intra = [0] * n_clusters
    weights: dict[tuple[int, int], int] = {}
    for source, target in graph.edges:
        cs, ct = assignment[source], assignment[target]
        if cs == ct:
            intra[cs] += 1
        else:
            weights[(cs, ct)] = weights.get((cs, ct), 0) + 1
    kept = tuple(
        (source, target, weight)
        for (source, target), weight in sorted(weights.items())
        if weight >= threshold
    )
    return ClusterGraph(
        cluster_sizes=tuple(sizes),
        intra_citations=tuple(intra),
        edges=kept,
        threshold_applied=threshold,
    )
