"""Dense-region detection in citation networks (MCODE-style) and assignee
statistics for patent families.

Direction is ignored throughout: dense-region semantics concern
connectivity, not citation flow.  Each node is weighted by the highest
k-core of its closed neighborhood (k times that core's edge density);
regions grow outward from the heaviest unvisited seed, admitting neighbors
whose weight stays within the vertex weight percentage of the seed's.
"""

from __future__ import annotations

from dataclasses import dataclass
from statistics import fmean
from typing import Iterable, Mapping, Sequence

from .corpus import Corpus, KIND_PATENT
from .errors import ValidationError
from .netbuild import UNKNOWN_KEY, CitationGraph


@dataclass(frozen=True)
class DenseRegion:
    """A connected, densely linked node set grown from a seed."""

    members: tuple[str, ...]  # sorted
    seed: str
    score: float  # mean member weight
    density: float  # internal edges / possible edges


def _core_numbers(adjacency: Mapping[str, set[str]]) -> dict[str, int]:
    """Core number per node by iterative peeling."""
    degrees = {v: len(nbrs) for v, nbrs in adjacency.items()}
    remaining = dict(degrees)
    core: dict[str, int] = {}
    current = 0
    while remaining:
        node = min(remaining, key=lambda v: (remaining[v], v))
        current = max(current, remaining[node])
        core[node] = current
        del remaining[node]
        for neighbor in adjacency[node]:
            if neighbor in remaining:
                remaining[neighbor] -= 1
    return core


def _induced_adjacency(
    graph: CitationGraph, nodes: Iterable[str]
) -> dict[str, set[str]]:
    node_set = set(nodes)
    return {
        v: {u for u in graph.neighbors[v] if u in node_set} for v in node_set
    }


def _density(adjacency: Mapping[str, set[str]]) -> float:
    n = len(adjacency)
    if n < 2:
        return 0.0
    edges = sum(len(nbrs) for nbrs in adjacency.values()) // 2
    return edges / (n * (n - 1) / 2)


def vertex_weights(
    graph: CitationGraph, neighborhood: str = "closed"
) -> dict[str, float]:
    """MCODE vertex weighting: k-core number times core density of the
    node's neighborhood subgraph.

    The closed neighborhood (node plus neighbors) is the standard choice;
    ``neighborhood="open"`` excludes the node itself for sensitivity checks.
    Isolated nodes weigh 0.
    """
    if neighborhood not in ("closed", "open"):
        raise ValidationError(
            f"neighborhood must be 'closed' or 'open', got {neighborhood!r}"
        )
    weights: dict[str, float] = {}
    for node in graph.nodes:
        nbrs = graph.neighbors[node]
        scope = set(nbrs) | {node} if neighborhood == "closed" else set(nbrs)
        if len(scope) < 2:
            weights[node] = 0.0
            continue
        adjacency = _induced_adjacency(graph, scope)
        core = _core_numbers(adjacency)
        k_max = max(core.values())
        if k_max == 0:
            weights[node] = 0.0
            continue
        core_nodes = {v for v, k in core.items() if k >= k_max}
        weights[node] = k_max * _density(_induced_adjacency(graph, core_nodes))
    return weights


def find_dense_regions(
    graph: CitationGraph,
    vwp: float = 0.2,
    haircut: bool = True,
    weights: Mapping[str, float] | None = None,
) -> list[DenseRegion]:
    """Grow dense regions from high-weight seeds, best score first.

    Seeds are taken heaviest-first (ties by node id); growth admits
    unvisited neighbors with weight >= seed weight * (1 - vwp).  The
    haircut drops members with fewer than two region-internal edges.
    Regions are node-disjoint; singletons are suppressed.  Equal scores
    order by smallest member id.
    """
    if not 0.0 <= vwp < 1.0:
        raise ValidationError(f"vwp must be in [0, 1), got {vwp}")
    if weights is None:
        weights = vertex_weights(graph)
    visited: set[str] = set()
    regions: list[DenseRegion] = []
    for seed in sorted(graph.nodes, key=lambda v: (-weights[v], v)):
        if seed in visited:
            continue
        threshold = weights[seed] * (1.0 - vwp)
        members = {seed}
        visited.add(seed)
        queue = [seed]
        while queue:
            node = queue.pop(0)
            for neighbor in graph.neighbors[node]:
                if neighbor not in visited and weights[neighbor] >= threshold:
                    visited.add(neighbor)
                    members.add(neighbor)
                    queue.append(neighbor)
        if haircut:
            adjacency = _induced_adjacency(graph, members)
            members = {v for v in members if len(adjacency[v]) >= 2}
        if len(members) < 2:
            continue
        adjacency = _induced_adjacency(graph, members)
        regions.append(
            DenseRegion(
                members=tuple(sorted(members)),
                seed=seed,
                score=fmean(weights[v] for v in members),
                density=_density(adjacency),
            )
        )
    regions.sort(key=lambda r: (-r.score, r.members[0]))
    return regions


def leading_assignees(
    corpus: Corpus, region: DenseRegion | Sequence[str]
) -> list[tuple[str, int]]:
    """Patent-family counts per assignee among region members, descending.

    A family with several assignees contributes one count to each; families
    without assignee data count under ``(unknown)``.  Ties order by name.
    """
    if corpus.kind != KIND_PATENT:
        raise ValidationError(
            f"assignee statistics need a patent_family corpus, got {corpus.kind!r}"
        )
    members = region.members if isinstance(region, DenseRegion) else tuple(region)
    counts: dict[str, int] = {}
    for member in members:
        doc = corpus.by_id.get(member)
        if doc is None:
            raise ValidationError(f"unknown document id {member!r}")
        for assignee in doc.assignees or (UNKNOWN_KEY,):
            counts[assignee] = counts.get(assignee, 0) + 1
    return sorted(counts.items(), key=lambda item: (-item[1], item[0]))
