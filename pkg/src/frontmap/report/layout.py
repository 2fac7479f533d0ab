"""Deterministic force-directed layout and clinical-rate node styling."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from ..errors import ValidationError
from ..netbuild import CitationGraph

#: Color scale endpoints: blue at rate 0, red at the observed maximum rate.
COLOR_LOW = "#0000FF"
COLOR_HIGH = "#FF0000"


@dataclass(frozen=True)
class NodeStyle:
    node: str
    color: str  # RGB hex
    x: float
    y: float
    size: float


def layout_spring(
    graph: CitationGraph, seed: int, iterations: int = 100
) -> dict[str, tuple[float, float]]:
    """Seeded Fruchterman-Reingold layout, normalized to the unit square.

    Repulsion falls off with inverse distance, springs pull along edges,
    and displacement is capped by a linearly cooling temperature; the fixed
    iteration count and seeded start make runs bit-reproducible.
    """
    nodes = graph.nodes
    n = len(nodes)
    if n == 0:
        return {}
    rng = np.random.RandomState(seed)
    pos = rng.random_sample((n, 2))
    if n > 1:
        index = {v: i for i, v in enumerate(nodes)}
        edges = np.array(
            [(index[a], index[b]) for a, b in graph.undirected_edges], dtype=np.intp
        )
        k = np.sqrt(1.0 / n)
        temperature = 0.1
        step = temperature / (iterations + 1)
        for _ in range(iterations):
            delta = pos[:, None, :] - pos[None, :, :]
            dist = np.sqrt((delta**2).sum(axis=-1))
            np.fill_diagonal(dist, 1.0)
            dist = np.maximum(dist, 1e-9)
            repulse = (k * k) / dist**2
            disp = (delta * repulse[:, :, None]).sum(axis=1)
            if edges.size:
                span = pos[edges[:, 0]] - pos[edges[:, 1]]
                length = np.maximum(np.sqrt((span**2).sum(axis=-1)), 1e-9)
                # attraction d^2/k along the unit vector collapses to span * d / k
                pull = span * (length / k)[:, None]
                np.subtract.at(disp, edges[:, 0], pull)
                np.add.at(disp, edges[:, 1], pull)
            norm = np.maximum(np.sqrt((disp**2).sum(axis=-1)), 1e-9)
            pos += disp / norm[:, None] * np.minimum(norm, temperature)[:, None]
            temperature -= step
    low = pos.min(axis=0)
    span = pos.max(axis=0) - low
    coords = np.empty_like(pos)
    for axis in (0, 1):
        if span[axis] < 1e-12:
            coords[:, axis] = 0.5
        else:
            coords[:, axis] = (pos[:, axis] - low[axis]) / span[axis]
    return {v: (float(coords[i, 0]), float(coords[i, 1])) for i, v in enumerate(nodes)}


def _round_half_up(value: float) -> int:
    return int(np.floor(value + 0.5))


def color_for_rate(rate: float, max_rate: float) -> str:
    """Blend blue -> red linearly in the clinical rate.

    The scale is normalized to the observed maximum rate so low-rate
    corpora still spread over the gradient; components round half-up, so a
    mid-scale rate maps to #800080.
    """
    if max_rate <= 0.0:
        t = 0.0
    else:
        t = min(max(rate / max_rate, 0.0), 1.0)
    red = _round_half_up(255.0 * t)
    blue = _round_half_up(255.0 * (1.0 - t))
    return f"#{red:02X}00{blue:02X}"


def node_styles(
    graph: CitationGraph,
    rates: Mapping[str, float],
    positions: Mapping[str, tuple[float, float]],
    size_values: Mapping[str, int | float],
    flip_colors: bool = False,
) -> dict[str, NodeStyle]:
    """Combine rates, positions, and size values into per-node styles.

    ``size_values`` is typically the within-network in-degree; sizes are an
    affine map of the value so a zero-degree node stays visible.
    ``flip_colors`` reverses the gradient (red at rate 0, blue at the
    maximum); the chosen direction is recorded in the run legend.
    """
    for node in graph.nodes:
        if node not in rates or node not in positions or node not in size_values:
            raise ValidationError(f"missing style inputs for node {node!r}")
    max_rate = max((rates[v] for v in graph.nodes), default=0.0)
    styles = {}
    for node in graph.nodes:
        x, y = positions[node]
        value = max_rate - rates[node] if flip_colors else rates[node]
        styles[node] = NodeStyle(
            node=node,
            color=color_for_rate(value, max_rate),
            x=x,
            y=y,
            size=10.0 + 2.0 * float(size_values[node]),
        )
    return styles
