"""File exports: GraphML (with importer), DOT, CSV tables, and an SVG
scatter for the correspondence plot.

All writers emit deterministic bytes for identical inputs: rows are sorted,
floats use shortest round-trip repr (Jaccard scores are fixed to three
decimals per the table convention), and newlines are always ``\\n``.
"""

from __future__ import annotations

import csv
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import Mapping, Sequence

from ..annotate import ClusterTermTable, DocumentAnnotation
from ..cluster import Partition
from ..corpus import Corpus
from ..dense import DenseRegion
from ..errors import ValidationError
from ..netbuild import CitationGraph, SelectionReport
from ..textmine import CAResult
from .layout import NodeStyle

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"

#: Node attributes carried by citation-network GraphML files.
_NODE_KEYS = (
    ("label", "string"),
    ("year", "int"),
    ("cluster", "int"),
    ("clinical_rate", "double"),
    ("color", "string"),
    ("x", "double"),
    ("y", "double"),
    ("size", "double"),
)
_EDGE_KEYS = (("weight", "int"),)


def _format_value(value: object) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def export_graphml(
    graph: CitationGraph,
    partition: Partition,
    annotations: Sequence[DocumentAnnotation],
    styles: Mapping[str, NodeStyle],
    path,
    corpus: Corpus | None = None,
) -> None:
    """Write the styled, clustered citation network as GraphML.

    Node attributes: label, year, cluster, clinical_rate, color, x, y,
    size; edges carry a weight attribute (1 for citation edges).  The file
    round-trips losslessly through :func:`import_graphml`.
    """
    rates = {a.doc_id: a.clinical_rate for a in annotations}
    for node in graph.nodes:
        if node not in partition.assignment:
            raise ValidationError(f"partition does not cover node {node!r}")
        if node not in styles:
            raise ValidationError(f"styles do not cover node {node!r}")
    root = ET.Element("graphml", xmlns=GRAPHML_NS)
    key_ids: dict[tuple[str, str], str] = {}
    for domain, keys in (("node", _NODE_KEYS), ("edge", _EDGE_KEYS)):
        for name, attr_type in keys:
            key_id = f"d{len(key_ids)}"
            key_ids[(domain, name)] = key_id
            ET.SubElement(
                root,
                "key",
                id=key_id,
                attrib={"for": domain, "attr.name": name, "attr.type": attr_type},
            )
    graph_el = ET.SubElement(root, "graph", id="G", edgedefault="directed")
    for node in graph.nodes:
        style = styles[node]
        doc = corpus.by_id.get(node) if corpus is not None else None
        values: dict[str, object] = {
            "label": doc.title if doc is not None else node,
            "year": doc.year if doc is not None else 0,
            "cluster": partition.assignment[node],
            "clinical_rate": float(rates.get(node, 0.0)),
            "color": style.color,
            "x": float(style.x),
            "y": float(style.y),
            "size": float(style.size),
        }
        node_el = ET.SubElement(graph_el, "node", id=node)
        for name, _ in _NODE_KEYS:
            data = ET.SubElement(node_el, "data", key=key_ids[("node", name)])
            data.text = _format_value(values[name])
    for source, target in graph.edges:
        edge_el = ET.SubElement(graph_el, "edge", source=source, target=target)
        data = ET.SubElement(edge_el, "data", key=key_ids[("edge", "weight")])
        data.text = "1"
    tree = ET.ElementTree(root)
    ET.indent(tree)
    tree.write(path, encoding="utf-8", xml_declaration=True)


@dataclass(frozen=True)
class GraphMLDocument:
    """Parsed GraphML content: typed node attributes and edge list."""

    directed: bool
    nodes: dict[str, dict[str, object]]
    edges: list[tuple[str, str, dict[str, object]]]

    def citation_graph(self, kind: str) -> CitationGraph:
        return CitationGraph(
            nodes=tuple(self.nodes),
            edges=tuple((s, t) for s, t, _ in self.edges),
            kind=kind,
        )

    def node_attribute(self, name: str) -> dict[str, object]:
        return {node: attrs[name] for node, attrs in self.nodes.items() if name in attrs}


_PARSERS = {"int": int, "long": int, "float": float, "double": float,
            "string": str, "boolean": lambda v: v == "true"}


def import_graphml(path) -> GraphMLDocument:
    """Parse a GraphML file written by :func:`export_graphml` (or compatible)."""
    try:
        tree = ET.parse(path)
    except ET.ParseError as exc:
        raise ValidationError(f"{path}: not well-formed GraphML: {exc}") from exc
    ns = {"g": GRAPHML_NS}
    root = tree.getroot()
    keys: dict[str, tuple[str, object]] = {}
    for key in root.findall("g:key", ns):
        parser = _PARSERS.get(key.get("attr.type", "string"), str)
        keys[key.get("id")] = (key.get("attr.name"), parser)
    graph_el = root.find("g:graph", ns)
    if graph_el is None:
        raise ValidationError(f"{path}: no <graph> element")

    def read_data(element) -> dict[str, object]:
        attrs = {}
        for data in element.findall("g:data", ns):
            key_id = data.get("key")
            if key_id not in keys:
                raise ValidationError(f"{path}: data references undeclared key {key_id!r}")
            name, parser = keys[key_id]
            attrs[name] = parser(data.text or "")
        return attrs

    nodes = {}
    for node_el in graph_el.findall("g:node", ns):
        nodes[node_el.get("id")] = read_data(node_el)
    edges = []
    for edge_el in graph_el.findall("g:edge", ns):
        edges.append((edge_el.get("source"), edge_el.get("target"), read_data(edge_el)))
    return GraphMLDocument(
        directed=graph_el.get("edgedefault", "directed") == "directed",
        nodes=nodes,
        edges=edges,
    )


def _dot_quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(
    graph: CitationGraph,
    styles: Mapping[str, NodeStyle],
    path,
    labels: Mapping[str, str] | None = None,
) -> None:
    """Write the styled network as a Graphviz DOT digraph."""
    lines = ["digraph citation_network {", "  node [style=filled];"]
    for node in graph.nodes:
        style = styles[node]
        label = labels.get(node, node) if labels else node
        lines.append(
            f"  {_dot_quote(node)} [label={_dot_quote(label)}, "
            f'fillcolor="{style.color}", pos="{style.x:.6f},{style.y:.6f}!", '
            f"width={style.size / 72.0:.4f}];"
        )
    for source, target in graph.edges:
        lines.append(f"  {_dot_quote(source)} -> {_dot_quote(target)};")
    lines.append("}")
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")


# --- CSV tables ---------------------------------------------------------


def _open_csv(path):
    return open(path, "w", encoding="utf-8", newline="")


def write_selection_csv(path, ids: Sequence[str], corpus: Corpus) -> None:
    with _open_csv(path) as handle:
        writer = csv.writer(handle)
        writer.writerow(["rank", "id", "times_cited_global"])
        for rank, doc_id in enumerate(ids, start=1):
            writer.writerow([rank, doc_id, corpus.by_id[doc_id].times_cited_global])


def write_partition_csv(path, partition: Partition) -> None:
    with _open_csv(path) as handle:
        writer = csv.writer(handle)
        writer.writerow(["node", "cluster"])
        for node in sorted(partition.assignment):
            writer.writerow([node, partition.assignment[node]])


def write_annotations_csv(
    path, annotations: Sequence[DocumentAnnotation], vocab
) -> None:
    with _open_csv(path) as handle:
        writer = csv.writer(handle)
        writer.writerow(["doc_id", "term_id", "label", "is_clinical"])
        for annotation in annotations:
            for term_id in sorted(annotation.terms):
                writer.writerow(
                    [
                        annotation.doc_id,
                        term_id,
                        vocab.by_id[term_id].label,
                        str(term_id in annotation.clinical_terms).lower(),
                    ]
                )


def write_rates_csv(path, annotations: Sequence[DocumentAnnotation]) -> None:
    with _open_csv(path) as handle:
        writer = csv.writer(handle)
        writer.writerow(["doc_id", "n_terms", "n_clinical", "rate"])
        for annotation in annotations:
            writer.writerow(
                [
                    annotation.doc_id,
                    len(annotation.terms),
                    len(annotation.clinical_terms),
                    repr(annotation.clinical_rate),
                ]
            )


def write_term_tables_csv(path, tables: Sequence[ClusterTermTable]) -> None:
    with _open_csv(path) as handle:
        writer = csv.writer(handle)
        writer.writerow(["cluster", "label", "n_documents"])
        for table in tables:
            for label, count in table.rows:
                writer.writerow([table.cluster, label, count])


def write_distinctive_csv(
    path, per_cluster: Mapping[int, Sequence[tuple[str, float]]], display
) -> None:
    """Distinctive-words table: cluster, rank, display word, 3-decimal score."""
    with _open_csv(path) as handle:
        writer = csv.writer(handle)
        writer.writerow(["cluster", "rank", "word", "jaccard"])
        for cluster in sorted(per_cluster):
            for rank, (word, score) in enumerate(per_cluster[cluster], start=1):
                writer.writerow([cluster, rank, display(word), f"{score:.3f}"])


def write_ca_csv(path, ca: CAResult) -> None:
    dim_names = [f"dim{i + 1}" for i in range(ca.dims)]
    with _open_csv(path) as handle:
        writer = csv.writer(handle)
        writer.writerow(["kind", "label", *dim_names, "mass", "inertia_contribution"])
        for i, label in enumerate(ca.row_labels):
            writer.writerow(
                [
                    "row",
                    label,
                    *(repr(float(v)) for v in ca.row_coords[i]),
                    repr(float(ca.row_masses[i])),
                    repr(float(ca.row_inertia[i])),
                ]
            )
        for j, label in enumerate(ca.col_labels):
            writer.writerow(
                [
                    "col",
                    label,
                    *(repr(float(v)) for v in ca.col_coords[j]),
                    repr(float(ca.col_masses[j])),
                    repr(float(ca.col_inertia[j])),
                ]
            )


def write_cluster_edges_csv(path, cluster_graph) -> None:
    with _open_csv(path) as handle:
        writer = csv.writer(handle)
        writer.writerow(["from_cluster", "to_cluster", "weight"])
        for source, target, weight in cluster_graph.edges:
            writer.writerow([source, target, weight])


def write_countries_csv(path, counts: Mapping[str, int]) -> None:
    with _open_csv(path) as handle:
        writer = csv.writer(handle)
        writer.writerow(["country", "n_documents"])
        for country, count in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])):
            writer.writerow([country, count])


def write_regions_csv(
    path, regions: Sequence[DenseRegion], weights: Mapping[str, float]
) -> None:
    with _open_csv(path) as handle:
        writer = csv.writer(handle)
        writer.writerow(["region_rank", "node_id", "weight", "is_seed"])
        for rank, region in enumerate(regions, start=1):
            for node in region.members:
                writer.writerow(
                    [rank, node, repr(weights[node]), str(node == region.seed).lower()]
                )


def write_assignees_csv(path, counts: Sequence[tuple[str, int]]) -> None:
    with _open_csv(path) as handle:
        writer = csv.writer(handle)
        writer.writerow(["assignee", "count"])
        for assignee, count in counts:
            writer.writerow([assignee, count])


def write_ca_svg(path, ca: CAResult, display=None, size: int = 640) -> None:
    """Minimal SVG scatter of the first two CA dimensions (rows red, cols gray)."""
    if ca.dims < 2:
        raise ValidationError("the correspondence plot needs at least 2 dimensions")
    xs = [float(v) for v in ca.row_coords[:, 0]] + [float(v) for v in ca.col_coords[:, 0]]
    ys = [float(v) for v in ca.row_coords[:, 1]] + [float(v) for v in ca.col_coords[:, 1]]
    x_low, x_high = min(xs), max(xs)
    y_low, y_high = min(ys), max(ys)
    margin = 40.0
    scale = size - 2 * margin

    def sx(value: float) -> float:
        span = x_high - x_low
        return margin + (scale * (value - x_low) / span if span > 0 else scale / 2)

    def sy(value: float) -> float:
        span = y_high - y_low
        return margin + (scale * (y_high - value) / span if span > 0 else scale / 2)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    for j, label in enumerate(ca.col_labels):
        x, y = sx(float(ca.col_coords[j, 0])), sy(float(ca.col_coords[j, 1]))
        text = display(label) if display else label
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="2" fill="#999999"/>')
        parts.append(
            f'<text x="{x + 4:.2f}" y="{y - 3:.2f}" font-size="9" fill="#666666">{_xml(text)}</text>'
        )
    for i, label in enumerate(ca.row_labels):
        x, y = sx(float(ca.row_coords[i, 0])), sy(float(ca.row_coords[i, 1]))
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="6" fill="#CC2222"/>')
        parts.append(
            f'<text x="{x + 8:.2f}" y="{y + 4:.2f}" font-size="13" fill="#000000">cluster {label}</text>'
        )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(parts) + "\n")


def _xml(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )


def selection_report_dict(report: SelectionReport) -> dict[str, object]:
    return {
        "fraction_requested": report.fraction_requested,
        "n_total": report.n_total,
        "n_selected": report.n_selected,
        "citations_selected": report.citations_selected,
        "citations_total": report.citations_total,
        "share": report.share,
    }
