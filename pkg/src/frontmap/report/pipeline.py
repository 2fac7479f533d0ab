"""End-to-end run orchestration, the JSON run report, and verification.

A run executes select -> network -> cluster -> annotate -> mine ->
aggregate (plus dense-region detection for patent corpora), writes every
table and graph export into the output directory, and finishes with a
``report.json`` carrying all numbers, parameters, and input digests.  Runs
are fully deterministic for a fixed seed: re-running the same configuration
reproduces every output byte except the report timestamp, which is what
``verify`` checks.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone

from .. import __about__
from ..annotate import (
    ClusterTermTable,
    DocumentAnnotation,
    annotate_all,
    cluster_term_table,
    mean_clinical_rate,
)
from ..cluster import (
    ClusterGraph,
    Partition,
    aggregate_clusters,
    greedy_modularity_clustering,
    modularity,
)
from ..corpus import (
    KIND_PATENT,
    Corpus,
    Vocabulary,
    load_corpus,
    load_vocabulary,
)
from ..dense import DenseRegion, find_dense_regions, leading_assignees, vertex_weights
from ..errors import ValidationError, VerifyError
from ..netbuild import (
    CitationGraph,
    SelectionReport,
    build_citation_network,
    country_counts,
    in_degree,
    select_top_cited,
)
from ..textmine import (
    STOPWORDS_VERSION,
    CAResult,
    build_contingency,
    correspondence_analysis,
    default_stopwords,
    distinctive_words,
    load_stopwords,
    tokenize,
)
from .exports import (
    export_dot,
    export_graphml,
    import_graphml,
    selection_report_dict,
    write_annotations_csv,
    write_assignees_csv,
    write_ca_csv,
    write_ca_svg,
    write_cluster_edges_csv,
    write_countries_csv,
    write_distinctive_csv,
    write_partition_csv,
    write_rates_csv,
    write_regions_csv,
    write_selection_csv,
    write_term_tables_csv,
)
from .layout import COLOR_HIGH, COLOR_LOW, layout_spring, node_styles

logger = logging.getLogger(__name__)

REPORT_FILENAME = "report.json"
LOCK_FILENAME = "run.lock"


@dataclass(frozen=True)
class RunConfig:
    """Everything a pipeline run depends on; fully determines the outputs."""

    corpus_path: str
    vocab_path: str
    kind: str = "paper"
    fraction: float = 0.2
    edge_threshold: int = 30
    top_words: int = 10
    vwp: float = 0.2
    seed: int = 0
    out_dir: str = "frontmap_out"
    stopwords_path: str | None = None
    clinical_roots: tuple[str, ...] | None = None
    min_df: int = 2
    term_cutoff: int = 2
    ca_dims: int = 2
    ca_svg: bool = False
    haircut: bool = True
    size_by: str = "in_degree"  # or "times_cited"
    flip_colors: bool = False
    stem: bool = False  # experimental plural stripping before mining

    def normalized(self) -> "RunConfig":
        """Resolve input paths so reruns from any directory are identical."""
        return replace(
            self,
            corpus_path=os.path.abspath(self.corpus_path),
            vocab_path=os.path.abspath(self.vocab_path),
            stopwords_path=(
                os.path.abspath(self.stopwords_path) if self.stopwords_path else None
            ),
        )

    def parameters_dict(self) -> dict[str, object]:
        """Parameter record for the report; out_dir is implied by location."""
        return {
            "corpus_path": self.corpus_path,
            "vocab_path": self.vocab_path,
            "kind": self.kind,
            "fraction": self.fraction,
            "edge_threshold": self.edge_threshold,
            "top_words": self.top_words,
            "vwp": self.vwp,
            "seed": self.seed,
            "stopwords_path": self.stopwords_path,
            "clinical_roots": (
                sorted(self.clinical_roots) if self.clinical_roots else None
            ),
            "min_df": self.min_df,
            "term_cutoff": self.term_cutoff,
            "ca_dims": self.ca_dims,
            "ca_svg": self.ca_svg,
            "haircut": self.haircut,
            "size_by": self.size_by,
            "flip_colors": self.flip_colors,
            "stem": self.stem,
        }

    @classmethod
    def from_parameters(cls, params: dict, out_dir: str) -> "RunConfig":
        roots = params.get("clinical_roots")
        return cls(
            corpus_path=params["corpus_path"],
            vocab_path=params["vocab_path"],
            kind=params["kind"],
            fraction=params["fraction"],
            edge_threshold=params["edge_threshold"],
            top_words=params["top_words"],
            vwp=params["vwp"],
            seed=params["seed"],
            out_dir=out_dir,
            stopwords_path=params.get("stopwords_path"),
            clinical_roots=tuple(roots) if roots else None,
            min_df=params["min_df"],
            term_cutoff=params["term_cutoff"],
            ca_dims=params["ca_dims"],
            ca_svg=params["ca_svg"],
            haircut=params["haircut"],
            size_by=params["size_by"],
            flip_colors=params.get("flip_colors", False),
            stem=params.get("stem", False),
        )


@dataclass
class RunReport:
    """In-memory results of a pipeline run plus the serialized report dict."""

    config: RunConfig
    corpus: Corpus
    vocabulary: Vocabulary
    selected_ids: list[str]
    selection: SelectionReport
    graph: CitationGraph
    partition: Partition
    cluster_graph: ClusterGraph
    annotations: list[DocumentAnnotation]
    mean_rates: list[float]
    term_tables: list[ClusterTermTable]
    leaders: list[tuple[str, int]]
    countries: dict[str, int]
    distinctive: dict[int, list[tuple[str, float]]]
    ca: CAResult | None
    ca_skip_reason: str | None
    regions: list[DenseRegion]
    region_assignees: list[list[tuple[str, int]]]
    weights: dict[str, float] | None
    timestamp: str
    outputs: list[str] = field(default_factory=list)
    json_dict: dict = field(default_factory=dict)


@contextmanager
def _stage(name: str):
    """Attach the failing stage name to propagated pipeline errors."""
    try:
        yield
    except ValidationError as exc:
        raise type(exc)(f"[{name}] {exc}") from exc


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(65536), b""):
            digest.update(block)
    return digest.hexdigest()


@contextmanager
def _run_lock(out_dir: str):
    lock_path = os.path.join(out_dir, LOCK_FILENAME)
    try:
        handle = open(lock_path, "x", encoding="utf-8")
    except FileExistsError:
        raise ValidationError(
            f"output directory {out_dir!r} is locked by another run "
            f"(remove {LOCK_FILENAME} if that run crashed)"
        ) from None
    try:
        handle.write(f"pid={os.getpid()}\n")
        handle.close()
        yield
    finally:
        try:
            os.remove(lock_path)
        except OSError:
            pass


def run_pipeline(config: RunConfig) -> RunReport:
    """Execute the full mapping pipeline and write all exports.

    Deterministic for a fixed configuration and seed; the only
    run-dependent output value is the report timestamp.
    """
    config = config.normalized()
    os.makedirs(config.out_dir, exist_ok=True)
    with _run_lock(config.out_dir):
        return _run_stages(config)


def _run_stages(config: RunConfig) -> RunReport:
    out = config.out_dir

    with _stage("ingest"):
        corpus = load_corpus(config.corpus_path, config.kind)
        vocabulary = load_vocabulary(config.vocab_path)
        if config.clinical_roots is not None:
            vocabulary = Vocabulary(
                terms=vocabulary.terms,
                clinical_roots=frozenset(config.clinical_roots),
            )
        if config.stopwords_path:
            stopwords = load_stopwords(config.stopwords_path)
        else:
            stopwords = default_stopwords()

    with _stage("select"):
        selected_ids, selection = select_top_cited(corpus, config.fraction)

    with _stage("network"):
        graph = build_citation_network(corpus, selected_ids)

    with _stage("cluster"):
        partition = greedy_modularity_clustering(graph)
        cluster_graph = aggregate_clusters(graph, partition, config.edge_threshold)

    with _stage("annotate"):
        docs = [corpus.by_id[node] for node in graph.nodes]
        annotations = annotate_all(docs, vocabulary)
        by_doc = {a.doc_id: a for a in annotations}
        members = partition.clusters
        mean_rates = [
            mean_clinical_rate([by_doc[node] for node in cluster])
            for cluster in members
        ]
        term_tables = [
            cluster_term_table(
                [by_doc[node] for node in cluster],
                vocabulary,
                cutoff=config.term_cutoff,
                cluster=index,
            )
            for index, cluster in enumerate(members)
        ]
        degrees = in_degree(graph)
        # a cluster's leader is the node most cited *by its own cluster*
        leader_rows = []
        for cluster in members:
            within = in_degree(graph, restrict_to=cluster)
            leader = min(cluster, key=lambda node: (-within[node], node))
            leader_rows.append((leader, within[leader]))
        countries = country_counts(corpus, graph.nodes)

    with _stage("mine"):
        tokenized = [
            tokenize(corpus.by_id[node], stopwords, stem=config.stem)
            for node in graph.nodes
        ]
        ca = None
        ca_skip_reason = None
        distinctive: dict[int, list[tuple[str, float]]] = {}
        table = None
        try:
            table = build_contingency(
                tokenized, partition.assignment, min_df=config.min_df
            )
            for index in range(partition.n_clusters):
                distinctive[index] = distinctive_words(
                    table, index, top_n=config.top_words
                )
            ca = correspondence_analysis(table, dims=config.ca_dims)
        except ValidationError as exc:
            # A degenerate table (too few clusters or words) skips the
            # correspondence analysis rather than failing the whole run.
            ca_skip_reason = str(exc)
            logger.warning("correspondence analysis skipped: %s", exc)

    regions = []
    region_assignees = []
    weights = None
    if config.kind == KIND_PATENT:
        with _stage("dense"):
            weights = vertex_weights(graph)
            regions = find_dense_regions(
                graph, vwp=config.vwp, haircut=config.haircut, weights=weights
            )
            region_assignees = [
                leading_assignees(corpus, region) for region in regions
            ]

    with _stage("layout"):
        positions = layout_spring(graph, seed=config.seed)
        rates = {a.doc_id: a.clinical_rate for a in annotations}
        if config.size_by == "times_cited":
            size_values = {
                node: corpus.by_id[node].times_cited_global for node in graph.nodes
            }
        else:
            size_values = degrees
        styles = node_styles(
            graph, rates, positions, size_values, flip_colors=config.flip_colors
        )

    timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    report = RunReport(
        config=config,
        corpus=corpus,
        vocabulary=vocabulary,
        selected_ids=selected_ids,
        selection=selection,
        graph=graph,
        partition=partition,
        cluster_graph=cluster_graph,
        annotations=annotations,
        mean_rates=mean_rates,
        term_tables=term_tables,
        leaders=leader_rows,
        countries=countries,
        distinctive=distinctive,
        ca=ca,
        ca_skip_reason=ca_skip_reason,
        regions=regions,
        region_assignees=region_assignees,
        weights=weights,
        timestamp=timestamp,
    )

    with _stage("export"):
        display = table.display if table is not None else (lambda w: w)
        write_selection_csv(os.path.join(out, "selection.csv"), selected_ids, corpus)
        export_graphml(
            graph,
            partition,
            annotations,
            styles,
            os.path.join(out, "network.graphml"),
            corpus=corpus,
        )
        export_dot(
            graph,
            styles,
            os.path.join(out, "network.dot"),
            labels={node: corpus.by_id[node].title for node in graph.nodes},
        )
        write_partition_csv(os.path.join(out, "cluster_assignments.csv"), partition)
        write_cluster_edges_csv(os.path.join(out, "cluster_edges.csv"), cluster_graph)
        write_annotations_csv(
            os.path.join(out, "annotations.csv"), annotations, vocabulary
        )
        write_rates_csv(os.path.join(out, "clinical_rates.csv"), annotations)
        write_term_tables_csv(os.path.join(out, "term_tables.csv"), term_tables)
        write_distinctive_csv(
            os.path.join(out, "distinctive_words.csv"), distinctive, display
        )
        write_countries_csv(os.path.join(out, "countries.csv"), countries)
        if ca is not None:
            write_ca_csv(os.path.join(out, "ca_coordinates.csv"), ca)
            if config.ca_svg:
                write_ca_svg(os.path.join(out, "ca_plot.svg"), ca, display=display)
        if config.kind == KIND_PATENT and weights is not None:
            write_regions_csv(os.path.join(out, "regions.csv"), regions, weights)
            assignee_totals: dict[str, int] = {}
            for rows in region_assignees:
                for name, count in rows:
                    assignee_totals[name] = assignee_totals.get(name, 0) + count
            write_assignees_csv(
                os.path.join(out, "assignees.csv"),
                sorted(assignee_totals.items(), key=lambda kv: (-kv[1], kv[0])),
            )
        report.outputs = sorted(
            name
            for name in os.listdir(out)
            if name not in (REPORT_FILENAME, LOCK_FILENAME)
        )
        report.json_dict = _report_dict(report)
        with open(
            os.path.join(out, REPORT_FILENAME), "w", encoding="utf-8", newline="\n"
        ) as handle:
            json.dump(report.json_dict, handle, indent=2, sort_keys=True)
            handle.write("\n")
    return report


def _report_dict(report: RunReport) -> dict:
    config = report.config
    partition = report.partition
    graph = report.graph
    clusters = []
    for index, members in enumerate(partition.clusters):
        leader, leader_degree = report.leaders[index]
        clusters.append(
            {
                "index": index,
                "size": len(members),
                "intra_citations": report.cluster_graph.intra_citations[index],
                "mean_clinical_rate": report.mean_rates[index],
                "leader": {"id": leader, "in_degree": leader_degree},
                "top_terms": [
                    [label, count] for label, count in report.term_tables[index].rows
                ],
            }
        )
    ca_summary: dict[str, object] | None = None
    if report.ca is not None:
        ca_summary = {
            "singular_values": [float(v) for v in report.ca.singular_values],
            "explained": [float(v) for v in report.ca.explained],
            "total_inertia": report.ca.total_inertia,
            "dims": report.ca.dims,
        }
    dense_summary = None
    if config.kind == KIND_PATENT:
        dense_summary = {
            "regions": [
                {
                    "rank": index + 1,
                    "members": list(region.members),
                    "seed": region.seed,
                    "score": region.score,
                    "density": region.density,
                    "assignees": [
                        [name, count]
                        for name, count in report.region_assignees[index]
                    ],
                }
                for index, region in enumerate(report.regions)
            ],
            "n_isolates": len(graph.isolates()),
        }
    inputs = {
        "corpus": {"path": config.corpus_path, "sha256": _sha256(config.corpus_path)},
        "vocabulary": {
            "path": config.vocab_path,
            "sha256": _sha256(config.vocab_path),
        },
        "stopwords": (
            {"path": config.stopwords_path, "sha256": _sha256(config.stopwords_path)}
            if config.stopwords_path
            else {"builtin_version": STOPWORDS_VERSION}
        ),
    }
    return {
        "tool": {"name": "frontmap", "version": __about__.__version__},
        "timestamp": report.timestamp,
        "parameters": config.parameters_dict(),
        "inputs": inputs,
        "selection": selection_report_dict(report.selection),
        "network": {
            "n_nodes": graph.n_nodes,
            "n_edges": graph.n_edges,
            "n_isolates": len(graph.isolates()),
        },
        "clustering": {
            "q": partition.q,
            "n_clusters": partition.n_clusters,
            "symmetrized": True,
        },
        "clusters": clusters,
        "cluster_graph": {
            "threshold": report.cluster_graph.threshold_applied,
            "edges": [[s, t, w] for s, t, w in report.cluster_graph.edges],
        },
        "countries": dict(sorted(report.countries.items())),
        "distinctive_words": {
            str(index): [[word, round(score, 3)] for word, score in rows]
            for index, rows in report.distinctive.items()
        },
        "correspondence": ca_summary,
        "correspondence_skipped": report.ca_skip_reason,
        "dense": dense_summary,
        "legend": {
            "color_low_rate": COLOR_HIGH if config.flip_colors else COLOR_LOW,
            "color_high_rate": COLOR_LOW if config.flip_colors else COLOR_HIGH,
            "color_scale_max_rate": max(
                (a.clinical_rate for a in report.annotations), default=0.0
            ),
            "node_size": config.size_by,
            "contingency_cells": "document_frequency",
        },
        "outputs": report.outputs,
    }


def verify_run(out_dir: str) -> list[str]:
    """Re-run a finished pipeline and compare every persisted output.

    Returns a list of mismatch descriptions (empty when the directory is
    faithful to its inputs and parameters).
    """
    report_path = os.path.join(out_dir, REPORT_FILENAME)
    if not os.path.isfile(report_path):
        raise VerifyError(f"{out_dir!r} has no {REPORT_FILENAME}")
    with open(report_path, "r", encoding="utf-8") as handle:
        stored = json.load(handle)
    problems: list[str] = []
    for name, record in stored.get("inputs", {}).items():
        if "sha256" not in record:
            continue
        path = record["path"]
        if not os.path.isfile(path):
            problems.append(f"input {name}: file {path!r} is missing")
            continue
        digest = _sha256(path)
        if digest != record["sha256"]:
            problems.append(
                f"input {name}: digest changed ({record['sha256'][:12]} -> {digest[:12]})"
            )
    if problems:
        return problems

    config = RunConfig.from_parameters(stored["parameters"], out_dir)
    with tempfile.TemporaryDirectory(prefix="frontmap_verify_") as temp_dir:
        fresh = run_pipeline(replace(config, out_dir=temp_dir))
        for name in fresh.outputs:
            original = os.path.join(out_dir, name)
            if not os.path.isfile(original):
                problems.append(f"output {name} is missing")
                continue
            with open(original, "rb") as handle:
                old_bytes = handle.read()
            with open(os.path.join(temp_dir, name), "rb") as handle:
                new_bytes = handle.read()
            if old_bytes != new_bytes:
                problems.append(f"output {name} does not match a recomputation")
        stored_normalized = {k: v for k, v in stored.items() if k != "timestamp"}
        fresh_normalized = {
            k: v for k, v in fresh.json_dict.items() if k != "timestamp"
        }
        if stored_normalized != fresh_normalized:
            changed = sorted(
                k
                for k in set(stored_normalized) | set(fresh_normalized)
                if stored_normalized.get(k) != fresh_normalized.get(k)
            )
            problems.append(f"report.json differs in: {', '.join(changed)}")

    # Independent cross-checks against the persisted network file.
    graphml_path = os.path.join(out_dir, "network.graphml")
    if os.path.isfile(graphml_path):
        doc = import_graphml(graphml_path)
        if len(doc.nodes) != stored["network"]["n_nodes"]:
            problems.append("network.graphml node count differs from report")
        if len(doc.edges) != stored["network"]["n_edges"]:
            problems.append("network.graphml edge count differs from report")
        graph = doc.citation_graph(stored["parameters"]["kind"])
        assignment = {n: int(v) for n, v in doc.node_attribute("cluster").items()}
        q = modularity(graph, assignment)
        if abs(q - stored["clustering"]["q"]) > 1e-12:
            problems.append(
                "modularity recomputed from network.graphml differs from report"
            )
    return problems
