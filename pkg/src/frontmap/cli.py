"""Command-line interface.

Exit codes: 0 success, 2 validation error, 3 I/O error, 4 verify mismatch.
All subcommands that analyze a corpus operate on the top-cited selection,
mirroring the pipeline stages; ``report`` runs everything end to end.
"""

from __future__ import annotations

import functools
import os
import shutil
import sys

import click

from .__about__ import __version__
from .annotate import annotate_all, cluster_term_table, mean_clinical_rate
from .cluster import Partition, aggregate_clusters, greedy_modularity_clustering
from .corpus import KIND_PAPER, KIND_PATENT, load_corpus, load_vocabulary, Vocabulary
from .dense import find_dense_regions, leading_assignees, vertex_weights
from .errors import ValidationError, VerifyError
from .netbuild import build_citation_network, in_degree, select_top_cited
from .report import (
    RunConfig,
    export_dot,
    export_graphml,
    layout_spring,
    node_styles,
    run_pipeline,
    verify_run,
)
from .report.exports import (
    write_annotations_csv,
    write_assignees_csv,
    write_ca_csv,
    write_ca_svg,
    write_cluster_edges_csv,
    write_distinctive_csv,
    write_partition_csv,
    write_rates_csv,
    write_regions_csv,
    write_selection_csv,
    write_term_tables_csv,
)
from .textmine import (
    build_contingency,
    correspondence_analysis,
    default_stopwords,
    distinctive_words,
    load_stopwords,
    tokenize,
)

_KIND_ALIASES = {"paper": KIND_PAPER, "patent": KIND_PATENT, KIND_PATENT: KIND_PATENT}


def handle_errors(fn):
    """Translate package errors into the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except VerifyError as exc:
            click.echo(f"verify failed: {exc}", err=True)
            sys.exit(4)
        except ValidationError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        except OSError as exc:
            click.echo(f"i/o error: {exc}", err=True)
            sys.exit(3)

    return wrapper


def corpus_options(fn):
    fn = click.option(
        "--corpus", "corpus_path", required=True, help="Corpus JSON-Lines file."
    )(fn)
    fn = click.option(
        "--kind",
        type=click.Choice(["paper", "patent"]),
        default="paper",
        show_default=True,
        help="Corpus kind.",
    )(fn)
    return fn


def _load(corpus_path, kind):
    return load_corpus(corpus_path, _KIND_ALIASES[kind])


def _vocab(vocab_path, clinical_roots):
    vocabulary = load_vocabulary(vocab_path)
    if clinical_roots:
        roots = frozenset(r.strip() for r in clinical_roots.split(",") if r.strip())
        vocabulary = Vocabulary(terms=vocabulary.terms, clinical_roots=roots)
    return vocabulary


def _stopwords(stopwords_path):
    return load_stopwords(stopwords_path) if stopwords_path else default_stopwords()


def _ensure_out(out):
    os.makedirs(out, exist_ok=True)
    return out


@click.group()
@click.version_option(version=__version__, prog_name="frontmap")
def main():
    """Map research fronts in citation networks of papers and patents."""


@main.command()
@corpus_options
@click.option("--vocab", "vocab_path", default=None, help="Vocabulary JSON file.")
@handle_errors
def ingest(corpus_path, kind, vocab_path):
    """Validate a corpus (and optionally a vocabulary) and print a summary."""
    corpus = _load(corpus_path, kind)
    click.echo(f"corpus: {len(corpus)} documents, kind={corpus.kind}")
    if vocab_path:
        vocabulary = load_vocabulary(vocab_path)
        click.echo(
            f"vocabulary: {len(vocabulary)} terms, "
            f"{len(vocabulary.clinical_term_ids)} clinical"
        )


@main.command()
@corpus_options
@click.option("--fraction", type=float, default=0.2, show_default=True)
@click.option("--out", default=None, help="Directory for selection.csv.")
@handle_errors
def select(corpus_path, kind, fraction, out):
    """Select the top-cited fraction and report the citation share."""
    corpus = _load(corpus_path, kind)
    ids, report = select_top_cited(corpus, fraction)
    click.echo(
        f"selected {report.n_selected} of {report.n_total} documents "
        f"({report.citations_selected} of {report.citations_total} citations, "
        f"share {report.share:.4f})"
    )
    if out:
        write_selection_csv(os.path.join(_ensure_out(out), "selection.csv"), ids, corpus)


@main.command()
@corpus_options
@click.option("--fraction", type=float, default=0.2, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True, help="Directory for network exports.")
@handle_errors
def network(corpus_path, kind, fraction, seed, out):
    """Build the internal citation network of the selection and export it."""
    corpus = _load(corpus_path, kind)
    ids, _ = select_top_cited(corpus, fraction)
    graph = build_citation_network(corpus, ids)
    click.echo(
        f"network: {graph.n_nodes} nodes, {graph.n_edges} edges, "
        f"{len(graph.isolates())} isolates"
    )
    positions = layout_spring(graph, seed=seed)
    rates = {node: 0.0 for node in graph.nodes}
    styles = node_styles(graph, rates, positions, in_degree(graph))
    out = _ensure_out(out)
    singleton = Partition.from_assignment(graph, {v: i for i, v in enumerate(graph.nodes)})
    export_graphml(
        graph, singleton, [], styles, os.path.join(out, "network.graphml"), corpus=corpus
    )
    export_dot(
        graph,
        styles,
        os.path.join(out, "network.dot"),
        labels={v: corpus.by_id[v].title for v in graph.nodes},
    )


@main.command()
@corpus_options
@click.option("--fraction", type=float, default=0.2, show_default=True)
@click.option("--edge-threshold", type=int, default=30, show_default=True)
@click.option("--out", default=None, help="Directory for cluster CSVs.")
@handle_errors
def cluster(corpus_path, kind, fraction, edge_threshold, out):
    """Cluster the citation network by greedy modularity maximization."""
    corpus = _load(corpus_path, kind)
    ids, _ = select_top_cited(corpus, fraction)
    graph = build_citation_network(corpus, ids)
    partition = greedy_modularity_clustering(graph)
    aggregated = aggregate_clusters(graph, partition, edge_threshold)
    click.echo(f"clusters: {partition.n_clusters}, modularity Q = {partition.q:.4f}")
    for index, members in enumerate(partition.clusters):
        click.echo(
            f"  cluster {index}: {len(members)} documents, "
            f"{aggregated.intra_citations[index]} intra-citations"
        )
    if out:
        out = _ensure_out(out)
        write_partition_csv(os.path.join(out, "cluster_assignments.csv"), partition)
        write_cluster_edges_csv(os.path.join(out, "cluster_edges.csv"), aggregated)


@main.command()
@corpus_options
@click.option("--vocab", "vocab_path", required=True, help="Vocabulary JSON file.")
@click.option("--fraction", type=float, default=0.2, show_default=True)
@click.option("--clinical-roots", default=None, help="Comma-separated root labels.")
@click.option("--term-cutoff", type=int, default=2, show_default=True)
@click.option("--out", default=None, help="Directory for annotation CSVs.")
@handle_errors
def annotate(corpus_path, kind, vocab_path, fraction, clinical_roots, term_cutoff, out):
    """Annotate the selected documents and report per-cluster clinical rates."""
    corpus = _load(corpus_path, kind)
    vocabulary = _vocab(vocab_path, clinical_roots)
    ids, _ = select_top_cited(corpus, fraction)
    graph = build_citation_network(corpus, ids)
    partition = greedy_modularity_clustering(graph)
    annotations = annotate_all([corpus.by_id[v] for v in graph.nodes], vocabulary)
    by_doc = {a.doc_id: a for a in annotations}
    tables = []
    for index, members in enumerate(partition.clusters):
        cluster_annotations = [by_doc[v] for v in members]
        rate = mean_clinical_rate(cluster_annotations)
        tables.append(
            cluster_term_table(cluster_annotations, vocabulary, term_cutoff, index)
        )
        click.echo(f"cluster {index}: mean clinical rate {rate:.3f}")
    if out:
        out = _ensure_out(out)
        write_annotations_csv(os.path.join(out, "annotations.csv"), annotations, vocabulary)
        write_rates_csv(os.path.join(out, "clinical_rates.csv"), annotations)
        write_term_tables_csv(os.path.join(out, "term_tables.csv"), tables)


@main.command()
@corpus_options
@click.option("--vocab", "vocab_path", required=False, default=None)
@click.option("--fraction", type=float, default=0.2, show_default=True)
@click.option("--top-words", type=int, default=10, show_default=True)
@click.option("--min-df", type=int, default=2, show_default=True)
@click.option("--stopwords", "stopwords_path", default=None)
@click.option("--ca-svg", is_flag=True, default=False)
@click.option("--stem", is_flag=True, default=False, help="Experimental plural stripping.")
@click.option("--out", default=None, help="Directory for text-mining CSVs.")
@handle_errors
def mine(corpus_path, kind, vocab_path, fraction, top_words, min_df, stopwords_path, ca_svg, stem, out):
    """Distinctive words per cluster and the correspondence analysis."""
    corpus = _load(corpus_path, kind)
    ids, _ = select_top_cited(corpus, fraction)
    graph = build_citation_network(corpus, ids)
    partition = greedy_modularity_clustering(graph)
    stopwords = _stopwords(stopwords_path)
    tokenized = [tokenize(corpus.by_id[v], stopwords, stem=stem) for v in graph.nodes]
    table = build_contingency(tokenized, partition.assignment, min_df=min_df)
    ranked = {
        index: distinctive_words(table, index, top_n=top_words)
        for index in range(partition.n_clusters)
    }
    for index, rows in ranked.items():
        words = ", ".join(f"{table.display(w)} {score:.3f}" for w, score in rows[:5])
        click.echo(f"cluster {index}: {words}")
    ca = correspondence_analysis(table)
    click.echo(
        "correspondence: explained "
        + ", ".join(f"{v:.1%}" for v in ca.explained[: ca.dims])
    )
    if out:
        out = _ensure_out(out)
        write_distinctive_csv(
            os.path.join(out, "distinctive_words.csv"), ranked, table.display
        )
        write_ca_csv(os.path.join(out, "ca_coordinates.csv"), ca)
        if ca_svg:
            write_ca_svg(os.path.join(out, "ca_plot.svg"), ca, display=table.display)


@main.command()
@corpus_options
@click.option("--fraction", type=float, default=0.2, show_default=True)
@click.option("--vwp", type=float, default=0.2, show_default=True)
@click.option("--no-haircut", is_flag=True, default=False)
@click.option("--out", default=None, help="Directory for dense-region CSVs.")
@handle_errors
def dense(corpus_path, kind, fraction, vwp, no_haircut, out):
    """Detect dense regions in the patent-family citation network."""
    corpus = _load(corpus_path, kind)
    if corpus.kind != KIND_PATENT:
        raise ValidationError("dense-region detection expects --kind patent")
    ids, _ = select_top_cited(corpus, fraction)
    graph = build_citation_network(corpus, ids)
    weights = vertex_weights(graph)
    regions = find_dense_regions(graph, vwp=vwp, haircut=not no_haircut, weights=weights)
    click.echo(f"dense regions: {len(regions)} ({len(graph.isolates())} isolates)")
    all_assignees: dict[str, int] = {}
    for rank, region in enumerate(regions, start=1):
        rows = leading_assignees(corpus, region)
        for name, count in rows:
            all_assignees[name] = all_assignees.get(name, 0) + count
        leading = rows[0][0] if rows else "-"
        click.echo(
            f"  region {rank}: {len(region.members)} members, "
            f"score {region.score:.3f}, leading assignee {leading}"
        )
    if out:
        out = _ensure_out(out)
        write_regions_csv(os.path.join(out, "regions.csv"), regions, weights)
        write_assignees_csv(
            os.path.join(out, "assignees.csv"),
            sorted(all_assignees.items(), key=lambda kv: (-kv[1], kv[0])),
        )


@main.command()
@corpus_options
@click.option("--vocab", "vocab_path", required=True, help="Vocabulary JSON file.")
@click.option("--fraction", type=float, default=0.2, show_default=True)
@click.option("--edge-threshold", type=int, default=30, show_default=True)
@click.option("--top-words", type=int, default=10, show_default=True)
@click.option("--vwp", type=float, default=0.2, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True, help="Run output directory.")
@click.option("--stopwords", "stopwords_path", default=None)
@click.option("--clinical-roots", default=None, help="Comma-separated root labels.")
@click.option("--min-df", type=int, default=2, show_default=True)
@click.option("--term-cutoff", type=int, default=2, show_default=True)
@click.option("--ca-svg", is_flag=True, default=False)
@click.option("--size-by", type=click.Choice(["in_degree", "times_cited"]), default="in_degree", show_default=True)
@click.option("--flip-colors", is_flag=True, default=False, help="Red at rate 0 instead of blue.")
@click.option("--stem", is_flag=True, default=False, help="Experimental plural stripping.")
@handle_errors
def report(corpus_path, kind, vocab_path, fraction, edge_threshold, top_words, vwp,
           seed, out, stopwords_path, clinical_roots, min_df, term_cutoff, ca_svg,
           size_by, flip_colors, stem):
    """Run the full pipeline and write every table, export, and report.json."""
    roots = None
    if clinical_roots:
        roots = tuple(r.strip() for r in clinical_roots.split(",") if r.strip())
    config = RunConfig(
        corpus_path=corpus_path,
        vocab_path=vocab_path,
        kind=_KIND_ALIASES[kind],
        fraction=fraction,
        edge_threshold=edge_threshold,
        top_words=top_words,
        vwp=vwp,
        seed=seed,
        out_dir=out,
        stopwords_path=stopwords_path,
        clinical_roots=roots,
        min_df=min_df,
        term_cutoff=term_cutoff,
        ca_svg=ca_svg,
        size_by=size_by,
        flip_colors=flip_colors,
        stem=stem,
    )
    result = run_pipeline(config)
    click.echo(
        f"selected {result.selection.n_selected} of {result.selection.n_total} "
        f"(citation share {result.selection.share:.4f})"
    )
    click.echo(
        f"network {result.graph.n_nodes} nodes / {result.graph.n_edges} edges; "
        f"{result.partition.n_clusters} clusters, Q = {result.partition.q:.4f}"
    )
    for index, rate in enumerate(result.mean_rates):
        click.echo(f"  cluster {index}: mean clinical rate {rate:.3f}")
    if result.regions:
        click.echo(f"dense regions: {len(result.regions)}")
    click.echo(f"report written to {os.path.join(out, 'report.json')}")


@main.command()
@click.option("--out", required=True, help="Run directory to verify.")
@handle_errors
def verify(out):
    """Recompute a run from its inputs and compare every persisted output."""
    problems = verify_run(out)
    if problems:
        for problem in problems:
            click.echo(f"mismatch: {problem}", err=True)
        sys.exit(4)
    click.echo("verify: ok")


@main.command()
@click.option("--out", "run_dir", required=True, help="Finished run directory.")
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["graphml", "dot"]),
    default="graphml",
    show_default=True,
)
@click.option("--dest", required=True, help="Destination file path.")
@handle_errors
def export(run_dir, fmt, dest):
    """Copy a run's network export in the requested format to a new path."""
    source = os.path.join(run_dir, f"network.{fmt}")
    if not os.path.isfile(source):
        raise ValidationError(f"{run_dir!r} has no network.{fmt} (run 'report' first)")
    shutil.copyfile(source, dest)
    click.echo(f"wrote {dest}")


if __name__ == "__main__":
    main()
