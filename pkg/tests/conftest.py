import json
import random

import pytest
from importlib import resources

from frontmap.corpus import Author, Corpus, DocumentRecord
from frontmap.netbuild import CitationGraph


def make_doc(doc_id, kind="paper", cited=0, refs=(), title=None, abstract="",
             year=2005, authors=(), assignees=(), venue=None):
    return DocumentRecord(
        id=doc_id,
        kind=kind,
        title=f"Document {doc_id}" if title is None else title,
        abstract=abstract,
        year=year,
        authors=tuple(authors),
        assignees=tuple(assignees),
        venue=venue,
        times_cited_global=cited,
        references=tuple(refs),
    )


def make_corpus(docs, kind="paper"):
    return Corpus(documents=tuple(docs), kind=kind, provenance="test")


def author(name, country=None):
    return Author(name=name, country=country)


def random_graph(n_nodes, edge_prob, seed, kind="paper"):
    """Seeded Erdos-Renyi digraph over n labelled nodes."""
    rng = random.Random(seed)
    nodes = tuple(f"n{i}" for i in range(n_nodes))
    edges = []
    for i, a in enumerate(nodes):
        for b in nodes[i + 1:]:
            if rng.random() < edge_prob:
                edges.append((a, b) if rng.random() < 0.5 else (b, a))
    return CitationGraph(nodes=nodes, edges=tuple(edges), kind=kind)


def write_jsonl(path, objs):
    with open(path, "w", encoding="utf-8") as fh:
        for obj in objs:
            fh.write(json.dumps(obj) + "\n")
    return path


@pytest.fixture(scope="session")
def data_dir():
    return resources.files("frontmap.data")


@pytest.fixture(scope="session")
def papers_path(data_dir):
    return str(data_dir / "corpus_papers_60.jsonl")


@pytest.fixture(scope="session")
def patents_path(data_dir):
    return str(data_dir / "corpus_patents_102.jsonl")


@pytest.fixture(scope="session")
def vocab_path(data_dir):
    return str(data_dir / "vocabulary_ebola.json")


@pytest.fixture(scope="session")
def vocab(vocab_path):
    from frontmap.corpus import load_vocabulary

    return load_vocabulary(vocab_path)
