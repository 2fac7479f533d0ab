"""Input validation helpers shared by the estimator API."""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .corpus import KIND_PAPER, DocumentRecord
from .errors import ValidationError
from .netbuild import CitationGraph
from .textmine import ContingencyTable


def check_citation_graph(X) -> CitationGraph:
    """Coerce estimator input to a CitationGraph.

    Accepts a CitationGraph, or a ``(nodes, edges)`` pair where edges are
    (citing, cited) id pairs.
    """
    if isinstance(X, CitationGraph):
        return X
    if isinstance(X, tuple) and len(X) == 2:
        nodes, edges = X
        return CitationGraph(
            nodes=tuple(nodes),
            edges=tuple((str(a), str(b)) for a, b in edges),
            kind=KIND_PAPER,
        )
    raise ValidationError(
        "expected a CitationGraph or a (nodes, edges) pair, "
        f"got {type(X).__name__}"
    )


def check_contingency(X) -> ContingencyTable:
    """Coerce estimator input to a ContingencyTable.

    Accepts a ContingencyTable or a nonnegative 2D count array; array rows
    become cluster indices 0..n-1 and columns are named c0..cm.
    """
    if isinstance(X, ContingencyTable):
        return X
    counts = np.asarray(X)
    if counts.ndim != 2:
        raise ValidationError(f"expected a 2D count table, got shape {counts.shape}")
    if counts.size == 0:
        raise ValidationError("count table must be nonempty")
    if np.any(counts < 0):
        raise ValidationError("count table entries must be nonnegative")
    return ContingencyTable(
        rows=tuple(range(counts.shape[0])),
        columns=tuple(f"c{j}" for j in range(counts.shape[1])),
        counts=counts,
        cluster_sizes=tuple(int(v) for v in counts.max(axis=1)),
        display_forms={},
    )


def check_documents(X) -> list[DocumentRecord]:
    docs = list(X) if isinstance(X, Iterable) else None
    if not docs or not all(isinstance(d, DocumentRecord) for d in docs):
        raise ValidationError("expected a nonempty iterable of DocumentRecord")
    return docs
