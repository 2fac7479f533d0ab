"""Abstract tokenization, cluster-by-word tables, Jaccard distinctiveness,
and correspondence analysis.

Cells are document frequencies (presence, not token counts): the Jaccard
distinctiveness measure is set-based, and the same table feeds the
correspondence analysis so the two views of cluster content stay
consistent.  No stemming is applied by default.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from typing import Mapping, Sequence

import numpy as np

from .corpus import DocumentRecord
from .errors import ValidationError

#: Bump when the bundled stopword list changes; recorded in run reports.
STOPWORDS_VERSION = "1"

_SURFACE_RE = re.compile(r"[^\W_]+", re.UNICODE)


def default_stopwords() -> frozenset[str]:
    """The versioned English stopword list shipped with the package."""
    text = resources.files("frontmap.data").joinpath("stopwords_en.txt").read_text("utf-8")
    return _parse_stopwords(text)


def load_stopwords(path) -> frozenset[str]:
    """Read a user stopword list: one word per line, '#' comments allowed."""
    with open(path, "r", encoding="utf-8") as handle:
        return _parse_stopwords(handle.read())


def _parse_stopwords(text: str) -> frozenset[str]:
    words = set()
    for line in text.splitlines():
        word = line.split("#", 1)[0].strip().lower()
        if word:
            words.add(word)
    return frozenset(words)


@dataclass(frozen=True)
class TokenizedDocument:
    """Presence set of normalized abstract words plus display surface forms."""

    doc_id: str
    tokens: frozenset[str]
    display_forms: Mapping[str, str]


def light_stem(word: str) -> str:
    """Conservative plural stripper (S-stemmer), used only when opted in."""
    if len(word) < 4:
        return word
    if word.endswith("ies") and not word.endswith(("eies", "aies")):
        return word[:-3] + "y"
    if word.endswith("es") and not word.endswith(("aes", "ees", "oes")):
        return word[:-1]
    if word.endswith("s") and not word.endswith(("us", "ss")):
        return word[:-1]
    return word


def tokenize(
    doc: DocumentRecord, stopwords: frozenset[str], stem: bool = False
) -> TokenizedDocument:
    """Tokenize an abstract into a presence set.

    Maximal letter/digit runs are lowercased; stopwords and single-character
    tokens are dropped.  The display form of each kept token is its most
    frequent original surface (ties resolved to the lexicographically
    smallest).  ``stem`` applies the experimental plural stripper after
    stopword removal.
    """
    surfaces: dict[str, Counter] = {}
    for match in _SURFACE_RE.finditer(doc.abstract):
        surface = match.group()
        norm = surface.lower()
        if len(norm) < 2 or norm in stopwords:
            continue
        if stem:
            norm = light_stem(norm)
        surfaces.setdefault(norm, Counter())[surface] += 1
    display = {
        norm: min(counter.items(), key=lambda kv: (-kv[1], kv[0]))[0]
        for norm, counter in surfaces.items()
    }
    return TokenizedDocument(
        doc_id=doc.id, tokens=frozenset(surfaces), display_forms=display
    )


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """Cluster-by-word document-frequency matrix.

    ``cluster_sizes`` count the documents assigned to each cluster
    (including documents with no tokens), which is the Jaccard denominator;
    column totals equal network-wide document frequencies because every
    document belongs to exactly one cluster.
    """

    rows: tuple[int, ...]  # cluster indices, 0..k-1
    columns: tuple[str, ...]  # normalized words, sorted
    counts: np.ndarray  # shape (len(rows), len(columns)), int
    cluster_sizes: tuple[int, ...]
    display_forms: Mapping[str, str]

    @cached_property
    def row_totals(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @cached_property
    def column_totals(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    @property
    def grand_total(self) -> int:
        return int(self.counts.sum())

    def display(self, word: str) -> str:
        return self.display_forms.get(word, word)


def build_contingency(
    tokenized: Sequence[TokenizedDocument],
    assignment: Mapping[str, int],
    min_df: int = 2,
) -> ContingencyTable:
    """Assemble the cluster-by-word table from tokenized documents.

    Words below the network-wide document frequency ``min_df`` are pruned
    (singletons carry no cluster contrast); ``min_df`` is clamped to 1 so no
    all-zero columns can appear.
    """
    min_df = max(1, min_df)
    n_clusters = 0
    for doc in tokenized:
        if doc.doc_id not in assignment:
            raise ValidationError(f"document {doc.doc_id!r} has no cluster assignment")
        n_clusters = max(n_clusters, assignment[doc.doc_id] + 1)
    df: Counter = Counter()
    for doc in tokenized:
        df.update(doc.tokens)
    columns = tuple(sorted(w for w, count in df.items() if count >= min_df))
    col_index = {w: i for i, w in enumerate(columns)}
    counts = np.zeros((n_clusters, len(columns)), dtype=np.int64)
    sizes = [0] * n_clusters
    for doc in tokenized:
        cluster = assignment[doc.doc_id]
        sizes[cluster] += 1
        for token in doc.tokens:
            column = col_index.get(token)
            if column is not None:
                counts[cluster, column] += 1
    # Corpus-level display form: the surface most documents chose.
    votes: dict[str, Counter] = {w: Counter() for w in columns}
    for doc in tokenized:
        for token in doc.tokens:
            if token in votes:
                votes[token][doc.display_forms[token]] += 1
    display = {
        w: min(counter.items(), key=lambda kv: (-kv[1], kv[0]))[0]
        for w, counter in votes.items()
        if counter
    }
    return ContingencyTable(
        rows=tuple(range(n_clusters)),
        columns=columns,
        counts=counts,
        cluster_sizes=tuple(sizes),
        display_forms=display,
    )


def distinctive_words(
    table: ContingencyTable, cluster: int, top_n: int = 10
) -> list[tuple[str, float]]:
    """Top words of a cluster by Jaccard distinctiveness.

    For word w and cluster c the score is |docs with w in c| / |docs with w
    union docs in c|.  Words absent from the cluster are excluded, so the
    list may be shorter than ``top_n``.  Ties break by word ascending.
    """
    if cluster not in table.rows:
        raise ValidationError(f"unknown cluster index {cluster}")
    size = table.cluster_sizes[cluster]
    scored = []
    for j, word in enumerate(table.columns):
        inside = int(table.counts[cluster, j])
        if inside == 0:
            continue
        df = int(table.column_totals[j])
        union = df + size - inside
        scored.append((word, inside / union))
    scored.sort(key=lambda item: (-item[1], item[0]))
    return scored[:top_n]


@dataclass(frozen=True, eq=False)
class CAResult:
    """Correspondence analysis of a contingency table.

    ``singular_values`` keep the full nontrivial spectrum (at most
    min(rows, cols) - 1 values), so total inertia equals their squared sum;
    coordinates are truncated to the requested dimensions.  The first
    nonzero row coordinate of every dimension is made positive so outputs
    are reproducible across runs and platforms.
    """

    row_labels: tuple[int, ...]
    col_labels: tuple[str, ...]
    singular_values: np.ndarray
    row_coords: np.ndarray  # (n_rows, dims), principal coordinates
    col_coords: np.ndarray  # (n_cols, dims), principal coordinates
    row_masses: np.ndarray
    col_masses: np.ndarray
    row_inertia: np.ndarray  # per-row fraction of total inertia
    col_inertia: np.ndarray
    total_inertia: float

    @property
    def explained(self) -> np.ndarray:
        """Per-dimension fractions of total inertia (zeros for a null table)."""
        if self.total_inertia <= 0.0:
            return np.zeros_like(self.singular_values)
        return self.singular_values**2 / self.total_inertia

    @property
    def dims(self) -> int:
        return self.row_coords.shape[1]


def correspondence_analysis(table: ContingencyTable, dims: int = 2) -> CAResult:
    """Decompose the table's standardized residuals.

    Residuals S = (P - r c') / sqrt(r c') are decomposed by SVD; principal
    coordinates are the mass-rescaled singular vectors scaled by the
    singular values.  Total inertia times the grand total equals the
    Pearson chi-square statistic of the table.
    """
    counts = np.asarray(table.counts, dtype=np.float64)
    if counts.shape[0] < 2 or counts.shape[1] < 2:
        raise ValidationError(
            f"correspondence analysis needs at least a 2x2 table, got {counts.shape}"
        )
    grand = counts.sum()
    if grand <= 0:
        raise ValidationError("correspondence analysis needs a nonzero table")
    p = counts / grand
    row_masses = p.sum(axis=1)
    col_masses = p.sum(axis=0)
    for i, mass in enumerate(row_masses):
        if mass <= 0.0:
            raise ValidationError(f"row {table.rows[i]} (cluster) has zero total")
    for j, mass in enumerate(col_masses):
        if mass <= 0.0:
            raise ValidationError(f"column {table.columns[j]!r} has zero total")
    expected = np.outer(row_masses, col_masses)
    residuals = (p - expected) / np.sqrt(expected)
    u, sv, vt = np.linalg.svd(residuals, full_matrices=False)
    rank = min(counts.shape) - 1  # the structural null direction is dropped
    u, sv, vt = u[:, :rank], sv[:rank], vt[:rank, :]
    row_coords_full = (u / np.sqrt(row_masses)[:, None]) * sv[None, :]
    for k in range(rank):
        nonzero = np.nonzero(np.abs(row_coords_full[:, k]) > 1e-12)[0]
        if nonzero.size and row_coords_full[nonzero[0], k] < 0:
            u[:, k] = -u[:, k]
            vt[k, :] = -vt[k, :]
            row_coords_full[:, k] = -row_coords_full[:, k]
    col_coords_full = (vt.T / np.sqrt(col_masses)[:, None]) * sv[None, :]
    total_inertia = float((residuals**2).sum())
    if total_inertia > 0.0:
        row_inertia = (residuals**2).sum(axis=1) / total_inertia
        col_inertia = (residuals**2).sum(axis=0) / total_inertia
    else:
        row_inertia = np.zeros(counts.shape[0])
        col_inertia = np.zeros(counts.shape[1])
    dims = max(1, min(dims, rank))
    return CAResult(
        row_labels=table.rows,
        col_labels=table.columns,
        singular_values=sv,
        row_coords=row_coords_full[:, :dims],
        col_coords=col_coords_full[:, :dims],
        row_masses=row_masses,
        col_masses=col_masses,
        row_inertia=row_inertia,
        col_inertia=col_inertia,
        total_inertia=total_inertia,
    )
