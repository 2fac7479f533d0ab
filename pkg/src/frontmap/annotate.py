"""Dictionary-based semantic annotation and clinical-term rates.

Titles and abstracts are scanned against the vocabulary's labels and
synonyms with a case-insensitive, longest-match-first rule at word
boundaries; shorter matches inside a chosen span are suppressed.  Terms are
recorded as presence (once per document), matching the document-frequency
semantics of the per-cluster term tables.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import DocumentRecord, Vocabulary, words_of
from .errors import ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DocumentAnnotation:
    """Matched vocabulary terms for one document, with the clinical rate.

    ``clinical_rate`` is |clinical terms| / |terms|, or 0 for documents
    without any matched term.
    """

    doc_id: str
    terms: frozenset[str]
    clinical_terms: frozenset[str]

    @property
    def clinical_rate(self) -> float:
        if not self.terms:
            return 0.0
        return len(self.clinical_terms) / len(self.terms)


@dataclass(frozen=True)
class ClusterTermTable:
    """Document counts per term within one cluster (Table-1 style rows)."""

    cluster: int
    rows: tuple[tuple[str, int], ...]  # (term label, document count)
    cutoff: int


def annotate_document(doc: DocumentRecord, vocab: Vocabulary) -> DocumentAnnotation:
    """Scan title + abstract for vocabulary terms.

    Longest match wins at each position; the scan resumes after the matched
    span, so shorter matches inside it never fire.  A matched term is
    clinical when one of its ancestor roots is in the vocabulary's clinical
    root set.
    """
    words = words_of(doc.title + " " + doc.abstract)
    index = vocab.match_index
    max_len = vocab.max_phrase_words
    matched: set[str] = set()
    i = 0
    n = len(words)
    while i < n:
        for length in range(min(max_len, n - i), 0, -1):
            ids = index.get(tuple(words[i : i + length]))
            if ids:
                matched.update(ids)
                i += length
                break
        else:
            i += 1
    clinical = frozenset(matched & vocab.clinical_term_ids)
    return DocumentAnnotation(
        doc_id=doc.id, terms=frozenset(matched), clinical_terms=clinical
    )


def annotate_all(
    docs: Iterable[DocumentRecord], vocab: Vocabulary
) -> list[DocumentAnnotation]:
    """Annotate documents, ordered by id; zero-match documents are logged."""
    annotations = sorted(
        (annotate_document(doc, vocab) for doc in docs), key=lambda a: a.doc_id
    )
    for annotation in annotations:
        if not annotation.terms:
            logger.warning(
                "document %r matched no vocabulary terms; clinical rate is 0",
                annotation.doc_id,
            )
    return annotations


def mean_clinical_rate(annotations: Sequence[DocumentAnnotation]) -> float:
    """Arithmetic mean of member clinical rates."""
    if not annotations:
        raise ValidationError("cannot average clinical rates of an empty cluster")
    return sum(a.clinical_rate for a in annotations) / len(annotations)


def cluster_term_table(
    annotations: Sequence[DocumentAnnotation],
    vocab: Vocabulary,
    cutoff: int,
    cluster: int = 0,
) -> ClusterTermTable:
    """Count documents per matched term and keep rows with count >= cutoff.

    Rows are sorted by count descending, then label ascending (term id as a
    final tie-break when two systems share a label).
    """
    counts: dict[str, int] = {}
    for annotation in annotations:
        for term_id in annotation.terms:
            counts[term_id] = counts.get(term_id, 0) + 1
    ranked = sorted(
        (
            (vocab.by_id[term_id].label, count, term_id)
            for term_id, count in counts.items()
            if count >= cutoff
        ),
        key=lambda row: (-row[1], row[0], row[2]),
    )
    return ClusterTermTable(
        cluster=cluster,
        rows=tuple((label, count) for label, count, _ in ranked),
        cutoff=cutoff,
    )
