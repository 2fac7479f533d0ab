"""Document corpora and controlled vocabularies: data model and file ingest.

Corpora are UTF-8 JSON-Lines files, one document object per line, with
snake_case field names matching :class:`DocumentRecord`.  Vocabularies are
single JSON documents with top-level keys ``terms`` and ``clinical_roots``.
Loaded values are immutable and safe to share across threads.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .errors import IngestError, ValidationError, VocabularyError

logger = logging.getLogger(__name__)

KIND_PAPER = "paper"
KIND_PATENT = "patent_family"
KINDS = (KIND_PAPER, KIND_PATENT)

#: Root categories whose descendants count as clinical terms unless overridden.
DEFAULT_CLINICAL_ROOTS = frozenset(
    {
        "Diagnosis",
        "Therapeutics",
        "Surgical Procedures, Operative",
        "Named Groups",
        "Persons",
        "Health Care",
    }
)

# Maximal letter/digit runs; underscores and punctuation split words.
_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)


def words_of(text: str) -> list[str]:
    """Split text into lowercased word tokens (maximal alphanumeric runs)."""
    return _WORD_RE.findall(text.lower())


@dataclass(frozen=True)
class Author:
    name: str
    country: str | None = None


@dataclass(frozen=True)
class DocumentRecord:
    """One paper or patent family.

    ``references`` hold document ids; they may point outside the corpus and
    are only matched when the internal citation network is built.
    """

    id: str
    kind: str
    title: str
    year: int
    abstract: str = ""
    authors: tuple[Author, ...] = ()
    assignees: tuple[str, ...] = ()
    venue: str | None = None
    times_cited_global: int = 0
    references: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.id:
            raise ValidationError("document id must be a nonempty string")
        if self.kind not in KINDS:
            raise ValidationError(
                f"document {self.id!r}: kind must be one of {KINDS}, got {self.kind!r}"
            )
        if self.times_cited_global < 0:
            raise ValidationError(
                f"document {self.id!r}: times_cited_global must be >= 0"
            )
        if self.id in self.references:
            raise ValidationError(f"document {self.id!r} references itself")


@dataclass(frozen=True)
class Corpus:
    """A homogeneous, validated collection of documents.

    ``provenance`` is a free-text source note and is excluded from equality,
    so a corpus round-tripped through disk compares equal field-for-field.
    """

    documents: tuple[DocumentRecord, ...]
    kind: str
    provenance: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValidationError(f"corpus kind must be one of {KINDS}")
        seen: set[str] = set()
        for doc in self.documents:
            if doc.kind != self.kind:
                raise ValidationError(
                    f"document {doc.id!r} has kind {doc.kind!r}, corpus is {self.kind!r}"
                )
            if doc.id in seen:
                raise ValidationError(f"duplicate document id {doc.id!r}")
            seen.add(doc.id)

    def __len__(self) -> int:
        return len(self.documents)

    @cached_property
    def by_id(self) -> Mapping[str, DocumentRecord]:
        return {doc.id: doc for doc in self.documents}

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(doc.id for doc in self.documents)


@dataclass(frozen=True)
class VocabularyTerm:
    term_id: str
    label: str
    synonyms: tuple[str, ...] = ()
    parents: tuple[str, ...] = ()
    kind: str = "mesh_like"  # or "go_like"


@dataclass(frozen=True)
class Vocabulary:
    """Poly-hierarchical controlled vocabulary with a clinical root set.

    Parent links must form a DAG.  A term is *clinical* when at least one
    root reachable through its parent links carries a label listed in
    ``clinical_roots``; synonyms affect matching only, never classification.
    """

    terms: tuple[VocabularyTerm, ...]
    clinical_roots: frozenset[str] = DEFAULT_CLINICAL_ROOTS

    def __post_init__(self) -> None:
        by_id: dict[str, VocabularyTerm] = {}
        for term in self.terms:
            if term.term_id in by_id:
                raise VocabularyError(f"duplicate term_id {term.term_id!r}")
            by_id[term.term_id] = term
        for term in self.terms:
            for parent in term.parents:
                if parent not in by_id:
                    raise VocabularyError(
                        f"term {term.term_id!r} lists unknown parent {parent!r}"
                    )
        self._check_acyclic(by_id)
        root_labels = {t.label for t in self.terms if not t.parents}
        for root in sorted(self.clinical_roots):
            if root not in root_labels:
                raise VocabularyError(
                    f"clinical root {root!r} does not match any root term label"
                )

    def _check_acyclic(self, by_id: Mapping[str, VocabularyTerm]) -> None:
        # Iterative DFS with a path stack so one concrete cycle can be reported.
        state: dict[str, int] = {}  # 0 = on stack, 1 = done
        for start in by_id:
            if start in state:
                continue
            stack: list[tuple[str, Iterable[str]]] = [
                (start, iter(by_id[start].parents))
            ]
            state[start] = 0
            path = [start]
            while stack:
                node, parents = stack[-1]
                parent = next(parents, None)
                if parent is None:
                    stack.pop()
                    path.pop()
                    state[node] = 1
                    continue
                if state.get(parent) == 0:
                    cycle = path[path.index(parent):] + [parent]
                    raise VocabularyError(
                        "cycle in parent links: " + " -> ".join(cycle)
                    )
                if parent not in state:
                    state[parent] = 0
                    path.append(parent)
                    stack.append((parent, iter(by_id[parent].parents)))

    def __len__(self) -> int:
        return len(self.terms)

    @cached_property
    def by_id(self) -> Mapping[str, VocabularyTerm]:
        return {t.term_id: t for t in self.terms}

    @cached_property
    def root_labels_by_term(self) -> Mapping[str, frozenset[str]]:
        """Labels of all roots reachable from each term (the term itself if a root)."""
        result: dict[str, frozenset[str]] = {}

        def roots_of(term_id: str) -> frozenset[str]:
            if term_id in result:
                return result[term_id]
            term = self.by_id[term_id]
            if not term.parents:
                labels = frozenset({term.label})
            else:
                labels = frozenset().union(*(roots_of(p) for p in term.parents))
            result[term_id] = labels
            return labels

        for term in self.terms:
            roots_of(term.term_id)
        return result

    @cached_property
    def clinical_term_ids(self) -> frozenset[str]:
        return frozenset(
            t.term_id
            for t in self.terms
            if self.root_labels_by_term[t.term_id] & self.clinical_roots
        )

    @cached_property
    def match_index(self) -> Mapping[tuple[str, ...], frozenset[str]]:
        """Lowercased word-token sequences of labels and synonyms -> term ids."""
        index: dict[tuple[str, ...], set[str]] = {}
        for term in self.terms:
            for phrase in (term.label, *term.synonyms):
                key = tuple(words_of(phrase))
                if key:
                    index.setdefault(key, set()).add(term.term_id)
        return {key: frozenset(ids) for key, ids in index.items()}

    @cached_property
    def max_phrase_words(self) -> int:
        return max((len(key) for key in self.match_index), default=0)


# --- JSON (de)serialization -------------------------------------------------

_DOC_FIELDS = (
    "id",
    "kind",
    "title",
    "abstract",
    "year",
    "authors",
    "assignees",
    "venue",
    "times_cited_global",
    "references",
)
_REQUIRED_DOC_FIELDS = ("id", "kind", "title", "year")


def _require_int(value: object, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{what} must be an integer, got {value!r}")
    return value


def _require_str(value: object, what: str) -> str:
    if not isinstance(value, str):
        raise ValidationError(f"{what} must be a string, got {value!r}")
    return value


def document_from_dict(obj: Mapping[str, object]) -> DocumentRecord:
    """Build a DocumentRecord from a parsed JSON object."""
    if not isinstance(obj, Mapping):
        raise ValidationError("document line must be a JSON object")
    for name in _REQUIRED_DOC_FIELDS:
        if name not in obj:
            raise ValidationError(f"missing required field {name!r}")
    authors = []
    for entry in obj.get("authors") or ():
        if not isinstance(entry, Mapping) or "name" not in entry:
            raise ValidationError(f"author entries need a 'name' field, got {entry!r}")
        country = entry.get("country")
        if country is not None:
            country = _require_str(country, "author country")
        authors.append(Author(name=_require_str(entry["name"], "author name"), country=country))
    venue = obj.get("venue")
    if venue is not None:
        venue = _require_str(venue, "venue")
    return DocumentRecord(
        id=_require_str(obj["id"], "id"),
        kind=_require_str(obj["kind"], "kind"),
        title=_require_str(obj["title"], "title"),
        abstract=_require_str(obj.get("abstract", ""), "abstract"),
        year=_require_int(obj["year"], "year"),
        authors=tuple(authors),
        assignees=tuple(_require_str(a, "assignee") for a in obj.get("assignees") or ()),
        venue=venue,
        times_cited_global=_require_int(obj.get("times_cited_global", 0), "times_cited_global"),
        references=tuple(_require_str(r, "reference id") for r in obj.get("references") or ()),
    )


def document_to_dict(doc: DocumentRecord) -> dict[str, object]:
    return {
        "id": doc.id,
        "kind": doc.kind,
        "title": doc.title,
        "abstract": doc.abstract,
        "year": doc.year,
        "authors": [
            {"name": a.name, "country": a.country} for a in doc.authors
        ],
        "assignees": list(doc.assignees),
        "venue": doc.venue,
        "times_cited_global": doc.times_cited_global,
        "references": list(doc.references),
    }


def load_corpus(path, kind: str) -> Corpus:
    """Read a JSON-Lines corpus file and validate it against ``kind``.

    Reference ids pointing outside the corpus are retained; the network
    builder performs the internal-edge filtering.  Unknown fields are
    ignored with a warning.  Errors report the offending line number.
    """
    if kind not in KINDS:
        raise ValidationError(f"corpus kind must be one of {KINDS}, got {kind!r}")
    documents: list[DocumentRecord] = []
    seen: dict[str, int] = {}
    unknown_fields: dict[str, int] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise IngestError(f"{path}: line {line_no}: malformed JSON: {exc}") from exc
            if isinstance(obj, Mapping):
                for key in obj:
                    if key not in _DOC_FIELDS:
                        unknown_fields.setdefault(key, line_no)
            try:
                doc = document_from_dict(obj)
            except ValidationError as exc:
                raise IngestError(f"{path}: line {line_no}: {exc}") from exc
            if doc.kind != kind:
                raise IngestError(
                    f"{path}: line {line_no}: document {doc.id!r} has kind "
                    f"{doc.kind!r}, expected {kind!r}"
                )
            if doc.id in seen:
                raise IngestError(
                    f"{path}: line {line_no}: duplicate id {doc.id!r} "
                    f"(first seen on line {seen[doc.id]})"
                )
            seen[doc.id] = line_no
            documents.append(doc)
    for name, line_no in sorted(unknown_fields.items()):
        logger.warning(
            "%s: ignoring unknown field %r (first on line %d)", path, name, line_no
        )
    return Corpus(documents=tuple(documents), kind=kind, provenance=str(path))


def save_corpus(corpus: Corpus, path) -> None:
    """Write a corpus back to JSON-Lines (inverse of :func:`load_corpus`)."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for doc in corpus.documents:
            handle.write(json.dumps(document_to_dict(doc), sort_keys=True))
            handle.write("\n")


def load_vocabulary(path) -> Vocabulary:
    """Read a vocabulary JSON file and validate hierarchy and roots."""
    with open(path, "r", encoding="utf-8") as handle:
        try:
            obj = json.load(handle)
        except json.JSONDecodeError as exc:
            raise IngestError(f"{path}: malformed JSON: {exc}") from exc
    if not isinstance(obj, Mapping) or "terms" not in obj:
        raise IngestError(f"{path}: vocabulary file needs a top-level 'terms' list")
    terms = []
    for entry in obj["terms"]:
        if not isinstance(entry, Mapping) or "term_id" not in entry or "label" not in entry:
            raise IngestError(
                f"{path}: every term needs 'term_id' and 'label', got {entry!r}"
            )
        kind = entry.get("kind", "mesh_like")
        if kind not in ("mesh_like", "go_like"):
            raise IngestError(
                f"{path}: term {entry['term_id']!r}: kind must be 'mesh_like' "
                f"or 'go_like', got {kind!r}"
            )
        terms.append(
            VocabularyTerm(
                term_id=_require_str(entry["term_id"], "term_id"),
                label=_require_str(entry["label"], "label"),
                synonyms=tuple(entry.get("synonyms") or ()),
                parents=tuple(entry.get("parents") or ()),
                kind=kind,
            )
        )
    roots = obj.get("clinical_roots")
    clinical_roots = DEFAULT_CLINICAL_ROOTS if roots is None else frozenset(roots)
    try:
        return Vocabulary(terms=tuple(terms), clinical_roots=clinical_roots)
    except VocabularyError as exc:
        raise VocabularyError(f"{path}: {exc}") from exc
