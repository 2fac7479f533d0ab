import json

import pytest
from hypothesis import given, settings, strategies as st

from frontmap.corpus import (
    DEFAULT_CLINICAL_ROOTS,
    Vocabulary,
    VocabularyTerm,
    load_corpus,
    load_vocabulary,
    save_corpus,
)
from frontmap.errors import IngestError, ValidationError, VocabularyError

from conftest import make_doc, make_corpus, write_jsonl


def doc_line(doc_id, kind="paper", refs=(), cited=0, **extra):
    obj = {
        "id": doc_id,
        "kind": kind,
        "title": f"Title {doc_id}",
        "abstract": "",
        "year": 2004,
        "times_cited_global": cited,
        "references": list(refs),
    }
    obj.update(extra)
    return obj


class TestLoadCorpus:
    def test_loads_752_documents(self, tmp_path):
        path = write_jsonl(
            tmp_path / "c.jsonl", [doc_line(f"D{i:04d}") for i in range(752)]
        )
        corpus = load_corpus(path, "paper")
        assert len(corpus) == 752

    def test_empty_file_gives_empty_corpus(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        assert len(load_corpus(path, "paper")) == 0

    def test_duplicate_id_reports_id_and_line(self, tmp_path):
        path = write_jsonl(tmp_path / "c.jsonl", [doc_line("A"), doc_line("A")])
        with pytest.raises(IngestError, match=r"line 2.*'A'"):
            load_corpus(path, "paper")

    def test_malformed_json_reports_line(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(json.dumps(doc_line("A")) + "\n{not json\n")
        with pytest.raises(IngestError, match="line 2"):
            load_corpus(path, "paper")

    def test_self_reference_rejected(self, tmp_path):
        path = write_jsonl(tmp_path / "c.jsonl", [doc_line("A", refs=["A"])])
        with pytest.raises(IngestError, match="references itself"):
            load_corpus(path, "paper")

    def test_kind_mismatch(self, tmp_path):
        path = write_jsonl(tmp_path / "c.jsonl", [doc_line("A", kind="patent_family")])
        with pytest.raises(IngestError, match="kind"):
            load_corpus(path, "paper")

    def test_missing_required_field(self, tmp_path):
        line = doc_line("A")
        del line["year"]
        path = write_jsonl(tmp_path / "c.jsonl", [line])
        with pytest.raises(IngestError, match="year"):
            load_corpus(path, "paper")

    def test_unknown_field_warns_but_loads(self, tmp_path, caplog):
        path = write_jsonl(tmp_path / "c.jsonl", [doc_line("A", wos_ut="X1")])
        with caplog.at_level("WARNING"):
            corpus = load_corpus(path, "paper")
        assert len(corpus) == 1
        assert any("wos_ut" in record.message for record in caplog.records)

    def test_external_references_are_retained(self, tmp_path):
        path = write_jsonl(tmp_path / "c.jsonl", [doc_line("A", refs=["ZZZ"])])
        corpus = load_corpus(path, "paper")
        assert corpus.by_id["A"].references == ("ZZZ",)


class TestCorpusInvariants:
    def test_negative_citations_rejected(self):
        with pytest.raises(ValidationError):
            make_doc("A", cited=-1)

    def test_duplicate_ids_rejected(self):
        with pytest.raises(ValidationError, match="duplicate"):
            make_corpus([make_doc("A"), make_doc("A")])

    def test_mixed_kinds_rejected(self):
        with pytest.raises(ValidationError):
            make_corpus([make_doc("A"), make_doc("B", kind="patent_family")])


_ids = st.lists(
    st.text(alphabet="abcdefgh", min_size=1, max_size=4), min_size=1,
    max_size=8, unique=True,
)


@given(ids=_ids, data=st.data())
@settings(max_examples=40, deadline=None)
def test_save_load_round_trip_is_identity(tmp_path_factory, ids, data):
    from frontmap.corpus import Author

    docs = []
    for doc_id in ids:
        others = [other for other in ids if other != doc_id]
        refs = (
            data.draw(st.lists(st.sampled_from(others + ["EXT1"]), max_size=3, unique=True))
            if others
            else []
        )
        country = data.draw(st.sampled_from([None, "US", "FR"]))
        docs.append(
            make_doc(
                doc_id,
                cited=data.draw(st.integers(min_value=0, max_value=50)),
                refs=refs,
                abstract=data.draw(st.text(alphabet=" abcXYZ09", max_size=20)),
                authors=[Author(name="A. Author", country=country)],
            )
        )
    corpus = make_corpus(docs)
    path = tmp_path_factory.mktemp("rt") / "c.jsonl"
    save_corpus(corpus, path)
    reloaded = load_corpus(path, "paper")
    assert reloaded == corpus  # provenance excluded from equality
    # and a second round trip is byte-stable
    path2 = tmp_path_factory.mktemp("rt") / "c2.jsonl"
    save_corpus(reloaded, path2)
    assert path.read_bytes() == path2.read_bytes()


def vocab_file(tmp_path, terms, clinical_roots=None):
    doc = {"terms": terms}
    if clinical_roots is not None:
        doc["clinical_roots"] = clinical_roots
    path = tmp_path / "vocab.json"
    path.write_text(json.dumps(doc))
    return path


class TestVocabulary:
    def test_chain_classifies_descendants_clinical(self, tmp_path):
        path = vocab_file(
            tmp_path,
            [
                {"term_id": "t", "label": "Therapeutics"},
                {"term_id": "v", "label": "Vaccines", "parents": ["t"]},
                {"term_id": "vx", "label": "Vaccination", "parents": ["v"]},
            ],
            clinical_roots=["Therapeutics"],
        )
        vocab = load_vocabulary(path)
        assert len(vocab) == 3
        assert vocab.clinical_term_ids == {"t", "v", "vx"}

    def test_cycle_reported(self, tmp_path):
        path = vocab_file(
            tmp_path,
            [
                {"term_id": "x", "label": "X", "parents": ["y"]},
                {"term_id": "y", "label": "Y", "parents": ["x"]},
            ],
            clinical_roots=[],
        )
        with pytest.raises(VocabularyError, match="cycle"):
            load_vocabulary(path)

    def test_unresolvable_clinical_root(self, tmp_path):
        path = vocab_file(
            tmp_path,
            [{"term_id": "a", "label": "Alpha"}],
            clinical_roots=["Beta"],
        )
        with pytest.raises(VocabularyError, match="Beta"):
            load_vocabulary(path)

    def test_unknown_parent(self, tmp_path):
        path = vocab_file(
            tmp_path,
            [{"term_id": "a", "label": "Alpha", "parents": ["ghost"]}],
            clinical_roots=[],
        )
        with pytest.raises(VocabularyError, match="ghost"):
            load_vocabulary(path)

    def test_bundled_fixture_loads_with_40_terms(self, vocab):
        assert len(vocab) == 40
        assert vocab.clinical_roots == DEFAULT_CLINICAL_ROOTS
        labels = {t.label for t in vocab.terms}
        assert {"Ebolavirus", "Disease Outbreaks", "Glycoproteins"} <= labels

    def test_disease_outbreaks_is_not_clinical_by_default(self, vocab):
        # walks to the epidemiology root, not to any clinical root
        assert "disease-outbreaks" not in vocab.clinical_term_ids
        assert vocab.root_labels_by_term["disease-outbreaks"] == {
            "Epidemiologic Phenomena"
        }

    def test_vaccination_is_clinical_via_therapeutics(self, vocab):
        # Vaccination -> Immunization -> {Therapeutics, Phenomena and Processes}
        assert "vaccination" in vocab.clinical_term_ids
        assert "Therapeutics" in vocab.root_labels_by_term["vaccination"]

    def test_every_term_reaches_a_root(self, vocab):
        assert all(vocab.root_labels_by_term[t.term_id] for t in vocab.terms)

    def test_classification_stable_under_synonym_addition(self, vocab):
        enriched = Vocabulary(
            terms=tuple(
                VocabularyTerm(
                    term_id=t.term_id,
                    label=t.label,
                    synonyms=t.synonyms + (f"zz {t.term_id}",),
                    parents=t.parents,
                    kind=t.kind,
                )
                for t in vocab.terms
            ),
            clinical_roots=vocab.clinical_roots,
        )
        assert enriched.clinical_term_ids == vocab.clinical_term_ids
