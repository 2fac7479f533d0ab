import random

import pytest
from hypothesis import given, settings, strategies as st

from frontmap.annotate import (
    DocumentAnnotation,
    annotate_all,
    annotate_document,
    cluster_term_table,
    mean_clinical_rate,
)
from frontmap.corpus import Vocabulary, VocabularyTerm
from frontmap.errors import ValidationError

from conftest import make_doc


def small_vocab():
    return Vocabulary(
        terms=(
            VocabularyTerm(term_id="chem", label="Chemicals"),
            VocabularyTerm(term_id="ther", label="Therapeutics"),
            VocabularyTerm(
                term_id="glyco",
                label="Glycoproteins",
                synonyms=("glycoprotein",),
                parents=("chem",),
            ),
            VocabularyTerm(
                term_id="vacc",
                label="Vaccines",
                synonyms=("vaccine",),
                parents=("ther",),
            ),
        ),
        clinical_roots=frozenset({"Therapeutics"}),
    )


class TestAnnotateDocument:
    def test_hand_walked_example(self):
        doc = make_doc("d1", title="Ebola virus glycoprotein vaccine", abstract="")
        annotation = annotate_document(doc, small_vocab())
        assert annotation.terms == {"glyco", "vacc"}
        assert annotation.clinical_terms == {"vacc"}
        assert annotation.clinical_rate == 0.5

    def test_empty_text(self):
        doc = make_doc("d1", title="", abstract="")
        annotation = annotate_document(doc, small_vocab())
        assert annotation.terms == frozenset()
        assert annotation.clinical_rate == 0.0

    def test_longest_match_beats_substring(self):
        vocab = Vocabulary(
            terms=(
                VocabularyTerm(term_id="vx", label="Vaccination"),
                VocabularyTerm(term_id="nat", label="Nation"),
            ),
            clinical_roots=frozenset(),
        )
        doc = make_doc("d1", title="mass vaccination drive", abstract="")
        annotation = annotate_document(doc, vocab)
        assert annotation.terms == {"vx"}

    def test_longer_phrase_suppresses_inner_match(self):
        vocab = Vocabulary(
            terms=(
                VocabularyTerm(term_id="hf", label="Hemorrhagic Fever, Ebola",
                               synonyms=("ebola hemorrhagic fever",)),
                VocabularyTerm(term_id="fever", label="Fever"),
            ),
            clinical_roots=frozenset(),
        )
        doc = make_doc("d1", title="ebola hemorrhagic fever cases", abstract="")
        assert annotate_document(doc, vocab).terms == {"hf"}
        # a separate later occurrence still matches the shorter term
        doc2 = make_doc("d2", title="ebola hemorrhagic fever with fever", abstract="")
        assert annotate_document(doc2, vocab).terms == {"hf", "fever"}

    def test_case_and_whitespace_insensitive(self):
        vocab = small_vocab()
        a = annotate_document(make_doc("x", title="GLYCOPROTEIN   vaccine", abstract=""), vocab)
        b = annotate_document(make_doc("y", title="glycoprotein vaccine", abstract=""), vocab)
        assert a.terms == b.terms

    def test_presence_not_frequency(self):
        doc = make_doc("d", title="vaccine vaccine vaccine", abstract="vaccine")
        annotation = annotate_document(doc, small_vocab())
        assert annotation.terms == {"vacc"}

    def test_title_and_abstract_both_scanned(self):
        doc = make_doc("d", title="glycoprotein study", abstract="a vaccine trial")
        assert annotate_document(doc, small_vocab()).terms == {"glyco", "vacc"}

    def test_unrelated_term_addition_never_removes_matches(self):
        vocab = small_vocab()
        doc = make_doc("d", title="glycoprotein vaccine", abstract="")
        before = annotate_document(doc, vocab).terms
        extended = Vocabulary(
            terms=vocab.terms
            + (VocabularyTerm(term_id="zz", label="Zebrafish", parents=("chem",)),),
            clinical_roots=vocab.clinical_roots,
        )
        after = annotate_document(doc, extended).terms
        assert before <= after

    def test_all_clinical_rate_is_one(self):
        doc = make_doc("d", title="vaccine", abstract="")
        assert annotate_document(doc, small_vocab()).clinical_rate == 1.0

    @given(text=st.text(alphabet=" abcdefgh-XYZ繁09", max_size=80))
    @settings(max_examples=60, deadline=None)
    def test_rate_always_in_unit_interval(self, text):
        doc = make_doc("d", title=text, abstract=text[::-1])
        annotation = annotate_document(doc, small_vocab())
        assert 0.0 <= annotation.clinical_rate <= 1.0
        assert annotation.clinical_terms <= annotation.terms


class TestAnnotateAll:
    def test_sorted_by_doc_id_and_warns_on_zero_match(self, caplog):
        vocab = small_vocab()
        docs = [
            make_doc("b", title="vaccine", abstract=""),
            make_doc("a", title="nothing here", abstract=""),
        ]
        with caplog.at_level("WARNING"):
            annotations = annotate_all(docs, vocab)
        assert [a.doc_id for a in annotations] == ["a", "b"]
        assert any("'a'" in r.message for r in caplog.records)


class TestMeanClinicalRate:
    def test_simple_mean(self):
        anns = [
            DocumentAnnotation("a", frozenset({"x", "y"}), frozenset()),
            DocumentAnnotation("b", frozenset({"x", "y"}), frozenset({"x"})),
        ]
        assert mean_clinical_rate(anns) == 0.25

    def test_all_zero(self):
        anns = [DocumentAnnotation("a", frozenset(), frozenset())] * 3
        assert mean_clinical_rate(anns) == 0.0

    def test_empty_cluster_rejected(self):
        with pytest.raises(ValidationError):
            mean_clinical_rate([])


class TestClusterTermTable:
    def test_unanimous_term_tops_table(self):
        vocab = small_vocab()
        docs = [make_doc(f"d{i}", title="glycoprotein", abstract="") for i in range(33)]
        annotations = [annotate_document(d, vocab) for d in docs]
        table = cluster_term_table(annotations, vocab, cutoff=1, cluster=0)
        assert table.rows[0] == ("Glycoproteins", 33)

    def test_cutoff_above_max_gives_empty_table(self):
        vocab = small_vocab()
        annotations = [
            annotate_document(make_doc("d", title="vaccine", abstract=""), vocab)
        ]
        table = cluster_term_table(annotations, vocab, cutoff=5)
        assert table.rows == ()

    def test_sorting_count_desc_then_label_asc(self):
        vocab = Vocabulary(
            terms=(
                VocabularyTerm(term_id="a", label="Alpha"),
                VocabularyTerm(term_id="b", label="Beta"),
                VocabularyTerm(term_id="c", label="Ceta"),
                VocabularyTerm(term_id="d", label="Delta"),
            ),
            clinical_roots=frozenset(),
        )
        def ann(doc_id, terms):
            return DocumentAnnotation(doc_id, frozenset(terms), frozenset())
        annotations = (
            [ann(f"p{i}", {"a"}) for i in range(5)]
            + [ann(f"q{i}", {"b", "c"}) for i in range(3)]
            + [ann("r0", {"d"})]
        )
        table = cluster_term_table(annotations, vocab, cutoff=2)
        assert table.rows == (("Alpha", 5), ("Beta", 3), ("Ceta", 3))

    @given(seed=st.integers(min_value=0, max_value=2_000))
    @settings(max_examples=40, deadline=None)
    def test_counts_match_brute_force_recount(self, seed):
        vocab = small_vocab()
        rng = random.Random(seed)
        term_ids = [t.term_id for t in vocab.terms]
        annotations = [
            DocumentAnnotation(
                f"d{i}",
                frozenset(rng.sample(term_ids, rng.randint(0, 4))),
                frozenset(),
            )
            for i in range(12)
        ]
        table = cluster_term_table(annotations, vocab, cutoff=1)
        for label, count in table.rows:
            term_id = next(t.term_id for t in vocab.terms if t.label == label)
            brute = sum(1 for a in annotations if term_id in a.terms)
            assert count == brute
        assert all(count <= len(annotations) for _, count in table.rows)
