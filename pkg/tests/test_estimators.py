import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from frontmap.cluster import greedy_modularity_clustering
from frontmap.dense import find_dense_regions
from frontmap.errors import ValidationError
from frontmap.estimators import (
    CommunityClusterer,
    CorrespondenceAnalysis,
    DenseRegionFinder,
    DictionaryAnnotator,
)
from frontmap.annotate import annotate_document
from frontmap.synth import planted_clique_graph, planted_partition_graph

from conftest import make_doc


@pytest.fixture(scope="module")
def community_graph():
    graph, _ = planted_partition_graph([8, 8, 8], 0.7, 0.02, seed=1)
    return graph


class TestCommunityClusterer:
    def test_fit_exposes_sklearn_attributes(self, community_graph):
        est = CommunityClusterer().fit(community_graph)
        assert est.labels_.shape == (community_graph.n_nodes,)
        assert est.n_clusters_ == est.labels_.max() + 1
        reference = greedy_modularity_clustering(community_graph)
        assert est.modularity_ == reference.q
        assert list(est.labels_) == [
            reference.assignment[v] for v in community_graph.nodes
        ]

    def test_fit_predict(self, community_graph):
        est = CommunityClusterer()
        labels = est.fit_predict(community_graph)
        assert (labels == est.labels_).all()

    def test_accepts_nodes_edges_pair(self):
        est = CommunityClusterer().fit((["a", "b", "c"], [("a", "b"), ("b", "c")]))
        assert est.n_clusters_ >= 1

    def test_rejects_garbage(self):
        with pytest.raises(ValidationError):
            CommunityClusterer().fit(42)

    def test_get_params_clone(self):
        est = CommunityClusterer()
        assert est.get_params() == {}
        clone(est)  # must not raise


class TestCorrespondenceAnalysisEstimator:
    def counts(self):
        rng = np.random.RandomState(3)
        return rng.randint(1, 25, size=(4, 6))

    def test_fit_attributes(self):
        est = CorrespondenceAnalysis(n_components=2).fit(self.counts())
        assert est.row_coordinates_.shape == (4, 2)
        assert est.column_coordinates_.shape == (6, 2)
        assert est.singular_values_.shape == (3,)
        assert abs(est.explained_inertia_.sum() - 1.0) < 1e-9

    def test_transform_of_fit_rows_reproduces_coordinates(self):
        counts = self.counts()
        est = CorrespondenceAnalysis(n_components=2).fit(counts)
        projected = est.transform(counts)
        assert np.abs(projected - est.row_coordinates_).max() < 1e-9

    def test_fit_transform_equals_row_coordinates(self):
        counts = self.counts()
        est = CorrespondenceAnalysis(n_components=2)
        assert np.array_equal(est.fit_transform(counts), est.row_coordinates_)

    def test_not_fitted_error(self):
        with pytest.raises(NotFittedError):
            CorrespondenceAnalysis().transform(self.counts())

    def test_shape_validation(self):
        est = CorrespondenceAnalysis().fit(self.counts())
        with pytest.raises(ValidationError):
            est.transform(np.ones((2, 3)))

    def test_params_round_trip(self):
        est = CorrespondenceAnalysis(n_components=3)
        assert clone(est).get_params() == {"n_components": 3}


class TestDenseRegionFinder:
    def test_matches_functional_api(self):
        graph, planted = planted_clique_graph(seed=9)
        est = DenseRegionFinder().fit(graph)
        assert est.regions_ == find_dense_regions(graph)
        assert est.regions_[0].members == planted

    def test_fit_predict_labels(self):
        graph, planted = planted_clique_graph(seed=9)
        labels = DenseRegionFinder().fit_predict(graph)
        by_node = dict(zip(graph.nodes, labels))
        assert {by_node[v] for v in planted} == {0}
        assert sum(1 for v in labels if v == -1) == graph.n_nodes - len(
            [v for v in labels if v >= 0]
        )

    def test_params(self):
        est = DenseRegionFinder(vwp=0.1, haircut=False, neighborhood="open")
        params = est.get_params()
        assert params == {"vwp": 0.1, "haircut": False, "neighborhood": "open"}
        clone(est)


class TestDictionaryAnnotator:
    def test_presence_matrix_matches_annotate_document(self, vocab):
        docs = [
            make_doc("a", title="Ebola virus glycoprotein vaccine", abstract=""),
            make_doc("b", title="quarantine of each patient", abstract=""),
        ]
        est = DictionaryAnnotator(vocabulary=vocab).fit()
        matrix = est.transform(docs)
        assert matrix.shape == (2, len(vocab))
        for i, doc in enumerate(docs):
            expected = annotate_document(doc, vocab).terms
            hit = {est.term_ids_[j] for j in np.nonzero(matrix[i])[0]}
            assert hit == expected

    def test_feature_names_are_labels(self, vocab):
        est = DictionaryAnnotator(vocabulary=vocab).fit()
        names = est.get_feature_names_out()
        assert "Ebolavirus" in set(names)

    def test_annotate_returns_rates(self, vocab):
        est = DictionaryAnnotator(vocabulary=vocab).fit()
        [annotation] = est.annotate([make_doc("a", title="vaccine", abstract="")])
        assert annotation.clinical_rate == 1.0

    def test_missing_vocabulary_rejected(self):
        with pytest.raises(ValidationError):
            DictionaryAnnotator().fit()

    def test_not_fitted(self, vocab):
        est = DictionaryAnnotator(vocabulary=vocab)
        with pytest.raises(NotFittedError):
            est.transform([make_doc("a")])
