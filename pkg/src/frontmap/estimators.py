"""Scikit-learn style estimators wrapping the core algorithms.

These follow the sklearn contract (``get_params``/``set_params``
inherited from ``BaseEstimator``, ``fit`` returning ``self``, fitted
attributes with trailing underscores) so the algorithms compose with
pipelines, grid search, and ``clone``.  The functional API in the sibling
modules remains the primary interface for the mapping pipeline itself.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .cluster import greedy_modularity_clustering
from .corpus import Vocabulary
from .annotate import annotate_document
from .dense import find_dense_regions, vertex_weights
from .errors import ValidationError
from .textmine import correspondence_analysis
from .validation import check_citation_graph, check_contingency, check_documents


class CommunityClusterer(BaseEstimator):
    """Greedy modularity community detection over a citation graph.

    After ``fit``, ``labels_`` holds one cluster index per node of the
    graph's sorted node tuple; cluster 0 is the largest community.
    """

    def fit(self, X, y=None):
        graph = check_citation_graph(X)
        partition = greedy_modularity_clustering(graph)
        self.graph_ = graph
        self.partition_ = partition
        self.labels_ = np.array(
            [partition.assignment[node] for node in graph.nodes], dtype=np.intp
        )
        self.modularity_ = partition.q
        self.n_clusters_ = partition.n_clusters
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_


class CorrespondenceAnalysis(BaseEstimator, TransformerMixin):
    """Correspondence analysis of a contingency table.

    Parameters
    ----------
    n_components : int, default=2
        Dimensions kept for coordinates (capped at min(rows, cols) - 1).
    """

    def __init__(self, n_components=2):
        self.n_components = n_components

    def fit(self, X, y=None):
        table = check_contingency(X)
        result = correspondence_analysis(table, dims=self.n_components)
        self.result_ = result
        self.row_coordinates_ = result.row_coords
        self.column_coordinates_ = result.col_coords
        self.singular_values_ = result.singular_values
        self.explained_inertia_ = result.explained
        self.total_inertia_ = result.total_inertia
        self.row_masses_ = result.row_masses
        self.column_masses_ = result.col_masses
        self.n_features_in_ = result.col_coords.shape[0]
        return self

    def transform(self, X):
        """Project rows (profiles over the fitted columns) into the space.

        Rows of the fitted table map exactly onto ``row_coordinates_``.
        """
        check_is_fitted(self, "result_")
        counts = np.asarray(X, dtype=np.float64)
        if counts.ndim != 2 or counts.shape[1] != self.n_features_in_:
            raise ValidationError(
                f"expected shape (*, {self.n_features_in_}), got {counts.shape}"
            )
        totals = counts.sum(axis=1)
        if np.any(totals <= 0):
            raise ValidationError("every row must have a positive total")
        profiles = counts / totals[:, None]
        result = self.result_
        sv = result.singular_values[: result.dims]
        standard = np.zeros_like(result.col_coords)
        positive = sv > 1e-12
        standard[:, positive] = result.col_coords[:, positive] / sv[positive]
        return profiles @ standard

    def fit_transform(self, X, y=None):
        return self.fit(X).row_coordinates_


class DenseRegionFinder(BaseEstimator):
    """MCODE-style dense-region detection.

    Parameters
    ----------
    vwp : float, default=0.2
        Vertex weight percentage: growth admits neighbors whose weight is
        at least ``seed_weight * (1 - vwp)``.
    haircut : bool, default=True
        Drop region members with fewer than two internal edges.
    neighborhood : {"closed", "open"}, default="closed"
        Neighborhood used for the k-core vertex weighting.
    """

    def __init__(self, vwp=0.2, haircut=True, neighborhood="closed"):
        self.vwp = vwp
        self.haircut = haircut
        self.neighborhood = neighborhood

    def fit(self, X, y=None):
        graph = check_citation_graph(X)
        weights = vertex_weights(graph, neighborhood=self.neighborhood)
        self.graph_ = graph
        self.weights_ = weights
        self.regions_ = find_dense_regions(
            graph, vwp=self.vwp, haircut=self.haircut, weights=weights
        )
        return self

    def fit_predict(self, X, y=None):
        """Region index per node in sorted node order; -1 outside regions."""
        self.fit(X)
        labels = {node: -1 for node in self.graph_.nodes}
        for index, region in enumerate(self.regions_):
            for node in region.members:
                labels[node] = index
        return np.array([labels[node] for node in self.graph_.nodes], dtype=np.intp)


class DictionaryAnnotator(BaseEstimator, TransformerMixin):
    """Vocabulary term presence matrix for documents.

    Parameters
    ----------
    vocabulary : Vocabulary
        The controlled vocabulary to match against.
    """

    def __init__(self, vocabulary=None):
        self.vocabulary = vocabulary

    def fit(self, X=None, y=None):
        if not isinstance(self.vocabulary, Vocabulary):
            raise ValidationError("DictionaryAnnotator needs a Vocabulary instance")
        self.term_ids_ = tuple(sorted(t.term_id for t in self.vocabulary.terms))
        self.feature_names_out_ = np.array(
            [self.vocabulary.by_id[t].label for t in self.term_ids_], dtype=object
        )
        return self

    def transform(self, X):
        check_is_fitted(self, "term_ids_")
        docs = check_documents(X)
        index = {term_id: j for j, term_id in enumerate(self.term_ids_)}
        matrix = np.zeros((len(docs), len(self.term_ids_)), dtype=np.int8)
        for i, doc in enumerate(docs):
            annotation = annotate_document(doc, self.vocabulary)
            for term_id in annotation.terms:
                matrix[i, index[term_id]] = 1
        return matrix

    def annotate(self, X):
        """Full annotations (with clinical rates) instead of the 0/1 matrix."""
        check_is_fitted(self, "term_ids_")
        return [annotate_document(doc, self.vocabulary) for doc in check_documents(X)]

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "feature_names_out_")
        return self.feature_names_out_
