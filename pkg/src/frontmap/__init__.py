"""frontmap: map research fronts in citation networks.

Builds citation networks over the most-cited documents of a corpus,
clusters them by modularity, annotates them against a controlled
vocabulary with a clinical-term rate, extracts distinctive words by
Jaccard index, runs correspondence analysis, aggregates inter-cluster
citation flows, and detects dense regions in patent-family networks.
"""

from .__about__ import __version__
from .annotate import (
    ClusterTermTable,
    DocumentAnnotation,
    annotate_all,
    annotate_document,
    cluster_term_table,
    mean_clinical_rate,
)
from .cluster import (
    ClusterGraph,
    Partition,
    aggregate_clusters,
    brute_force_best_partition,
    greedy_modularity_clustering,
    modularity,
)
from .corpus import (
    DEFAULT_CLINICAL_ROOTS,
    Author,
    Corpus,
    DocumentRecord,
    Vocabulary,
    VocabularyTerm,
    load_corpus,
    load_vocabulary,
    save_corpus,
)
from .dense import (
    DenseRegion,
    find_dense_regions,
    leading_assignees,
    vertex_weights,
)
from .errors import (
    FrontmapError,
    IngestError,
    ValidationError,
    VerifyError,
    VocabularyError,
)
from .estimators import (
    CommunityClusterer,
    CorrespondenceAnalysis,
    DenseRegionFinder,
    DictionaryAnnotator,
)
from .netbuild import (
    CitationGraph,
    SelectionReport,
    build_citation_network,
    country_counts,
    in_degree,
    select_top_cited,
)
from .report import (
    NodeStyle,
    RunConfig,
    RunReport,
    color_for_rate,
    export_dot,
    export_graphml,
    import_graphml,
    layout_spring,
    node_styles,
    run_pipeline,
    verify_run,
)
from .textmine import (
    CAResult,
    ContingencyTable,
    TokenizedDocument,
    build_contingency,
    correspondence_analysis,
    default_stopwords,
    distinctive_words,
    load_stopwords,
    tokenize,
)

__all__ = [
    "__version__",
    "Author",
    "CAResult",
    "CitationGraph",
    "ClusterGraph",
    "ClusterTermTable",
    "CommunityClusterer",
    "ContingencyTable",
    "CorrespondenceAnalysis",
    "Corpus",
    "DEFAULT_CLINICAL_ROOTS",
    "DenseRegion",
    "DenseRegionFinder",
    "DictionaryAnnotator",
    "DocumentAnnotation",
    "DocumentRecord",
    "FrontmapError",
    "IngestError",
    "NodeStyle",
    "Partition",
    "RunConfig",
    "RunReport",
    "SelectionReport",
    "TokenizedDocument",
    "ValidationError",
    "VerifyError",
    "Vocabulary",
    "VocabularyError",
    "VocabularyTerm",
    "aggregate_clusters",
    "annotate_all",
    "annotate_document",
    "brute_force_best_partition",
    "build_citation_network",
    "build_contingency",
    "cluster_term_table",
    "color_for_rate",
    "correspondence_analysis",
    "country_counts",
    "default_stopwords",
    "distinctive_words",
    "export_dot",
    "export_graphml",
    "find_dense_regions",
    "greedy_modularity_clustering",
    "import_graphml",
    "in_degree",
    "layout_spring",
    "leading_assignees",
    "load_corpus",
    "load_stopwords",
    "load_vocabulary",
    "mean_clinical_rate",
    "modularity",
    "node_styles",
    "run_pipeline",
    "save_corpus",
    "select_top_cited",
    "tokenize",
    "verify_run",
    "vertex_weights",
]
