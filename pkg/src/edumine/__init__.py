"""edumine: data-mining toolkit for student cohorts.

Discovers strongly related subject pairs (confidence-filtered
association rules scored with Pearson's r), classifies students into
performance categories with an ID3 decision tree, and clusters students
by attendance and marks with DBSCAN. A CLI drives the CSV-in,
CSV/JSON/DOT-out pipelines deterministically.
"""

__version__ = "0.1.0"

from .association import (
    ItemsetSupport,
    Rule,
    Transaction,
    apriori,
    average_pass_rate_minconf,
    build_transactions,
    candidate_pairs,
    generate_rules,
)
from .clustering import (
    BORDER,
    CORE,
    NOISE,
    ClusterAssignment,
    DbscanClusterer,
    Point,
    dbscan,
    eps_neighborhood,
    normalize_minmax,
)
from .cohort import (
    ClassificationRow,
    ClusterRow,
    CohortDataset,
    DiscretizationPolicy,
    MarksRecord,
    PassTable,
    derive_pass_table,
    discretize_performance,
    load_classification,
    load_clustering,
    load_marks,
    load_passes,
    write_marks,
)
from .correlation import (
    CorrelationReport,
    PairedSample,
    build_paired_sample,
    pearson_r,
    strongly_related,
)
from .decision_tree import (
    DecisionNode,
    Example,
    GainEntry,
    ID3Classifier,
    Leaf,
    Split,
    entropy,
    export_dot,
    gain_table,
    id3_train,
    information_gain,
    predict,
)
from .synth import (
    PlantedBlob,
    PlantedPair,
    SynthResult,
    SynthSpec,
    generate_synthetic_cohort,
)

__all__ = [
    "__version__",
    # cohort
    "CohortDataset", "MarksRecord", "PassTable", "DiscretizationPolicy",
    "ClassificationRow", "ClusterRow",
    "load_marks", "write_marks", "load_passes", "load_classification",
    "load_clustering", "derive_pass_table", "discretize_performance",
    # association
    "Transaction", "ItemsetSupport", "Rule",
    "build_transactions", "apriori", "generate_rules",
    "average_pass_rate_minconf", "candidate_pairs",
    # correlation
    "PairedSample", "CorrelationReport",
    "pearson_r", "build_paired_sample", "strongly_related",
    # decision tree
    "Example", "Leaf", "Split", "DecisionNode", "GainEntry", "ID3Classifier",
    "entropy", "information_gain", "gain_table", "id3_train", "predict", "export_dot",
    # clustering
    "Point", "ClusterAssignment", "DbscanClusterer",
    "dbscan", "eps_neighborhood", "normalize_minmax",
    "CORE", "BORDER", "NOISE",
    # synth
    "SynthSpec", "SynthResult", "PlantedPair", "PlantedBlob",
    "generate_synthetic_cohort",
]
