"""Product-matching toolkit: dataset construction, baselines, evaluation.

The pipeline turns raw multi-store offer dumps into match/no-match pair
datasets (EAN-keyed positives, title-similarity hard negatives, a fixed
test split plus nested train splits), runs classical similarity matchers
against gold pair files, and aggregates repeated evaluation runs with
t-distribution error terms.
"""

from .errors import ConfigError, InsufficientDataError, ParseError, PmkitError
from .evaluation import (
    ConfusionCounts,
    EvalAggregate,
    Metrics,
    aggregate_runs,
    compute_metrics,
    metrics_from_counts,
    standard_error,
)
from .export import (
    SerializedPair,
    SplitManifest,
    export_for_training,
    make_train_val_split,
    parse_serialized,
    serialize_pair,
)
from .ingest import (
    CleaningReport,
    ColumnSchema,
    Offer,
    OfferTable,
    RawOfferRecord,
    clean_offers,
    load_wdc_pairs,
    parse_offers,
)
from .matchers import (
    MatchPrediction,
    Scorer,
    TfidfModel,
    ThresholdMatcher,
    fit_tfidf,
    score_pair,
    tune_threshold,
)
from .pairs import (
    OfferPair,
    PairDataset,
    Split,
    SplitPlan,
    build_positive_pairs,
    build_splits,
    emit_wdc,
    mine_negative_pairs,
)
from .rng import DeterministicRng
from .studentt import regularized_incomplete_beta, t_cdf, t_ppf
from .textprep import jaccard, normalize_title, tokenize

__version__ = "0.1.0"

__all__ = [
    "CleaningReport",
    "ColumnSchema",
    "ConfigError",
    "ConfusionCounts",
    "DeterministicRng",
    "EvalAggregate",
    "InsufficientDataError",
    "MatchPrediction",
    "Metrics",
    "Offer",
    "OfferPair",
    "OfferTable",
    "PairDataset",
    "ParseError",
    "PmkitError",
    "RawOfferRecord",
    "Scorer",
    "SerializedPair",
    "Split",
    "SplitManifest",
    "SplitPlan",
    "TfidfModel",
    "ThresholdMatcher",
    "aggregate_runs",
    "build_positive_pairs",
    "build_splits",
    "clean_offers",
    "compute_metrics",
    "emit_wdc",
    "export_for_training",
    "fit_tfidf",
    "jaccard",
    "load_wdc_pairs",
    "make_train_val_split",
    "metrics_from_counts",
    "mine_negative_pairs",
    "normalize_title",
    "parse_offers",
    "parse_serialized",
    "regularized_incomplete_beta",
    "score_pair",
    "serialize_pair",
    "standard_error",
    "t_cdf",
    "t_ppf",
    "tokenize",
    "tune_threshold",
]
