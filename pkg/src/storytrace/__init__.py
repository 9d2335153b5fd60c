"""Reconstruct the temporal evolution of a news story.

Given a corpus of dated, entity-annotated documents and one or more
seed documents, storytrace segments the past timeline into coherent,
mutually dissimilar event segments separated by turning points and
assigns each document a soft relevance weight, by minimizing a smooth
diffusion objective under box constraints. Evaluation utilities
(dispersion coefficient, baseline chains, turning-point significance,
repeatability buckets) and an entity-weight forecaster ship alongside.
"""

__version__ = "0.1.0"

from .candidates import (
    CandidateError,
    CandidateFilterConfig,
    CandidateSet,
    filter_candidates,
    normalize_dates,
)
from .corpus import (
    Corpus,
    CorpusError,
    Document,
    EntityVocabulary,
    WeightedDocument,
    build_corpus,
    compute_tf_idf,
    fallback_extract_entities,
    parse_corpus,
    serialize_corpus,
)
from .evaluation import (
    Chain,
    EvaluationError,
    RepeatabilityConfig,
    SignificanceConfig,
    dispersion_coefficient,
    kmeans_chain_baseline,
    repeatability_buckets,
    significance_p_value,
    similarity_chain_baseline,
    story_chain,
)
from .objective import (
    SegmentBounds,
    SegmentationConfig,
    SoftTermResult,
    Solution,
    StoryObjective,
    evaluate_objective,
    gamma_membership,
    incoherence_soft,
    membership_probabilities,
    overlap_penalty,
    rescaled_membership,
    similarity_soft,
    soergel,
    soergel_matrix,
    uniformity_penalty,
)
from .optimizer import (
    OptimizationError,
    OptimizerConfig,
    Story,
    StoryResult,
    extract_story,
    fit_story,
    minimize,
)
from .prediction import (
    PairRow,
    Prediction,
    TermModel,
    build_pair_table,
    fit_term_models,
    predict_future_weights,
    split_story_documents,
    top_predicted,
)
from .synth import SyntheticSpec, generate_synthetic_corpus, planted_boundaries
from .topics import fit_reference_lda, kl_divergence, load_topics_sidecar

__all__ = [
    "__version__",
    "CandidateError",
    "CandidateFilterConfig",
    "CandidateSet",
    "Chain",
    "Corpus",
    "CorpusError",
    "Document",
    "EntityVocabulary",
    "EvaluationError",
    "OptimizationError",
    "OptimizerConfig",
    "PairRow",
    "Prediction",
    "RepeatabilityConfig",
    "SegmentBounds",
    "SegmentationConfig",
    "SignificanceConfig",
    "SoftTermResult",
    "Solution",
    "Story",
    "StoryObjective",
    "StoryResult",
    "SyntheticSpec",
    "TermModel",
    "WeightedDocument",
    "build_corpus",
    "build_pair_table",
    "compute_tf_idf",
    "dispersion_coefficient",
    "evaluate_objective",
    "extract_story",
    "fallback_extract_entities",
    "filter_candidates",
    "fit_reference_lda",
    "fit_story",
    "fit_term_models",
    "gamma_membership",
    "generate_synthetic_corpus",
    "incoherence_soft",
    "kl_divergence",
    "kmeans_chain_baseline",
    "load_topics_sidecar",
    "membership_probabilities",
    "minimize",
    "normalize_dates",
    "overlap_penalty",
    "parse_corpus",
    "planted_boundaries",
    "predict_future_weights",
    "repeatability_buckets",
    "rescaled_membership",
    "serialize_corpus",
    "significance_p_value",
    "similarity_chain_baseline",
    "similarity_soft",
    "soergel",
    "soergel_matrix",
    "split_story_documents",
    "story_chain",
    "top_predicted",
    "uniformity_penalty",
]
