"""Additive deliberative-quality scoring for discussion comments.

Twenty per-criterion predictions on a 0..3 scale are combined through
correlation-derived weights into a single raw score, then min-max scaled
to [0, 5]. The package also ships the tooling around that score: corpus
loading and pairing, weight fitting from expert/crowd annotations,
prediction providers (files, mocks, remote HTTP), and an evaluation
harness (F1 family, Krippendorff's alpha, threshold tuning, rankings).
"""

from .criteria import CRITERIA, CRITERION_SET, DIMENSION_OF, MAX_LEVEL, TOXICITY_CRITERIA
from .corpus import (
    Comment,
    CrowdLabel,
    CrowdVotes,
    ExpertAnnotation,
    PairedCorpus,
    PairingReport,
    load_comments,
    load_crowd_labels,
    load_expert_annotations,
    majority_vote,
    pair_corpus,
    save_comments,
    save_crowd_labels,
    save_expert_annotations,
    split_corpus,
)
from .weights import (
    ScoreBounds,
    WeightTable,
    compute_bounds,
    default_weights,
    fit_weights,
    load_weights,
    save_weights,
)
from .score import (
    AquaScore,
    PredictionVector,
    aqua_score,
    load_predictions,
    load_scores,
    normalize,
    raw_score,
    save_predictions,
    save_scores,
    score_batch,
)
from .predict import (
    ConstantPredictionProvider,
    FilePredictionProvider,
    KeywordMockProvider,
    PredictionProvider,
    RemoteEndpointConfig,
    RemoteProvider,
    constant_provider,
    file_provider,
    keyword_mock_provider,
    load_wire_schema,
    remote_provider,
    wire_validator,
)
from .eval import (
    ConfusionCounts,
    LengthReport,
    RankReport,
    ReliabilityMatrix,
    confusion_counts,
    f1_scores,
    krippendorff_alpha,
    length_analysis,
    load_labels,
    rank_report,
    threshold_classify,
    toxicity_eval,
    tune_threshold,
)

__version__ = "0.1.0"
