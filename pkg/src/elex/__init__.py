"""Emotion-lexicon expansion toolkit.

Expands a categorical emotion lexicon by calibrated embedding similarity
over a PCA + Gaussian-mixture cluster model, and normalizes argumentative
stance corpora and lexicon-derived emotion features for downstream
classifiers.
"""

__version__ = "0.1.0"

from .lexicon import (  # noqa: F401
    EMOTIONS,
    Lexicon,
    LexiconEntry,
    Support,
    load_lexicon,
    load_lexicon_jsonl,
    merge,
    save_lexicon,
)
from .embeddings import (  # noqa: F401
    EmbeddingTable,
    cosine_similarity,
    load_embeddings,
    similarity_histogram,
)
from .cluster import (  # noqa: F401
    GmmModel,
    PcaModel,
    fit_gmm,
    fit_pca,
    hard_assign,
    posterior,
    project,
)
from .calibrate import (  # noqa: F401
    ClusterStats,
    calibrated_similarity,
    compute_cluster_stats,
    normalize_similarity,
)
from .modelio import ClusterModel, load_model, save_model  # noqa: F401
from .expand import (  # noqa: F401
    ExpansionResult,
    ThresholdDiagnostics,
    diagnostics,
    expand_at,
    sweep,
)
from .features import EmotionFeatures, emotion_features, tokenize  # noqa: F401
from .corpus import StanceRecord, convert, map_label, stats  # noqa: F401
