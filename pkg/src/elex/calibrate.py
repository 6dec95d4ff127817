"""Per-cluster similarity statistics and the calibrated similarity score.

Raw cosine similarity means different things in different regions of the
embedding space, so scores are z-normalized against the statistics of the
cluster they are judged under and mapped into [0, 1] with a three-sigma
window:

    s_norm_i = clip(((s - mu_i) / sigma_i + sigma_c) / (2 * sigma_c), 0, 1)

with sigma_c = 3. The final score marginalizes over the candidate word's
cluster posterior p:

    s_final = clip(sum_i p_i * s_norm_i, 0, 1)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .cluster import hard_assign, posterior, project
from .embeddings import EmbeddingTable, cosine_similarity, split_by_coverage
from .errors import NumericalError
from .lexicon import Lexicon

if TYPE_CHECKING:  # pragma: no cover
    from .modelio import ClusterModel

SIGMA_C = 3.0

# Posterior mass below which an invalid cluster is ignored instead of fatal.
NEGLIGIBLE_MASS = 1e-6


@dataclass
class ClusterStats:
    """Mean/stddev of raw same-cluster similarity, per cluster.

    ``sigma`` is the population standard deviation over unordered pairs of
    distinct words hard-assigned to the cluster; self-pairs are excluded
    (they would drag the mean toward the self-similarity spike at 1).
    A cluster with fewer than 2 members, or zero spread, is invalid and
    refuses to normalize.
    """

    mu: np.ndarray          # (K,)
    sigma: np.ndarray       # (K,)
    pair_count: np.ndarray  # (K,) int
    sigma_c: float = SIGMA_C

    @property
    def n_clusters(self) -> int:
        return self.mu.shape[0]

    def is_valid(self, i: int) -> bool:
        return bool(self.pair_count[i] >= 1 and self.sigma[i] > 0.0)

    def require_valid(self, i: int) -> None:
        if not self.is_valid(i):
            raise NumericalError(
                f"cluster {i} has invalid similarity stats "
                f"(pairs={int(self.pair_count[i])}, sigma={self.sigma[i]})"
            )


def compute_cluster_stats(
    table: EmbeddingTable, lexicon: Lexicon, model: "ClusterModel"
) -> ClusterStats:
    """Raw-similarity mean/std over same-cluster pairs of lexicon words.

    Words are hard-assigned through the model's PCA projection and GMM;
    lexicon words without an embedding are skipped.
    """
    words, _ = split_by_coverage(table, lexicon.words())
    k = model.gmm.n_components
    assign: dict[int, list[str]] = {i: [] for i in range(k)}
    for w in words:
        assign[hard_assign(model.gmm, project(model.pca, table.vector(w)))].append(w)

    mu = np.zeros(k)
    sigma = np.zeros(k)
    pair_count = np.zeros(k, dtype=np.int64)
    for i in range(k):
        members = assign[i]
        m = len(members)
        if m < 2:
            continue
        unit = table.unit_matrix(members)
        sims = np.clip(unit @ unit.T, -1.0, 1.0)
        iu = np.triu_indices(m, k=1)
        vals = sims[iu]
        pair_count[i] = vals.size
        mu[i] = float(vals.mean())
        sigma[i] = float(vals.std())  # population std
    return ClusterStats(mu=mu, sigma=sigma, pair_count=pair_count)


def normalize_similarity(s: float, i: int, stats: ClusterStats) -> float:
    """Map a raw similarity onto cluster ``i``'s [0, 1] scale."""
    stats.require_valid(i)
    z = (s - stats.mu[i]) / stats.sigma[i]
    return float(np.clip((z + stats.sigma_c) / (2.0 * stats.sigma_c), 0.0, 1.0))


def weighted_normalized(s, p: np.ndarray, stats: ClusterStats) -> float:
    """clip(sum_i p_i * s_norm_i(s), 0, 1) for a posterior ``p``.

    Clusters with invalid stats contribute nothing; if such a cluster
    carries posterior mass above NEGLIGIBLE_MASS the score is undefined
    and this raises.
    """
    total = 0.0
    for i in range(stats.n_clusters):
        if not stats.is_valid(i):
            if p[i] > NEGLIGIBLE_MASS:
                stats.require_valid(i)
            continue
        total += p[i] * normalize_similarity(s, i, stats)
    return float(np.clip(total, 0.0, 1.0))


def calibrated_similarity(
    candidate_vec, lexicon_vec, model: "ClusterModel", stats: ClusterStats
) -> float:
    """Posterior-weighted normalized similarity between two embeddings.

    The weighting posterior is the candidate word's: the candidate is the
    unknown being placed, so its cluster uncertainty is what gets
    marginalized.
    """
    s = cosine_similarity(candidate_vec, lexicon_vec)
    p = posterior(model.gmm, project(model.pca, candidate_vec))
    return weighted_normalized(s, p, stats)
