"""PCA(3) + GMM(3) cluster model over lexicon-word embeddings.

PCA is a mean-centered covariance eigendecomposition (computed via SVD of
the centered data matrix); component signs are fixed so serialized models
are comparable. The mixture is fit with EM from a k-means++-style seeded
initialization, full covariances, and a regularization floor added at
every M-step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError
from .embeddings import EmbeddingTable

DEFAULT_K = 3
DEFAULT_PCA_DIM = 3


@dataclass
class PcaModel:
    mean: np.ndarray                # (d,)
    components: np.ndarray          # (out_dim, d), orthonormal rows
    explained_variance: np.ndarray  # (out_dim,), descending

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    @property
    def out_dim(self) -> int:
        return self.components.shape[0]


@dataclass
class GmmModel:
    weights: np.ndarray      # (K,), sums to 1
    means: np.ndarray        # (K, p)
    covariances: np.ndarray  # (K, p, p), symmetric PD
    seed: int
    log_likelihood_trace: list[float] = field(default_factory=list)
    converged: bool = True

    @property
    def n_components(self) -> int:
        return self.weights.shape[0]


def fit_pca(table: EmbeddingTable, words, out_dim: int = DEFAULT_PCA_DIM) -> PcaModel:
    """Fit a PCA over the embeddings of ``words`` (processed in sorted order).

    Requires more points than ``out_dim``. Each component's
    largest-magnitude coordinate is made positive, removing the
    eigenvector sign ambiguity.
    """
    words = sorted(set(words))
    if len(words) <= out_dim:
        raise NumericalError(
            f"need more than {out_dim} points, got {len(words)}"
        )
    missing = [w for w in words if w not in table]
    if missing:
        raise KeyError(f"words missing from embedding table: {missing[:5]}")
    x = table.matrix(words)
    n = x.shape[0]
    mean = x.mean(axis=0)
    xc = x - mean
    # SVD of the centered matrix == eigendecomposition of the covariance.
    _, s, vt = np.linalg.svd(xc, full_matrices=False)
    scale = max(1.0, float(np.abs(x).max()))
    if s[0] <= 1e-12 * scale * math.sqrt(n - 1):
        raise NumericalError("degenerate covariance: all points identical")
    components = vt[:out_dim].copy()
    explained = (s[:out_dim] ** 2) / (n - 1)
    for row in components:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    components.setflags(write=False)
    return PcaModel(mean=mean, components=components, explained_variance=explained)


def project(pca: PcaModel, v) -> np.ndarray:
    """components @ (v - mean); accepts a single vector or a stack."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape[-1] != pca.dim:
        raise ValueError(f"dimension mismatch: {v.shape[-1]} vs {pca.dim}")
    return (v - pca.mean) @ pca.components.T


def _log_gaussian(points: np.ndarray, mean: np.ndarray, cov: np.ndarray) -> np.ndarray:
    """Log density of N(mean, cov) at each row of ``points`` via Cholesky."""
    p = mean.shape[0]
    chol = np.linalg.cholesky(cov)
    diff = (points - mean).T
    sol = np.linalg.solve(chol, diff)
    maha = np.sum(sol**2, axis=0)
    logdet = 2.0 * np.sum(np.log(np.diag(chol)))
    return -0.5 * (p * math.log(2.0 * math.pi) + logdet + maha)


def _log_prob_matrix(gmm: GmmModel, points: np.ndarray) -> np.ndarray:
    """(n, K) matrix of log(w_k) + log N(x; mu_k, Sigma_k)."""
    n = points.shape[0]
    k = gmm.n_components
    out = np.empty((n, k), dtype=np.float64)
    with np.errstate(divide="ignore"):
        logw = np.log(gmm.weights)
    for j in range(k):
        out[:, j] = logw[j] + _log_gaussian(points, gmm.means[j], gmm.covariances[j])
    return out


def _logsumexp_rows(m: np.ndarray) -> np.ndarray:
    mx = np.max(m, axis=1, keepdims=True)
    return (mx + np.log(np.sum(np.exp(m - mx), axis=1, keepdims=True))).ravel()


def _kmeanspp_centers(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centers = [points[rng.integers(n)]]
    for _ in range(1, k):
        d2 = np.min(
            [np.sum((points - c) ** 2, axis=1) for c in centers], axis=0
        )
        total = d2.sum()
        if total == 0.0:
            centers.append(points[rng.integers(n)])
            continue
        centers.append(points[rng.choice(n, p=d2 / total)])
    return np.asarray(centers)


def _em_once(
    points: np.ndarray, k: int, seed: int, tol: float, max_iter: int, reg: float
) -> GmmModel:
    n, p = points.shape
    rng = np.random.default_rng(seed)
    means = _kmeanspp_centers(points, k, rng)
    base_cov = np.cov(points, rowvar=False).reshape(p, p) + reg * np.eye(p)
    model = GmmModel(
        weights=np.full(k, 1.0 / k),
        means=means,
        covariances=np.repeat(base_cov[None, :, :], k, axis=0),
        seed=seed,
        log_likelihood_trace=[],
        converged=False,
    )

    logp = _log_prob_matrix(model, points)
    row_ll = _logsumexp_rows(logp)
    ll = float(np.sum(row_ll))
    model.log_likelihood_trace.append(ll)

    for _ in range(max_iter):
        resp = np.exp(logp - row_ll[:, None])
        nk = resp.sum(axis=0)
        # Keep collapsed components alive numerically.
        nk = np.maximum(nk, 1e-300)
        new_weights = nk / n
        new_means = (resp.T @ points) / nk[:, None]
        new_covs = np.empty_like(model.covariances)
        for j in range(k):
            diff = points - new_means[j]
            cov = (resp[:, j][:, None] * diff).T @ diff / nk[j]
            cov = 0.5 * (cov + cov.T) + reg * np.eye(p)
            new_covs[j] = cov
        candidate = GmmModel(
            weights=new_weights,
            means=new_means,
            covariances=new_covs,
            seed=seed,
            log_likelihood_trace=model.log_likelihood_trace,
            converged=False,
        )
        logp_new = _log_prob_matrix(candidate, points)
        row_ll_new = _logsumexp_rows(logp_new)
        ll_new = float(np.sum(row_ll_new))
        if ll_new - ll < tol:
            # Improvement below tolerance: converged. The sub-tolerance
            # update is discarded so the returned parameters are exactly
            # the ones that achieved trace[-1].
            model.converged = True
            return model
        model = candidate
        model.log_likelihood_trace.append(ll_new)
        logp, row_ll, ll = logp_new, row_ll_new, ll_new

    model.converged = False
    return model


def fit_gmm(
    points,
    k: int = DEFAULT_K,
    seed: int = 0,
    tol: float = 1e-6,
    max_iter: int = 500,
    reg: float = 1e-6,
    restarts: int = 1,
) -> GmmModel:
    """EM fit of a ``k``-component full-covariance Gaussian mixture.

    Initialization picks k-means++-style centers with a generator seeded by
    ``seed`` (restart r uses ``seed + r``); each M-step adds ``reg * I`` to
    every covariance. The log-likelihood trace records the initial value
    and every accepted (>= tol improving) step, so it is non-decreasing by
    construction; a model that exhausts ``max_iter`` is returned with
    ``converged=False`` rather than raising.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise ValueError("points must be a 2-D array")
    n = points.shape[0]
    if n < k:
        raise NumericalError(f"need at least {k} points, got {n}")
    if np.unique(points, axis=0).shape[0] < k:
        raise NumericalError(f"fewer than {k} distinct points")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")

    best = None
    for r in range(restarts):
        model = _em_once(points, k, seed + r, tol, max_iter, reg)
        if best is None or model.log_likelihood_trace[-1] > best.log_likelihood_trace[-1]:
            best = model
    best.seed = seed
    return best


def posterior(gmm: GmmModel, point) -> np.ndarray:
    """Cluster responsibilities at ``point``; sums to 1.

    If every component density underflows to nothing representable (all
    log densities non-finite), falls back to a one-hot vector on the
    nearest component mean.
    """
    point = np.asarray(point, dtype=np.float64)
    if not np.all(np.isfinite(point)):
        raise ValueError("point must be finite")
    logp = _log_prob_matrix(gmm, point[None, :])[0]
    if not np.any(np.isfinite(logp)):
        j = int(np.argmin(np.sum((gmm.means - point) ** 2, axis=1)))
        out = np.zeros(gmm.n_components)
        out[j] = 1.0
        return out
    mx = np.max(logp)
    p = np.exp(logp - mx)
    return p / p.sum()


def hard_assign(gmm: GmmModel, point) -> int:
    """argmax of the posterior; ties resolve to the lowest index."""
    return int(np.argmax(posterior(gmm, point)))
