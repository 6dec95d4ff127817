"""The cluster-model artifact: PCA + GMM + similarity stats in one JSON file.

Schema:
    {dim, pca: {mean, components, explained_variance},
     gmm: {weights, means, covariances, seed},
     stats: {mu, sigma, pair_count, sigma_c}, tool_version}

Reals carry 17 significant digits, so a fitted model serializes to the
same bytes on every run with the same seed and inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import __version__
from .calibrate import ClusterStats
from .cluster import GmmModel, PcaModel
from .errors import FormatError
from . import jsonio


@dataclass
class ClusterModel:
    dim: int
    pca: PcaModel
    gmm: GmmModel
    stats: ClusterStats | None = None
    tool_version: str = __version__


def save_model(model: ClusterModel, path) -> None:
    obj = {
        "dim": model.dim,
        "pca": {
            "mean": model.pca.mean,
            "components": model.pca.components,
            "explained_variance": model.pca.explained_variance,
        },
        "gmm": {
            "weights": model.gmm.weights,
            "means": model.gmm.means,
            "covariances": model.gmm.covariances,
            "seed": model.gmm.seed,
        },
        "stats": None
        if model.stats is None
        else {
            "mu": model.stats.mu,
            "sigma": model.stats.sigma,
            "pair_count": [int(c) for c in model.stats.pair_count],
            "sigma_c": model.stats.sigma_c,
        },
        "tool_version": model.tool_version,
    }
    jsonio.dump(obj, path)


def load_model(path) -> ClusterModel:
    obj = jsonio.load(path)
    try:
        pca = PcaModel(
            mean=np.asarray(obj["pca"]["mean"], dtype=np.float64),
            components=np.asarray(obj["pca"]["components"], dtype=np.float64),
            explained_variance=np.asarray(
                obj["pca"]["explained_variance"], dtype=np.float64
            ),
        )
        gmm = GmmModel(
            weights=np.asarray(obj["gmm"]["weights"], dtype=np.float64),
            means=np.asarray(obj["gmm"]["means"], dtype=np.float64),
            covariances=np.asarray(obj["gmm"]["covariances"], dtype=np.float64),
            seed=int(obj["gmm"]["seed"]),
        )
        stats = None
        if obj.get("stats") is not None:
            stats = ClusterStats(
                mu=np.asarray(obj["stats"]["mu"], dtype=np.float64),
                sigma=np.asarray(obj["stats"]["sigma"], dtype=np.float64),
                pair_count=np.asarray(obj["stats"]["pair_count"], dtype=np.int64),
                sigma_c=float(obj["stats"]["sigma_c"]),
            )
        model = ClusterModel(
            dim=int(obj["dim"]),
            pca=pca,
            gmm=gmm,
            stats=stats,
            tool_version=str(obj.get("tool_version", "")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad model file: {exc}", path=path) from exc
    _validate(model, path)
    return model


def _validate(model: ClusterModel, path) -> None:
    pca, gmm = model.pca, model.gmm
    if pca.components.shape[1] != model.dim or pca.mean.shape[0] != model.dim:
        raise FormatError("pca dims inconsistent with model dim", path=path)
    if abs(float(gmm.weights.sum()) - 1.0) > 1e-9 or np.any(gmm.weights < 0):
        raise FormatError("gmm weights must be non-negative and sum to 1", path=path)
    k, p = gmm.means.shape
    if gmm.covariances.shape != (k, p, p) or p != pca.out_dim:
        raise FormatError("gmm shapes inconsistent", path=path)
    if model.stats is not None and model.stats.mu.shape[0] != k:
        raise FormatError("stats cluster count inconsistent", path=path)
