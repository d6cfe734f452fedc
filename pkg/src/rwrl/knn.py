"""k-nearest-neighbor baseline on z-scored features."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, EmptyDataError, EmptyModelError
from .features import scale_features


@dataclass
class KnnModel:
    k: int
    classes: list[int]
    mean: np.ndarray
    std: np.ndarray
    samples: np.ndarray     # (n, d) z-scored rows
    labels: np.ndarray      # (n,)

    @property
    def dim(self) -> int:
        return len(self.mean)


def knn_train(features, labels, k: int = 3, scale: bool = True) -> KnnModel:
    X = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    if X.ndim != 2 or len(X) == 0:
        raise EmptyDataError("training data is empty")
    if len(X) != len(y):
        raise DimensionMismatchError(f"{len(X)} rows but {len(y)} labels")
    if not 1 <= k <= len(X):
        raise ValueError("k must be in 1..n_samples")
    if scale:
        mean, std = X.mean(axis=0), X.std(axis=0)
    else:
        mean, std = np.zeros(X.shape[1]), np.ones(X.shape[1])
    classes = sorted(int(c) for c in np.unique(y))
    return KnnModel(k, classes, mean, std, scale_features(X, mean, std), y)


def knn_predict(model: KnnModel, vector) -> int:
    """Majority label among the k nearest neighbors by Euclidean distance.

    Vote ties go to the class of the nearest tied neighbor; equal distances
    rank the smaller label first.
    """
    if len(model.samples) == 0:
        raise EmptyModelError("model holds no samples")
    v = np.asarray(vector, dtype=np.float64)
    if v.shape != (model.dim,):
        raise DimensionMismatchError(
            f"model expects {model.dim} features, got {v.shape}")
    vs = scale_features(v, model.mean, model.std)
    dist = np.sqrt(((model.samples - vs) ** 2).sum(axis=1))
    order = np.lexsort((model.labels, dist))[:model.k]
    top_labels = model.labels[order]
    counts = np.bincount(top_labels, minlength=max(model.classes) + 1)
    best = counts.max()
    for label in top_labels:           # nearest-first among tied classes
        if counts[label] == best:
            return int(label)
    raise AssertionError("unreachable")


def knn_predict_batch(model: KnnModel, features) -> np.ndarray:
    X = np.atleast_2d(np.asarray(features, dtype=np.float64))
    return np.array([knn_predict(model, row) for row in X], dtype=np.int64)
