"""K-nearest-neighbor classification used as the wrapper evaluator.

Brute-force Euclidean search over the selected feature columns. Every
tie is resolved deterministically: equal distances prefer the lower
training-row index, equal vote counts prefer the lower class id, so
repeated evaluations are reproducible bit for bit.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .data import ConfigurationError, Dataset, SplitSpec


@dataclass(frozen=True)
class KnnConfig:
    neighbors: int = 5
    folds: int = 10

    def __post_init__(self):
        if self.neighbors < 1:
            raise ConfigurationError("neighbor count must be at least 1")
        if self.folds < 2:
            raise ConfigurationError("fold count must be at least 2")


@dataclass(frozen=True)
class AccuracyResult:
    mean_accuracy: float
    per_fold: tuple


def classify(train_rows: np.ndarray, train_labels: np.ndarray,
             queries: np.ndarray, k: int, class_count: int) -> np.ndarray:
    """Predict a class id for every query row.

    Squared Euclidean distances are ranked with a stable sort, so equal
    distances fall back to the order of the training rows. The majority
    vote uses argmax over per-class counts, which picks the lowest class
    id on ties.
    """
    if train_rows.shape[0] == 0:
        raise ValueError("empty training set")
    if queries.shape[1] != train_rows.shape[1]:
        raise ValueError(
            f"query dimension {queries.shape[1]} != training dimension "
            f"{train_rows.shape[1]}")
    if k > train_rows.shape[0]:
        raise ConfigurationError(
            f"k={k} exceeds training set size {train_rows.shape[0]}")

    distances = cdist(queries, train_rows, "sqeuclidean")
    nearest = np.argsort(distances, axis=1, kind="stable")[:, :k]
    votes = train_labels[nearest]
    counts = np.zeros((queries.shape[0], class_count), dtype=np.int64)
    for col in range(k):
        np.add.at(counts, (np.arange(queries.shape[0]), votes[:, col]), 1)
    return counts.argmax(axis=1)


def knn_predict(train_rows: np.ndarray, train_labels: np.ndarray,
                query: np.ndarray, k: int) -> int:
    """Classify a single query row against an explicit training set."""
    train_rows = np.asarray(train_rows, dtype=np.float64)
    train_labels = np.asarray(train_labels, dtype=np.int64)
    query = np.asarray(query, dtype=np.float64)
    class_count = int(train_labels.max()) + 1 if train_labels.size else 0
    return int(classify(train_rows, train_labels, query[np.newaxis, :],
                        k, class_count)[0])


def cross_validated_accuracy(dataset: Dataset, split: SplitSpec,
                             feature_mask: np.ndarray,
                             cfg: KnnConfig) -> AccuracyResult:
    """Mean accuracy of leave-one-fold-out classification on the training set.

    Each fold is classified using the remaining folds, restricted to the
    masked feature columns; the result is the arithmetic mean of the
    per-fold accuracies.
    """
    if not np.any(feature_mask):
        raise ValueError("feature mask selects no columns")
    if split.fold_count != cfg.folds:
        raise ConfigurationError(
            f"split was built for {split.fold_count} folds, config says {cfg.folds}")

    rows = split.train_indices
    sub = dataset.matrix[np.ix_(rows, np.where(feature_mask)[0])]
    labels = dataset.labels[rows]
    fold_sizes = split.fold_sizes()
    if fold_sizes.min() == 0:
        raise ConfigurationError("every fold must be non-empty")
    smallest_training_fold = rows.size - int(fold_sizes.max())
    if cfg.neighbors > smallest_training_fold:
        raise ConfigurationError(
            f"k={cfg.neighbors} exceeds the smallest training fold "
            f"({smallest_training_fold} rows)")

    # One pairwise distance matrix per mask; fold evaluation just slices it.
    distances = cdist(sub, sub, "sqeuclidean")
    per_fold = []
    for fold in range(cfg.folds):
        held_out = split.fold_of_train == fold
        query_idx = np.where(held_out)[0]
        train_idx = np.where(~held_out)[0]
        block = distances[np.ix_(query_idx, train_idx)]
        nearest = np.argsort(block, axis=1, kind="stable")[:, :cfg.neighbors]
        votes = labels[train_idx][nearest]
        counts = np.zeros((query_idx.size, dataset.class_count), dtype=np.int64)
        for col in range(cfg.neighbors):
            np.add.at(counts, (np.arange(query_idx.size), votes[:, col]), 1)
        predicted = counts.argmax(axis=1)
        correct = int((predicted == labels[query_idx]).sum())
        per_fold.append(correct / query_idx.size)

    return AccuracyResult(mean_accuracy=float(np.mean(per_fold)),
                          per_fold=tuple(per_fold))


def test_set_accuracy(dataset: Dataset, split: SplitSpec,
                      feature_mask: np.ndarray, cfg: KnnConfig) -> float:
    """Accuracy of classifying the test partition with the full training set."""
    if not np.any(feature_mask):
        raise ValueError("feature mask selects no columns")
    if split.test_indices.size == 0:
        raise ValueError("empty test partition")
    cols = np.where(feature_mask)[0]
    train_rows = dataset.matrix[np.ix_(split.train_indices, cols)]
    queries = dataset.matrix[np.ix_(split.test_indices, cols)]
    predicted = classify(train_rows, dataset.labels[split.train_indices],
                         queries, cfg.neighbors, dataset.class_count)
    return float((predicted == dataset.labels[split.test_indices]).mean())
