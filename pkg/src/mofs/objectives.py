"""Candidate encoding and the three selection objectives.

A candidate is a real vector in [0, 1]^n. Thresholding turns it into a
binary column mask; the mask is scored on three axes, all minimized:

* classification error rate (1 - cross-validated K-NN accuracy on the
  training partition),
* number of selected columns,
* share of the dataset's missing cells that fall inside the selected
  columns, as a percentage (0 when the dataset is complete).
"""

from dataclasses import dataclass, field

import numpy as np

from .data import ConfigurationError, Dataset, SplitSpec
from .knn import KnnConfig, cross_validated_accuracy, test_set_accuracy


@dataclass(frozen=True)
class EvalConfig:
    threshold: float = 0.6
    knn: KnnConfig = field(default_factory=KnnConfig)

    def __post_init__(self):
        if not 0.0 < self.threshold < 1.0:
            raise ConfigurationError("threshold must be in (0, 1)")


@dataclass(frozen=True)
class ObjectiveVector:
    error_rate: float
    size: int
    missing_pct: float

    def as_array(self) -> np.ndarray:
        return np.array([self.error_rate, float(self.size), self.missing_pct])


def binarize(position: np.ndarray, threshold: float) -> np.ndarray:
    """Select every column whose component reaches the threshold."""
    return np.asarray(position) >= threshold


def repair_empty(position: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Force at least one selected column.

    An all-zero mask gets the column with the largest component turned
    on (lowest index on ties); any other mask passes through unchanged.
    """
    if mask.any():
        return mask
    repaired = np.zeros_like(mask)
    repaired[int(np.argmax(position))] = True
    return repaired


def mask_for(position: np.ndarray, threshold: float) -> np.ndarray:
    return repair_empty(position, binarize(position, threshold))


def selected_missing(mask: np.ndarray, per_feature_missing: np.ndarray) -> int:
    """Count of originally missing cells inside the selected columns."""
    if mask.shape[0] != per_feature_missing.shape[0]:
        raise ValueError("mask and missing-count vector lengths differ")
    return int(per_feature_missing[mask].sum())


class FitnessEvaluator:
    """Scores candidates against one dataset/split pair.

    Because many candidates binarize to the same mask and the K-NN
    cross-validation is the cost center, train error rates are cached per
    mask. The cache only memoizes a pure function, so results are
    identical with it on or off.
    """

    def __init__(self, dataset: Dataset, split: SplitSpec, config: EvalConfig,
                 cache: bool = True):
        self.dataset = dataset
        self.split = split
        self.config = config
        self._cache: dict | None = {} if cache else None

    def mask_for(self, position: np.ndarray) -> np.ndarray:
        return mask_for(position, self.config.threshold)

    def _missing_pct(self, mask: np.ndarray) -> float:
        profile = self.dataset.profile
        if profile.total_missing == 0:
            return 0.0
        inside = selected_missing(mask, profile.per_feature_missing)
        return 100.0 * inside / profile.total_missing

    def _train_error(self, mask: np.ndarray) -> float:
        key = np.packbits(mask).tobytes()
        if self._cache is not None and key in self._cache:
            return self._cache[key]
        result = cross_validated_accuracy(self.dataset, self.split, mask,
                                          self.config.knn)
        error = 1.0 - result.mean_accuracy
        if self._cache is not None:
            self._cache[key] = error
        return error

    def evaluate_mask(self, mask: np.ndarray) -> ObjectiveVector:
        return ObjectiveVector(error_rate=self._train_error(mask),
                               size=int(mask.sum()),
                               missing_pct=self._missing_pct(mask))

    def evaluate(self, position: np.ndarray) -> ObjectiveVector:
        if position.shape[0] != self.dataset.feature_count:
            raise ValueError("candidate length differs from feature count")
        return self.evaluate_mask(self.mask_for(position))

    def evaluate_on_test(self, mask: np.ndarray) -> ObjectiveVector:
        """Score a mask by classifying the held-out test partition."""
        accuracy = test_set_accuracy(self.dataset, self.split, mask,
                                     self.config.knn)
        return ObjectiveVector(error_rate=1.0 - accuracy,
                               size=int(mask.sum()),
                               missing_pct=self._missing_pct(mask))


def evaluate_block(evaluator: FitnessEvaluator,
                   positions: np.ndarray) -> np.ndarray:
    """Evaluate a batch of candidates into an (N, 3) objective array."""
    return np.array([evaluator.evaluate(row).as_array() for row in positions])


def evaluate(position: np.ndarray, dataset: Dataset, split: SplitSpec,
             config: EvalConfig) -> ObjectiveVector:
    """One-shot candidate evaluation (no caching)."""
    return FitnessEvaluator(dataset, split, config, cache=False).evaluate(position)


def evaluate_on_test(mask: np.ndarray, dataset: Dataset, split: SplitSpec,
                     config: EvalConfig) -> ObjectiveVector:
    """One-shot test-partition evaluation of an explicit mask."""
    return FitnessEvaluator(dataset, split, config,
                            cache=False).evaluate_on_test(mask)
