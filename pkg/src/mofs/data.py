"""Loading, normalization, mean imputation and splitting of incomplete datasets.

Input files are plain comma-separated text without a header (a single
header line can be skipped on request). The last column is the class
label and must never be missing; every other column is numeric, with
missing cells written as a configurable token (default ``?``, the UCI
convention). Normalization and imputation run over the full dataset
before any train/test split; the mild train/test leakage this implies is
accepted deliberately so results reflect the standard preprocessing
pipeline for this kind of study.
"""

import csv
from dataclasses import dataclass

import numpy as np

from .rng import make_rng


class DataError(ValueError):
    """Malformed or unusable dataset content."""


class ConfigurationError(ValueError):
    """Invalid parameter combination for an operation."""


@dataclass(frozen=True)
class RawTable:
    """Parsed CSV contents: float features with NaN for missing cells."""

    features: np.ndarray        # (N, n) float64, NaN marks a missing cell
    labels: np.ndarray          # (N,) dense class ids, 0..C-1
    label_names: tuple          # class token per dense id, first-appearance order
    source_name: str

    @property
    def instance_count(self) -> int:
        return self.features.shape[0]

    @property
    def feature_count(self) -> int:
        return self.features.shape[1]

    @property
    def column_count(self) -> int:
        # Features plus the label column; matches how dataset tables
        # usually report "dimension".
        return self.features.shape[1] + 1

    @property
    def class_count(self) -> int:
        return len(self.label_names)


@dataclass(frozen=True)
class MissingProfile:
    """Missingness statistics taken before imputation."""

    per_feature_missing: np.ndarray  # (n,) counts
    total_missing: int
    missing_rate_pct: float

    @classmethod
    def from_mask(cls, missing_mask: np.ndarray) -> "MissingProfile":
        per_feature = missing_mask.sum(axis=0).astype(np.int64)
        total = int(per_feature.sum())
        rate = 100.0 * total / missing_mask.size
        return cls(per_feature_missing=per_feature, total_missing=total,
                   missing_rate_pct=rate)


@dataclass(frozen=True)
class Dataset:
    """Complete, normalized matrix plus the record of what was imputed."""

    matrix: np.ndarray          # (N, n) float64 in [0, 1], no missing entries
    labels: np.ndarray          # (N,) dense class ids
    label_names: tuple
    missing_mask: np.ndarray    # (N, n) bool, True where a cell was imputed
    profile: MissingProfile
    source_name: str

    @property
    def instance_count(self) -> int:
        return self.matrix.shape[0]

    @property
    def feature_count(self) -> int:
        return self.matrix.shape[1]

    @property
    def class_count(self) -> int:
        return len(self.label_names)


@dataclass(frozen=True)
class SplitSpec:
    """Train/test partition plus a fold id for every training instance."""

    train_indices: np.ndarray   # sorted ascending
    test_indices: np.ndarray    # sorted ascending
    fold_of_train: np.ndarray   # fold id aligned with train_indices
    fold_count: int

    def fold_sizes(self) -> np.ndarray:
        return np.bincount(self.fold_of_train, minlength=self.fold_count)


def load_csv(path, missing_token: str = "?", skip_header: bool = False) -> RawTable:
    """Parse a delimited dataset file into a RawTable.

    Cells equal to ``missing_token`` (after stripping whitespace) become
    missing; every other feature cell must parse as a number. Labels are
    compared as text and mapped to dense ids in order of first
    appearance. Blank lines are ignored.
    """
    rows = []
    with open(path, newline="") as handle:
        for line_no, cells in enumerate(csv.reader(handle), start=1):
            if not cells or all(not c.strip() for c in cells):
                continue
            rows.append((line_no, [c.strip() for c in cells]))
    if skip_header and rows:
        rows = rows[1:]
    if not rows:
        raise DataError(f"{path}: no data rows")

    width = len(rows[0][1])
    if width < 2:
        raise DataError(f"{path}: rows need at least one feature and a label")

    n_features = width - 1
    features = np.empty((len(rows), n_features), dtype=np.float64)
    label_ids = np.empty(len(rows), dtype=np.int64)
    label_names: list = []
    label_lookup: dict = {}

    for r, (line_no, cells) in enumerate(rows):
        if len(cells) != width:
            raise DataError(
                f"{path}: row {line_no} has {len(cells)} cells, expected {width}")
        for j, cell in enumerate(cells[:-1]):
            if cell == missing_token:
                features[r, j] = np.nan
                continue
            try:
                features[r, j] = float(cell)
            except ValueError:
                raise DataError(
                    f"{path}: row {line_no}, column {j + 1}: "
                    f"cannot parse {cell!r} as a number") from None
        label = cells[-1]
        if label == missing_token or not label:
            raise DataError(f"{path}: row {line_no}: missing class label")
        if label not in label_lookup:
            label_lookup[label] = len(label_names)
            label_names.append(label)
        label_ids[r] = label_lookup[label]

    return RawTable(features=features, labels=label_ids,
                    label_names=tuple(label_names), source_name=str(path))


def normalize(table: RawTable) -> RawTable:
    """Min-max scale each feature column to [0, 1] over its observed values.

    Constant columns map to all zeros; missing cells stay missing.
    """
    feats = table.features
    observed = ~np.isnan(feats)
    fully_missing = np.where(~observed.any(axis=0))[0]
    if fully_missing.size:
        raise DataError(
            f"{table.source_name}: feature column "
            f"{int(fully_missing[0]) + 1} has no observed values")

    col_min = np.nanmin(feats, axis=0)
    col_max = np.nanmax(feats, axis=0)
    span = col_max - col_min
    constant = span == 0.0
    safe_span = np.where(constant, 1.0, span)
    scaled = (feats - col_min) / safe_span
    scaled[:, constant] = 0.0
    scaled[~observed] = np.nan
    return RawTable(features=scaled, labels=table.labels,
                    label_names=table.label_names, source_name=table.source_name)


def impute_mean(table: RawTable) -> Dataset:
    """Replace each missing cell with its column's observed mean."""
    feats = table.features
    missing_mask = np.isnan(feats)
    if np.any(missing_mask.all(axis=0)):
        raise DataError(f"{table.source_name}: fully missing feature column")
    profile = MissingProfile.from_mask(missing_mask)

    observed_sum = np.where(missing_mask, 0.0, feats).sum(axis=0)
    observed_count = feats.shape[0] - profile.per_feature_missing
    column_mean = observed_sum / observed_count
    matrix = np.where(missing_mask, column_mean[np.newaxis, :], feats)
    return Dataset(matrix=matrix, labels=table.labels.copy(),
                   label_names=table.label_names,
                   missing_mask=missing_mask, profile=profile,
                   source_name=table.source_name)


def load_dataset(path, missing_token: str = "?", skip_header: bool = False) -> Dataset:
    """Load, normalize and impute a CSV file in one step."""
    return impute_mean(normalize(load_csv(path, missing_token, skip_header)))


def _round_half_up(value: float) -> int:
    return int(np.floor(value + 0.5))


def split(dataset: Dataset, seed: int, train_fraction: float = 0.7,
          folds: int = 10) -> SplitSpec:
    """Draw a reproducible train/test split and fold assignment.

    The training set holds round(train_fraction * N) instances (rounding
    half up), drawn uniformly at random. Fold ids are dealt round-robin
    over instances grouped by class, which stratifies classes across
    folds whenever a class has at least `folds` members and keeps fold
    sizes within one of each other in all cases.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ConfigurationError("train_fraction must be in (0, 1)")
    if folds < 2:
        raise ConfigurationError("folds must be at least 2")
    n_instances = dataset.instance_count
    n_train = _round_half_up(train_fraction * n_instances)
    if n_train < folds:
        raise ConfigurationError(
            f"training set of {n_train} instances cannot form {folds} folds")

    rng = make_rng(seed)
    order = rng.permutation(n_instances)
    train_indices = np.sort(order[:n_train])
    test_indices = np.sort(order[n_train:])

    # Shuffle within each class, concatenate class blocks, then deal fold
    # ids cyclically with a pointer that rolls across class boundaries.
    dealt = np.empty(n_train, dtype=np.int64)
    pos = 0
    train_labels = dataset.labels[train_indices]
    for class_id in range(dataset.class_count):
        members = np.where(train_labels == class_id)[0]
        rng.shuffle(members)
        dealt[pos:pos + members.size] = members
        pos += members.size

    fold_of_train = np.empty(n_train, dtype=np.int64)
    fold_of_train[dealt] = np.arange(n_train) % folds
    return SplitSpec(train_indices=train_indices, test_indices=test_indices,
                     fold_of_train=fold_of_train, fold_count=folds)


def profile_report(dataset: Dataset) -> str:
    """Plain-text missingness profile of a loaded dataset."""
    prof = dataset.profile
    lines = [
        f"dataset: {dataset.source_name}",
        f"instances (N): {dataset.instance_count}",
        f"columns (features + label): {dataset.feature_count + 1}",
        f"features (n): {dataset.feature_count}",
        f"classes: {dataset.class_count}",
        f"missing cells (la): {prof.total_missing}",
        f"missing rate: {prof.missing_rate_pct:.2f}%",
        "per-feature missing counts (feature: count):",
    ]
    counts = prof.per_feature_missing
    for start in range(0, counts.size, 10):
        chunk = counts[start:start + 10]
        cells = [f"{start + k + 1}: {int(c)}" for k, c in enumerate(chunk)]
        lines.append("  " + "  ".join(cells))
    return "\n".join(lines) + "\n"
