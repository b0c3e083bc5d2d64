"""Shared fixtures: tiny hand-built tables and a synthetic incomplete dataset."""

import os
from pathlib import Path

import numpy as np
import pytest

from mofs.data import Dataset, MissingProfile, split

REPO_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = Path(os.environ.get("MOFS_DATA_DIR", REPO_ROOT / "data"))

# The six benchmark files the experiments were designed around; fetched
# by scripts/fetch_uci_data.py when network access is available.
UCI_FILES = {
    "processed.va": "processed.va.data",
    "heart-h": "processed.hungarian.data",
    "hepatitis": "hepatitis.data",
    "tumor": "primary-tumor.data",
    "processed.switzerland": "processed.switzerland.data",
    "arrhythmia": "arrhythmia.data",
}


def uci_path(key: str) -> Path:
    return DATA_DIR / UCI_FILES[key]


def make_synthetic_dataset(seed: int = 0, n_instances: int = 155,
                           n_features: int = 19, n_classes: int = 2,
                           missing_fraction: float = 0.054) -> Dataset:
    """Incomplete classification data with class-dependent structure.

    Rows are noisy copies of per-class centers, so feature subsets carry
    signal; a random subset of cells is marked missing and mean-imputed,
    mirroring the production loading pipeline.
    """
    rng = np.random.default_rng(seed)
    labels = rng.integers(n_classes, size=n_instances)
    centers = rng.random((n_classes, n_features))
    matrix = np.clip(centers[labels] + rng.normal(0.0, 0.35,
                                                  (n_instances, n_features)),
                     0.0, 1.0)
    missing = rng.random((n_instances, n_features)) < missing_fraction
    for j in range(n_features):
        observed = matrix[~missing[:, j], j]
        if observed.size == 0:          # keep every column observable
            missing[0, j] = False
            observed = matrix[~missing[:, j], j]
        matrix[missing[:, j], j] = observed.mean()
    return Dataset(matrix=matrix, labels=labels,
                   label_names=tuple(str(c) for c in range(n_classes)),
                   missing_mask=missing,
                   profile=MissingProfile.from_mask(missing),
                   source_name=f"synthetic-{seed}")


@pytest.fixture
def synthetic_dataset() -> Dataset:
    return make_synthetic_dataset()


@pytest.fixture
def synthetic_split(synthetic_dataset):
    return split(synthetic_dataset, seed=7, train_fraction=0.7, folds=10)


def write_csv(path: Path, rows) -> Path:
    path.write_text("\n".join(",".join(str(c) for c in row) for row in rows) + "\n")
    return path


def write_incomplete_csv(path: Path, seed: int = 0, n_instances: int = 40,
                         n_features: int = 6, n_classes: int = 2,
                         missing_fraction: float = 0.08) -> Path:
    """Write a small class-structured CSV with '?' missing tokens."""
    rng = np.random.default_rng(seed)
    labels = rng.integers(n_classes, size=n_instances)
    centers = rng.random((n_classes, n_features)) * 10.0
    rows = []
    for i in range(n_instances):
        row = centers[labels[i]] + rng.normal(0.0, 2.0, n_features)
        cells = [f"{v:.3f}" for v in row]
        for j in range(n_features):
            if rng.random() < missing_fraction:
                cells[j] = "?"
        cells.append(str(int(labels[i])))
        rows.append(cells)
    return write_csv(path, rows)
