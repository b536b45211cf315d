"""Turn a loaded flow CSV into a numeric matrix plus label vectors.

Identifier columns (addresses and ports) are always withheld from the model;
TTL extrema can be withheld too since they correlate almost perfectly with
the labels on some corpora. Min-max scaling is deliberately NOT done here:
the scaler must be fit on each training split alone, so it lives with the
evaluation loop.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyDatasetError, SchemaError
from .loading import (
    ATTACK_COLUMN,
    DATASET_COLUMN,
    IDENTIFIER_COLUMNS,
    LABEL_COLUMN,
    TTL_COLUMNS,
    LoadedDataset,
)


@dataclass
class PreparedData:
    """Model-ready matrix plus whichever label vectors the CSV carried."""

    matrix: np.ndarray  # float64, rows x features
    feature_names: list[str]
    labels: np.ndarray | None  # 0/1 ints, None when unlabelled
    categories: np.ndarray | None  # attack-name strings, None when unlabelled


def feature_columns(
    dataset: LoadedDataset,
    drop_columns: tuple[str, ...] = IDENTIFIER_COLUMNS,
    drop_ttl: bool = False,
) -> list[str]:
    dropped = set(drop_columns) | {LABEL_COLUMN, ATTACK_COLUMN, DATASET_COLUMN}
    if drop_ttl:
        dropped |= set(TTL_COLUMNS)
    return [name for name in dataset.layout.features if name not in dropped]


def preprocess(
    dataset: LoadedDataset,
    drop_columns: tuple[str, ...] = IDENTIFIER_COLUMNS,
    drop_ttl: bool = False,
) -> PreparedData:
    """Select model features and pull out labels; raises on empty input."""
    if len(dataset) == 0:
        raise EmptyDatasetError("dataset has no rows")
    names = feature_columns(dataset, drop_columns, drop_ttl)
    if not names:
        raise SchemaError("every feature column was dropped")
    sub = dataset.frame[names]
    try:
        matrix = sub.to_numpy(dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"non-numeric feature column: {exc}") from None
    if np.isnan(matrix).any():
        raise SchemaError("feature columns contain missing values")
    labels = categories = None
    if dataset.layout.labelled:
        try:
            labels = dataset.frame[LABEL_COLUMN].to_numpy(dtype=np.int64)
        except (TypeError, ValueError):
            raise SchemaError("Label column must contain only 0 and 1") from None
        if not np.isin(labels, (0, 1)).all():
            raise SchemaError("Label column must contain only 0 and 1")
        categories = dataset.frame[ATTACK_COLUMN].to_numpy(dtype=str)
    return PreparedData(matrix, names, labels, categories)


def minmax_fit(train: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-column (minimum, range) of the training rows; constant columns get
    range 1 so they scale to exactly 0 everywhere."""
    lo = train.min(axis=0)
    span = train.max(axis=0) - lo
    span[span == 0.0] = 1.0
    return lo, span


def minmax_apply(matrix: np.ndarray, lo: np.ndarray, span: np.ndarray) -> np.ndarray:
    return (matrix - lo) / span
