"""Repeated stratified train/test evaluation of an Extra-Trees classifier.

Each repetition draws its own stratified 70/30 shuffle split, fits min-max
scaling on the training rows alone, trains a fresh forest, and scores the
held-out rows; the report is the mean over repetitions. Prediction time is
total inference wall time divided by test rows, in microseconds.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from sklearn.ensemble import ExtraTreesClassifier
from sklearn.model_selection import train_test_split

from .errors import SingleClassError
from .loading import IDENTIFIER_COLUMNS
from .metrics import (
    auc_score,
    binary_scores,
    per_class_scores,
    weighted_average,
)


@dataclass(frozen=True)
class EvalConfig:
    """Everything one evaluation run depends on."""

    dataset: str = ""
    task: str = "binary"  # "binary" | "multiclass"
    drop_columns: tuple[str, ...] = IDENTIFIER_COLUMNS
    drop_ttl: bool = False
    test_fraction: float = 0.3
    repetitions: int = 5
    seed: int = 0
    n_estimators: int = 100

    def __post_init__(self) -> None:
        if self.task not in ("binary", "multiclass"):
            raise ValueError(f"unknown task {self.task!r}")
        if not 0.0 < self.test_fraction < 1.0:
            raise ValueError("test fraction must be strictly between 0 and 1")
        if self.repetitions < 1:
            raise ValueError("need at least one repetition")
        if self.n_estimators < 1:
            raise ValueError("need at least one tree")


@dataclass
class ClassReport:
    """Mean per-class results over repetitions."""

    dr: float
    f1: float
    support: float


@dataclass
class MetricsReport:
    """Mean metrics over all repetitions of one evaluation.

    For multiclass runs, f1 and dr are support-weighted averages over
    classes; far and auc are reported for binary runs only. Prediction time
    is wall-clock and therefore varies between runs of the same seed; every
    other field is seed-deterministic.
    """

    task: str
    accuracy: float
    f1: float
    dr: float
    far: float | None
    auc: float | None
    prediction_time_us: float
    repetitions: int
    n_rows: int
    per_class: dict[str, ClassReport] = field(default_factory=dict)

    def metric_fields(self) -> dict[str, float | None]:
        """The seed-deterministic scalar fields (timing excluded)."""
        return {
            "accuracy": self.accuracy,
            "f1": self.f1,
            "dr": self.dr,
            "far": self.far,
            "auc": self.auc,
        }


def _scale_split(
    matrix: np.ndarray, y: np.ndarray, fraction: float, seed: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    from .preprocess import minmax_apply, minmax_fit

    x_train, x_test, y_train, y_test = train_test_split(
        matrix, y, test_size=fraction, random_state=seed, stratify=y
    )
    lo, span = minmax_fit(x_train)
    return minmax_apply(x_train, lo, span), minmax_apply(x_test, lo, span), y_train, y_test


def _fit_and_predict(
    x_train: np.ndarray,
    y_train: np.ndarray,
    x_test: np.ndarray,
    config: EvalConfig,
    seed: int,
    with_scores: bool,
) -> tuple[np.ndarray, np.ndarray | None, float]:
    clf = ExtraTreesClassifier(n_estimators=config.n_estimators, random_state=seed)
    clf.fit(x_train, y_train)
    started = time.perf_counter()
    predictions = clf.predict(x_test)
    elapsed = time.perf_counter() - started
    scores = clf.predict_proba(x_test)[:, 1] if with_scores else None
    per_row_us = elapsed / len(x_test) * 1e6
    return predictions, scores, per_row_us


def evaluate_binary(matrix: np.ndarray, labels: np.ndarray, config: EvalConfig) -> MetricsReport:
    """Mean binary metrics (accuracy, F1, DR, FAR, AUC) over repetitions."""
    labels = np.asarray(labels)
    if len(np.unique(labels)) < 2:
        raise SingleClassError("binary evaluation needs both classes present")
    sums = {"accuracy": 0.0, "f1": 0.0, "dr": 0.0, "far": 0.0, "auc": 0.0, "us": 0.0}
    for rep in range(config.repetitions):
        seed = config.seed + rep
        x_train, x_test, y_train, y_test = _scale_split(
            matrix, labels, config.test_fraction, seed
        )
        predictions, scores, per_row_us = _fit_and_predict(
            x_train, y_train, x_test, config, seed, with_scores=True
        )
        for name, value in binary_scores(y_test, predictions).items():
            sums[name] += value
        sums["auc"] += auc_score(y_test, scores)
        sums["us"] += per_row_us
    reps = config.repetitions
    return MetricsReport(
        task="binary",
        accuracy=sums["accuracy"] / reps,
        f1=sums["f1"] / reps,
        dr=sums["dr"] / reps,
        far=sums["far"] / reps,
        auc=sums["auc"] / reps,
        prediction_time_us=sums["us"] / reps,
        repetitions=reps,
        n_rows=len(matrix),
    )


def evaluate_multiclass(
    matrix: np.ndarray, categories: np.ndarray, config: EvalConfig
) -> MetricsReport:
    """Per-class DR/F1 plus support-weighted averages, mean over repetitions."""
    categories = np.asarray(categories)
    classes = sorted(np.unique(categories).tolist())
    if len(classes) < 2:
        raise SingleClassError("multiclass evaluation needs at least two classes")
    accuracy_sum = 0.0
    us_sum = 0.0
    class_sums = {cls: {"dr": 0.0, "f1": 0.0, "support": 0.0} for cls in classes}
    weighted = {"dr": 0.0, "f1": 0.0}
    for rep in range(config.repetitions):
        seed = config.seed + rep
        x_train, x_test, y_train, y_test = _scale_split(
            matrix, categories, config.test_fraction, seed
        )
        predictions, _, per_row_us = _fit_and_predict(
            x_train, y_train, x_test, config, seed, with_scores=False
        )
        accuracy_sum += float(np.mean(predictions == y_test))
        us_sum += per_row_us
        per_class = per_class_scores(y_test, predictions, classes)
        for cls, scores in per_class.items():
            for key in ("dr", "f1", "support"):
                class_sums[cls][key] += scores[key]
        weighted["dr"] += weighted_average(per_class, "dr")
        weighted["f1"] += weighted_average(per_class, "f1")
    reps = config.repetitions
    return MetricsReport(
        task="multiclass",
        accuracy=accuracy_sum / reps,
        f1=weighted["f1"] / reps,
        dr=weighted["dr"] / reps,
        far=None,
        auc=None,
        prediction_time_us=us_sum / reps,
        repetitions=reps,
        n_rows=len(matrix),
        per_class={
            cls: ClassReport(
                dr=sums["dr"] / reps,
                f1=sums["f1"] / reps,
                support=sums["support"] / reps,
            )
            for cls, sums in class_sums.items()
        },
    )


def run_evaluation(config: EvalConfig) -> MetricsReport:
    """Load, preprocess, and evaluate the configured dataset end to end."""
    from .errors import SchemaError
    from .loading import load_dataset
    from .preprocess import preprocess

    dataset = load_dataset(config.dataset)
    prepared = preprocess(dataset, config.drop_columns, config.drop_ttl)
    if prepared.labels is None:
        raise SchemaError(f"{config.dataset}: needs Label/Attack columns")
    if config.task == "binary":
        return evaluate_binary(prepared.matrix, prepared.labels, config)
    return evaluate_multiclass(prepared.matrix, prepared.categories, config)
