"""Classification metrics computed from first principles.

Everything except AUC is derived from explicit confusion-matrix counts so the
numbers can be checked against brute-force counting; AUC delegates to
scikit-learn's rank-based implementation.
"""

from __future__ import annotations

import numpy as np
from sklearn.metrics import roc_auc_score


def binary_counts(y_true: np.ndarray, y_pred: np.ndarray) -> tuple[int, int, int, int]:
    """(TP, FN, FP, TN) with class 1 as the positive (attack) class."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    pos = y_true == 1
    tp = int(np.count_nonzero(pos & (y_pred == 1)))
    fn = int(np.count_nonzero(pos & (y_pred != 1)))
    fp = int(np.count_nonzero(~pos & (y_pred == 1)))
    tn = int(np.count_nonzero(~pos & (y_pred != 1)))
    return tp, fn, fp, tn


def _rate(numerator: float, denominator: float) -> float:
    return numerator / denominator if denominator else 0.0


def detection_rate(tp: int, fn: int) -> float:
    return _rate(tp, tp + fn)


def false_alarm_rate(fp: int, tn: int) -> float:
    return _rate(fp, fp + tn)


def accuracy_rate(tp: int, fn: int, fp: int, tn: int) -> float:
    return _rate(tp + tn, tp + fn + fp + tn)


def f1_rate(tp: int, fn: int, fp: int) -> float:
    return _rate(2 * tp, 2 * tp + fp + fn)


def binary_scores(y_true: np.ndarray, y_pred: np.ndarray) -> dict[str, float]:
    """accuracy / f1 / dr / far of hard predictions, positive class = 1."""
    tp, fn, fp, tn = binary_counts(y_true, y_pred)
    return {
        "accuracy": accuracy_rate(tp, fn, fp, tn),
        "f1": f1_rate(tp, fn, fp),
        "dr": detection_rate(tp, fn),
        "far": false_alarm_rate(fp, tn),
    }


def auc_score(y_true: np.ndarray, scores: np.ndarray) -> float:
    """Area under the ROC curve for positive-class scores."""
    return float(roc_auc_score(y_true, scores))


def per_class_scores(
    y_true: np.ndarray, y_pred: np.ndarray, classes: list[str]
) -> dict[str, dict[str, float]]:
    """One-vs-rest DR/F1 and support for every class."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    out: dict[str, dict[str, float]] = {}
    for cls in classes:
        tp, fn, fp, _ = binary_counts(y_true == cls, y_pred == cls)
        out[cls] = {
            "dr": detection_rate(tp, fn),
            "f1": f1_rate(tp, fn, fp),
            "support": float(tp + fn),
        }
    return out


def weighted_average(per_class: dict[str, dict[str, float]], key: str) -> float:
    """Support-weighted mean of one per-class metric."""
    total = sum(c["support"] for c in per_class.values())
    if not total:
        return 0.0
    return sum(c[key] * c["support"] for c in per_class.values()) / total
