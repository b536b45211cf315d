"""Classifier evaluation harness for flow-feature CSV datasets."""

from .errors import EmptyDatasetError, EvalError, SchemaError, SingleClassError
from .evaluate import (
    ClassReport,
    EvalConfig,
    MetricsReport,
    evaluate_binary,
    evaluate_multiclass,
    run_evaluation,
)
from .loading import (
    BASIC_FEATURES,
    EXTENDED_FEATURES,
    DatasetLayout,
    LoadedDataset,
    layout_for,
    load_dataset,
)
from .metrics import (
    accuracy_rate,
    auc_score,
    binary_counts,
    binary_scores,
    detection_rate,
    f1_rate,
    false_alarm_rate,
    per_class_scores,
    weighted_average,
)
from .preprocess import PreparedData, feature_columns, minmax_apply, minmax_fit, preprocess
from .report import ReportRow, render

__version__ = "0.1.0"

__all__ = [
    "BASIC_FEATURES",
    "EXTENDED_FEATURES",
    "ClassReport",
    "DatasetLayout",
    "EmptyDatasetError",
    "EvalConfig",
    "EvalError",
    "LoadedDataset",
    "MetricsReport",
    "PreparedData",
    "ReportRow",
    "SchemaError",
    "SingleClassError",
    "accuracy_rate",
    "auc_score",
    "binary_counts",
    "binary_scores",
    "detection_rate",
    "evaluate_binary",
    "evaluate_multiclass",
    "f1_rate",
    "false_alarm_rate",
    "feature_columns",
    "layout_for",
    "load_dataset",
    "minmax_apply",
    "minmax_fit",
    "per_class_scores",
    "preprocess",
    "render",
    "run_evaluation",
    "weighted_average",
]
