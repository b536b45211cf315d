"""Layout recognition, feature selection, and min-max scaling behavior."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

import synthdata
from nfbench.errors import EmptyDatasetError, SchemaError
from nfbench.loading import (
    BASIC_FEATURES,
    EXTENDED_FEATURES,
    IDENTIFIER_COLUMNS,
    layout_for,
    load_dataset,
)
from nfbench.preprocess import feature_columns, minmax_apply, minmax_fit, preprocess


def test_header_pins_match_package_constants() -> None:
    # the test-side copies are an independent pin of the CSV interface
    assert synthdata.EXTENDED_HEADER == EXTENDED_FEATURES
    assert synthdata.BASIC_HEADER == BASIC_FEATURES


def test_layout_recognition_all_variants() -> None:
    for variant, features in (("extended", EXTENDED_FEATURES), ("basic", BASIC_FEATURES)):
        bare = list(features)
        labelled = bare + ["Label", "Attack"]
        merged = labelled + ["Dataset"]
        assert layout_for(bare).variant == variant
        assert not layout_for(bare).labelled
        assert layout_for(labelled).labelled
        assert not layout_for(labelled).with_dataset
        assert layout_for(merged).with_dataset


def test_layout_rejects_unknown_and_reordered_headers() -> None:
    with pytest.raises(SchemaError):
        layout_for(["a", "b", "c"])
    shuffled = list(EXTENDED_FEATURES)
    shuffled[0], shuffled[1] = shuffled[1], shuffled[0]
    with pytest.raises(SchemaError):
        layout_for(shuffled)
    # Dataset without labels is not a published layout
    with pytest.raises(SchemaError):
        layout_for(list(EXTENDED_FEATURES) + ["Dataset"])


def test_minmax_maps_train_to_unit_interval() -> None:
    train = np.array([[2.0], [4.0], [6.0]])
    lo, span = minmax_fit(train)
    assert lo.tolist() == [2.0] and span.tolist() == [4.0]
    assert minmax_apply(train, lo, span).ravel().tolist() == [0.0, 0.5, 1.0]


def test_minmax_constant_column_scales_to_zero() -> None:
    train = np.array([[5.0, 1.0], [5.0, 3.0], [5.0, 2.0]])
    lo, span = minmax_fit(train)
    scaled = minmax_apply(train, lo, span)
    assert scaled[:, 0].tolist() == [0.0, 0.0, 0.0]
    assert scaled[:, 1].tolist() == [0.0, 1.0, 0.5]


def test_minmax_fit_parameters_equal_train_extrema() -> None:
    rng = np.random.default_rng(7)
    train = rng.uniform(-50, 50, size=(40, 6))
    test = rng.uniform(-120, 120, size=(10, 6))
    lo, span = minmax_fit(train)
    assert np.array_equal(lo, train.min(axis=0))
    assert np.array_equal(span, train.max(axis=0) - train.min(axis=0))
    scaled_train = minmax_apply(train, lo, span)
    assert scaled_train.min() == 0.0 and scaled_train.max() == 1.0
    # rows outside the training extrema land outside [0, 1]: the scaler
    # never saw them, which is exactly the point of fitting on train only
    scaled_test = minmax_apply(test, lo, span)
    assert scaled_test.min() < 0.0 or scaled_test.max() > 1.0


def test_preprocess_extended_dataset(tmp_path: Path) -> None:
    rows = synthdata.binary_rows(30, seed=1)
    dataset = load_dataset(str(synthdata.write_dataset(tmp_path / "d.csv", rows)))
    prepared = preprocess(dataset)
    assert prepared.matrix.shape == (30, len(EXTENDED_FEATURES) - len(IDENTIFIER_COLUMNS))
    assert prepared.matrix.dtype == np.float64
    for name in IDENTIFIER_COLUMNS:
        assert name not in prepared.feature_names
    assert prepared.labels is not None and prepared.categories is not None
    assert prepared.labels.tolist() == [int(r["Label"]) for r in rows]
    assert prepared.categories.tolist() == [r["Attack"] for r in rows]
    # spot-check one numeric column survived untouched
    col = prepared.feature_names.index("IN_BYTES")
    assert prepared.matrix[:, col].tolist() == [float(r["IN_BYTES"]) for r in rows]


def test_preprocess_drop_ttl(tmp_path: Path) -> None:
    rows = synthdata.binary_rows(10, seed=2)
    dataset = load_dataset(str(synthdata.write_dataset(tmp_path / "d.csv", rows)))
    kept = preprocess(dataset, drop_ttl=True)
    assert "MIN_TTL" not in kept.feature_names
    assert "MAX_TTL" not in kept.feature_names
    assert kept.matrix.shape[1] == preprocess(dataset).matrix.shape[1] - 2


def test_preprocess_basic_and_dataset_column(tmp_path: Path) -> None:
    rows = synthdata.binary_rows(12, seed=3)
    basic = load_dataset(
        str(synthdata.write_dataset(tmp_path / "b.csv", rows, variant="basic"))
    )
    prepared = preprocess(basic)
    assert prepared.matrix.shape == (12, len(BASIC_FEATURES) - len(IDENTIFIER_COLUMNS))
    merged = load_dataset(
        str(synthdata.write_dataset(tmp_path / "m.csv", rows, with_dataset=True))
    )
    names = feature_columns(merged)
    assert "Dataset" not in names and "Label" not in names and "Attack" not in names


def test_preprocess_unlabelled_has_no_vectors(tmp_path: Path) -> None:
    rows = synthdata.binary_rows(8, seed=4)
    dataset = load_dataset(
        str(synthdata.write_dataset(tmp_path / "u.csv", rows, labelled=False))
    )
    prepared = preprocess(dataset)
    assert prepared.labels is None and prepared.categories is None


def test_preprocess_errors(tmp_path: Path) -> None:
    rows = synthdata.binary_rows(6, seed=5)
    path = synthdata.write_dataset(tmp_path / "d.csv", rows)
    dataset = load_dataset(str(path))
    with pytest.raises(SchemaError, match="every feature column"):
        preprocess(dataset, drop_columns=EXTENDED_FEATURES)

    header_only = tmp_path / "empty_rows.csv"
    header_only.write_text(",".join(EXTENDED_FEATURES) + "\n", encoding="utf-8")
    with pytest.raises(EmptyDatasetError):
        preprocess(load_dataset(str(header_only)))

    zero_byte = tmp_path / "zero.csv"
    zero_byte.write_text("", encoding="utf-8")
    with pytest.raises(SchemaError):
        load_dataset(str(zero_byte))

    with pytest.raises(FileNotFoundError):
        load_dataset(str(tmp_path / "no_such_file.csv"))


def test_preprocess_rejects_bad_values(tmp_path: Path) -> None:
    rows = synthdata.binary_rows(6, seed=6)
    rows[2] = dict(rows[2], IN_BYTES="lots")
    bad_feature = synthdata.write_dataset(tmp_path / "f.csv", rows)
    with pytest.raises(SchemaError, match="non-numeric"):
        preprocess(load_dataset(str(bad_feature)))

    rows = synthdata.binary_rows(6, seed=7)
    rows[1] = dict(rows[1], Label="2")
    bad_label = synthdata.write_dataset(tmp_path / "l.csv", rows)
    with pytest.raises(SchemaError, match="Label column"):
        preprocess(load_dataset(str(bad_label)))

    rows = synthdata.binary_rows(6, seed=8)
    rows[1] = dict(rows[1], Label="yes")
    text_label = synthdata.write_dataset(tmp_path / "t.csv", rows)
    with pytest.raises(SchemaError, match="Label column"):
        preprocess(load_dataset(str(text_label)))

    rows = synthdata.binary_rows(6, seed=9)
    rows[3] = dict(rows[3], OUT_BYTES="")
    holes = synthdata.write_dataset(tmp_path / "n.csv", rows)
    with pytest.raises(SchemaError, match="missing values"):
        preprocess(load_dataset(str(holes)))
