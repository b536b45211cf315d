"""Bit-exact reading and writing of the flow-record CSV schema.

Six header variants are recognized: {basic-12, extended-43} x {unlabelled,
labelled, labelled+Dataset}. Formatting is pinned for determinism: integers
without leading zeros, rates with at most six fractional digits and trailing
zeros trimmed, dotted-quad addresses, comma separator, "\\n" row terminator.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import ParseError, SchemaError
from .features import ADDRESS_FEATURES, BASIC_FEATURES, FEATURES, RATE_FEATURES, FlowRecord

LABEL_COLUMN = "Label"
ATTACK_COLUMN = "Attack"
DATASET_COLUMN = "Dataset"

_VARIANT_FEATURES = {"basic": BASIC_FEATURES, "extended": FEATURES}


@dataclass(frozen=True)
class CsvSchema:
    """One of the recognized column layouts."""

    variant: str  # "basic" | "extended"
    labelled: bool = False
    with_dataset: bool = False

    def __post_init__(self) -> None:
        if self.variant not in _VARIANT_FEATURES:
            raise SchemaError(f"unknown feature variant {self.variant!r}")
        if self.with_dataset and not self.labelled:
            raise SchemaError("a Dataset column requires label columns")

    @property
    def features(self) -> tuple[str, ...]:
        return _VARIANT_FEATURES[self.variant]

    @property
    def columns(self) -> tuple[str, ...]:
        cols = self.features
        if self.labelled:
            cols = cols + (LABEL_COLUMN, ATTACK_COLUMN)
        if self.with_dataset:
            cols = cols + (DATASET_COLUMN,)
        return cols

    @classmethod
    def from_header(cls, header: list[str]) -> "CsvSchema":
        for variant in ("extended", "basic"):
            for labelled, with_dataset in ((True, True), (True, False), (False, False)):
                schema = cls(variant, labelled, with_dataset)
                if list(schema.columns) == header:
                    return schema
        raise SchemaError(f"header does not match any recognized schema: {header!r}")


def format_rate(value: float) -> str:
    """Up to six fractional digits, trailing zeros (then the dot) trimmed."""
    return f"{value:.6f}".rstrip("0").rstrip(".") or "0"


def format_feature(name: str, value: object) -> str:
    if name in ADDRESS_FEATURES:
        return str(value)
    if name in RATE_FEATURES:
        return format_rate(float(value))  # type: ignore[arg-type]
    return str(int(value))  # type: ignore[call-overload]


def record_to_row(record: FlowRecord, schema: CsvSchema) -> list[str]:
    row = [format_feature(name, getattr(record, name)) for name in schema.features]
    if schema.labelled:
        row.append(str(record.label if record.label is not None else 0))
        row.append(record.attack if record.attack is not None else "Benign")
    if schema.with_dataset:
        row.append(record.dataset or "")
    return row


def write_flows(records: Iterable[FlowRecord], path: str, schema: CsvSchema) -> int:
    """Write records in the given order; returns the number of rows written."""
    count = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(schema.columns)
        for record in records:
            writer.writerow(record_to_row(record, schema))
            count += 1
    return count


def _parse_row(row: list[str], schema: CsvSchema, line: int) -> FlowRecord:
    expected = len(schema.columns)
    if len(row) != expected:
        raise ParseError(line, f"expected {expected} fields, got {len(row)}")
    values: dict[str, object] = {name: 0 for name in FEATURES}
    try:
        for name, field in zip(schema.features, row):
            if name in ADDRESS_FEATURES:
                values[name] = field
            elif name in RATE_FEATURES:
                values[name] = float(field)
            else:
                values[name] = int(field)
    except ValueError as exc:
        raise ParseError(line, f"bad value for {name}: {exc}") from None
    # Features absent from the basic variant stay zero (rates as 0.0).
    for name in RATE_FEATURES:
        values[name] = float(values[name])  # type: ignore[arg-type]
    record = FlowRecord(**values)  # type: ignore[arg-type]
    idx = len(schema.features)
    if schema.labelled:
        label_field, attack = row[idx], row[idx + 1]
        if label_field not in ("0", "1"):
            raise ParseError(line, f"Label must be 0 or 1, got {label_field!r}")
        record.label = int(label_field)
        record.attack = attack
        idx += 2
    if schema.with_dataset:
        record.dataset = row[idx]
    return record


@dataclass
class ReadReport:
    """Outcome of a lenient read: how many rows were dropped and where."""

    skipped: int = 0
    errors: list[str] = field(default_factory=list)


def read_flows(
    path: str, strict: bool = True
) -> tuple[CsvSchema, list[FlowRecord], ReadReport]:
    """Read a flow CSV into typed records.

    Strict mode (default) raises ParseError on the first malformed row;
    lenient mode skips such rows and reports them.
    """
    report = ReadReport()
    records: list[FlowRecord] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, no header") from None
        schema = CsvSchema.from_header(header)
        for row in reader:
            line = reader.line_num
            try:
                records.append(_parse_row(row, schema, line))
            except ParseError as exc:
                if strict:
                    raise
                report.skipped += 1
                report.errors.append(str(exc))
    return schema, records, report


# -- raw string-row access (merge/project/stats operate byte-identically) ----

def read_rows(path: str) -> tuple[list[str], Iterator[list[str]]]:
    """Header plus an iterator of raw string rows; caller must exhaust it."""
    fh = open(path, "r", encoding="utf-8", newline="")
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        fh.close()
        raise SchemaError(f"{path}: empty file, no header") from None

    def rows() -> Iterator[list[str]]:
        with fh:
            yield from reader

    return header, rows()


def write_rows(path: str, header: list[str], rows: Iterable[list[str]]) -> int:
    count = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
            count += 1
    return count
