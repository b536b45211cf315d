"""Corpus-level operations: category canonicalization, merge, project, stats.

These operate on raw string rows so that untouched column values stay
byte-identical through merges and projections.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .csvio import ATTACK_COLUMN, DATASET_COLUMN, LABEL_COLUMN, CsvSchema, read_rows, write_rows
from .errors import ParseError, SchemaError, SchemaMismatchError

# Canonicalization rules: tool-specific sub-categories fold into their
# parent attack families when datasets are combined.
DEFAULT_MAPPING_TEXT = """\
# source,canonical
DoS attacks-Hulk,DoS
DoS attacks-SlowHTTPTest,DoS
DoS attacks-GoldenEye,DoS
DoS attacks-Slowloris,DoS
DDoS attack-LOIC-UDP,DDoS
DDoS attack-HOIC,DDoS
DDoS attacks-LOIC-HTTP,DDoS
FTP-BruteForce,Brute Force
SSH-Bruteforce,Brute Force
Brute Force -Web,Brute Force
Brute Force -XSS,Brute Force
SQL Injection,Injection
Benign,Benign
"""


class CategoryMapping:
    """Ordered source->canonical category renames; unmapped names pass through."""

    def __init__(self, pairs: list[tuple[str, str]]) -> None:
        self._map: dict[str, str] = {}
        for source, canonical in pairs:
            if source in self._map and self._map[source] != canonical:
                raise ValueError(f"category {source!r} mapped to two different names")
            self._map[source] = canonical
        if self._map.get("Benign", "Benign") != "Benign":
            raise ValueError("'Benign' must map to itself")

    @classmethod
    def parse(cls, text: str, source: str = "<builtin>") -> "CategoryMapping":
        pairs: list[tuple[str, str]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ParseError(lineno, f"{source}: expected source,canonical, got {raw!r}")
            pairs.append((parts[0], parts[1]))
        return cls(pairs)

    @classmethod
    def load(cls, path: str) -> "CategoryMapping":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.parse(fh.read(), source=path)

    @classmethod
    def default(cls) -> "CategoryMapping":
        return cls.parse(DEFAULT_MAPPING_TEXT)

    def map_category(self, name: str) -> str:
        return self._map.get(name, name)


def _labelled_schema(header: list[str], path: str) -> CsvSchema:
    schema = CsvSchema.from_header(header)
    if not schema.labelled:
        raise SchemaError(f"{path}: needs Label/Attack columns")
    return schema


def merge(
    inputs: list[tuple[str, str]], out_path: str, mapping: CategoryMapping | None = None
) -> int:
    """Concatenate labelled datasets, canonicalizing categories and appending
    a Dataset column naming each row's origin. inputs are (name, path) pairs.

    Returns the output row count (= sum of input row counts).
    """
    mapping = mapping or CategoryMapping.default()
    if not inputs:
        raise SchemaError("merge needs at least one input dataset")
    headers: list[tuple[str, list[str], CsvSchema]] = []
    for name, path in inputs:
        header, rows = read_rows(path)
        for _ in rows:  # drain to close the file; this pass only checks headers
            pass
        schema = _labelled_schema(header, path)
        if schema.with_dataset:
            raise SchemaMismatchError(f"{path}: already carries a Dataset column")
        headers.append((name, header, schema))
    first_header = headers[0][1]
    for name, header, _ in headers[1:]:
        if header != first_header:
            raise SchemaMismatchError(
                f"dataset {name!r} disagrees on columns: {header!r} vs {first_header!r}"
            )
    attack_idx = first_header.index(ATTACK_COLUMN)

    def merged_rows() -> Iterable[list[str]]:
        for name, path in inputs:
            _, rows = read_rows(path)
            for row in rows:
                if len(row) != len(first_header):
                    raise ParseError(0, f"{path}: ragged row with {len(row)} fields")
                row[attack_idx] = mapping.map_category(row[attack_idx])
                row.append(name)
                yield row

    return write_rows(out_path, first_header + [DATASET_COLUMN], merged_rows())


def project_basic(in_path: str, out_path: str) -> int:
    """Project an extended-43 CSV down to the basic-12 columns (plus labels)."""
    header, rows = read_rows(in_path)
    schema = CsvSchema.from_header(header)
    if schema.variant != "extended":
        raise SchemaError(f"{in_path}: projection needs the extended feature set")
    target = CsvSchema("basic", schema.labelled, schema.with_dataset)
    indices = [header.index(name) for name in target.columns]
    return write_rows(out_path, list(target.columns), ([row[i] for i in indices] for row in rows))


@dataclass
class DistributionReport:
    """Per-category counts plus the benign/attack split of one dataset."""

    total: int = 0
    attack: int = 0
    categories: Counter = field(default_factory=Counter)

    @property
    def benign(self) -> int:
        return self.total - self.attack

    def percent(self, count: int) -> str:
        if self.total == 0:
            return "0.00%"
        return f"{count / self.total * 100:.2f}%"

    def format_table(self) -> str:
        lines = ["category,count,share"]
        for name, count in sorted(self.categories.items(), key=lambda kv: (-kv[1], kv[0])):
            lines.append(f"{name},{count},{self.percent(count)}")
        lines.append(f"TOTAL,{self.total},100.00%" if self.total else "TOTAL,0,0.00%")
        lines.append(f"benign,{self.benign},{self.percent(self.benign)}")
        lines.append(f"attack,{self.attack},{self.percent(self.attack)}")
        return "\n".join(lines)


def stats(path: str) -> DistributionReport:
    """Single-pass label/category distribution of a labelled dataset."""
    header, rows = read_rows(path)
    schema = _labelled_schema(header, path)
    label_idx = header.index(LABEL_COLUMN)
    attack_idx = header.index(ATTACK_COLUMN)
    report = DistributionReport()
    for row in rows:
        if len(row) != len(schema.columns):
            raise ParseError(0, f"{path}: ragged row with {len(row)} fields")
        report.total += 1
        if row[label_idx] == "1":
            report.attack += 1
        report.categories[row[attack_idx]] += 1
    return report
