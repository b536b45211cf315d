"""Render evaluation results for one or more dataset/variant runs.

A report is a small comparison table: one row per evaluated run, with the
mean metrics side by side. Text output is aligned for terminals; CSV output
is for spreadsheets and further processing.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

from .evaluate import MetricsReport

COLUMNS = ("dataset", "variant", "accuracy", "auc", "f1", "dr", "far", "time_us")


@dataclass(frozen=True)
class ReportRow:
    """One evaluated run: where the data came from and what it scored."""

    dataset: str
    variant: str
    metrics: MetricsReport


def _cell(value: float | None, places: int = 4) -> str:
    if value is None:
        return "-"
    return f"{value:.{places}f}"


def _row_cells(row: ReportRow) -> list[str]:
    m = row.metrics
    return [
        row.dataset,
        row.variant,
        _cell(m.accuracy),
        _cell(m.auc),
        _cell(m.f1),
        _cell(m.dr),
        _cell(m.far),
        _cell(m.prediction_time_us, places=3),
    ]


def _render_text(rows: list[ReportRow]) -> str:
    table = [list(COLUMNS)] + [_row_cells(row) for row in rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(COLUMNS))]
    out = io.StringIO()
    for index, line in enumerate(table):
        rendered = "  ".join(cell.ljust(width) for cell, width in zip(line, widths))
        print(rendered.rstrip(), file=out)
        if index == 0:
            print("  ".join("-" * width for width in widths), file=out)
    for row in rows:
        for cls, scores in sorted(row.metrics.per_class.items()):
            print(
                f"{row.dataset}/{row.variant} class {cls}: "
                f"dr={scores.dr:.4f} f1={scores.f1:.4f} support={scores.support:.1f}",
                file=out,
            )
    return out.getvalue()


def _render_csv(rows: list[ReportRow]) -> str:
    lines = [",".join(COLUMNS)]
    for row in rows:
        cells = _row_cells(row)
        lines.append(",".join("" if cell == "-" else cell for cell in cells))
    return "\n".join(lines) + "\n"


def render(rows: list[ReportRow], fmt: str = "text") -> str:
    """Render report rows as an aligned text table or as CSV."""
    if fmt == "text":
        return _render_text(rows)
    if fmt == "csv":
        return _render_csv(rows)
    raise ValueError(f"unknown report format {fmt!r}")
