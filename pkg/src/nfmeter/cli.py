"""Command-line frontend: extract, label, merge, stats, project.

Exit status 0 on success, 2 on any fatal error. Diagnostics go to stderr;
data goes to the output file (or stdout for stats).
"""

from __future__ import annotations

import argparse
import sys

from .csvio import CsvSchema, read_flows, write_flows
from .datasets import CategoryMapping, merge, project_basic, stats
from .errors import NfmeterError
from .l7 import L7Table
from .labeling import label_dataset, load_ground_truth
from .pipeline import extract_many


def _err(message: str) -> None:
    print(f"nfmeter: error: {message}", file=sys.stderr)


def _info(message: str) -> None:
    print(message, file=sys.stderr)


def cmd_extract(args: argparse.Namespace) -> int:
    l7_table = L7Table.load(args.l7_table) if args.l7_table else L7Table.default()
    records, totals = extract_many(
        args.pcaps,
        idle_timeout_us=int(args.idle_timeout * 1_000_000),
        active_timeout_us=int(args.active_timeout * 1_000_000),
        l7_table=l7_table,
        workers=args.workers,
    )
    labelled = False
    if args.ground_truth:
        index = load_ground_truth(args.ground_truth)
        records, summary = label_dataset(records, index, use_windows=not args.no_time_windows)
        labelled = True
        for note in summary.skipped_events:
            _info(f"ground truth: skipped {note}")
        _info(f"labelled {summary.total} flows, ratio {summary.ratio}")
    schema = CsvSchema(args.variant, labelled=labelled)
    count = write_flows(records, args.output, schema)
    _info(
        f"{totals.frames} frames, {totals.decoded} decoded, "
        f"skipped: {totals.skip_summary()}, {count} flows -> {args.output}"
    )
    return 0


def cmd_label(args: argparse.Namespace) -> int:
    schema, records, report = read_flows(args.flows, strict=args.strict)
    if report.skipped:
        _info(f"skipped {report.skipped} malformed rows")
        for note in report.errors[:20]:
            _info(f"  {note}")
    index = load_ground_truth(args.ground_truth)
    for note in index.skipped:
        _info(f"ground truth: skipped {note}")
    records, summary = label_dataset(records, index, use_windows=not args.no_time_windows)
    out_schema = CsvSchema(schema.variant, labelled=True)
    write_flows(records, args.output, out_schema)
    _info(f"labelled {summary.total} flows ({summary.attack} attack), ratio {summary.ratio}")
    for category, count in summary.categories.most_common():
        _info(f"  {category}: {count}")
    return 0


def cmd_merge(args: argparse.Namespace) -> int:
    inputs = []
    for entry in args.datasets:
        name, sep, path = entry.partition("=")
        if not sep:
            path = entry
            name = path.rsplit("/", 1)[-1].rsplit(".", 1)[0]
        inputs.append((name, path))
    mapping = CategoryMapping.load(args.mapping) if args.mapping else CategoryMapping.default()
    count = merge(inputs, args.output, mapping)
    _info(f"merged {len(inputs)} datasets, {count} rows -> {args.output}")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    report = stats(args.flows)
    print(report.format_table())
    return 0


def cmd_project(args: argparse.Namespace) -> int:
    count = project_basic(args.flows, args.output)
    _info(f"projected {count} rows -> {args.output}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nfmeter",
        description="Meter pcap captures into 43-feature flow records, label them "
        "against ground-truth attack events, and combine labelled datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_extract = sub.add_parser("extract", help="meter pcap files into a flow CSV")
    p_extract.add_argument("pcaps", nargs="+", help="classic pcap input files")
    p_extract.add_argument("-o", "--output", required=True, help="output CSV path")
    p_extract.add_argument(
        "--idle-timeout", type=float, default=30.0, metavar="SECS",
        help="idle flow timeout in seconds (default 30)",
    )
    p_extract.add_argument(
        "--active-timeout", type=float, default=120.0, metavar="SECS",
        help="maximum flow lifetime in seconds (default 120)",
    )
    p_extract.add_argument("--l7-table", help="port,protocol,id table file")
    p_extract.add_argument(
        "--variant", choices=("basic", "extended"), default="extended",
        help="feature set to write (default extended)",
    )
    p_extract.add_argument(
        "--workers", type=int, default=1, help="parallel workers, sharded per input file"
    )
    p_extract.add_argument(
        "--ground-truth", help="label flows inline against this event CSV"
    )
    p_extract.add_argument(
        "--no-time-windows", action="store_true",
        help="ignore ground-truth start/end times when labelling",
    )
    p_extract.set_defaults(func=cmd_extract)

    p_label = sub.add_parser("label", help="label a flow CSV against ground truth")
    p_label.add_argument("flows", help="flow CSV from extract")
    p_label.add_argument("--ground-truth", required=True, help="attack event CSV")
    p_label.add_argument("-o", "--output", required=True, help="labelled CSV path")
    strictness = p_label.add_mutually_exclusive_group()
    strictness.add_argument(
        "--strict", dest="strict", action="store_true", default=True,
        help="abort on malformed rows (default)",
    )
    strictness.add_argument(
        "--lenient", dest="strict", action="store_false",
        help="skip malformed rows with a report",
    )
    p_label.add_argument(
        "--no-time-windows", action="store_true",
        help="ignore ground-truth start/end times",
    )
    p_label.set_defaults(func=cmd_label)

    p_merge = sub.add_parser("merge", help="merge labelled datasets into one corpus")
    p_merge.add_argument(
        "datasets", nargs="+", metavar="NAME=PATH",
        help="labelled CSVs; NAME fills the Dataset column (default: file stem)",
    )
    p_merge.add_argument("-o", "--output", required=True, help="merged CSV path")
    p_merge.add_argument("--mapping", help="source,canonical category rename file")
    p_merge.set_defaults(func=cmd_merge)

    p_stats = sub.add_parser("stats", help="print the label distribution of a CSV")
    p_stats.add_argument("flows", help="labelled CSV")
    p_stats.set_defaults(func=cmd_stats)

    p_project = sub.add_parser("project", help="reduce an extended CSV to the basic set")
    p_project.add_argument("flows", help="extended-43 CSV")
    p_project.add_argument("-o", "--output", required=True, help="basic-12 CSV path")
    p_project.set_defaults(func=cmd_project)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "workers", 1) < 1:
        parser.error("--workers must be >= 1")
    if getattr(args, "idle_timeout", 1.0) <= 0 or getattr(args, "active_timeout", 1.0) <= 0:
        parser.error("timeouts must be positive")
    try:
        return args.func(args)
    except NfmeterError as exc:
        _err(str(exc))
        return 2
    except OSError as exc:
        _err(f"{exc.filename or ''}: {exc.strerror or exc}".strip())
        return 2


if __name__ == "__main__":
    sys.exit(main())
