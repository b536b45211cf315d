"""Command-line entry point for evaluating flow datasets.

    nfbench evaluate --dataset flows.csv --task binary --out report.csv

Loads a labelled flow CSV, runs the repeated-split Extra-Trees evaluation,
and renders the result as a text table or CSV. The report format defaults
to CSV when the output path ends in .csv, text otherwise.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import EvalError
from .evaluate import EvalConfig, run_evaluation
from .loading import load_dataset
from .report import ReportRow, render


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nfbench", description="Evaluate classifiers on flow-feature datasets."
    )
    commands = parser.add_subparsers(dest="command", required=True)

    evaluate = commands.add_parser(
        "evaluate", help="run a repeated-split evaluation on one dataset"
    )
    evaluate.add_argument("--dataset", required=True, help="labelled flow CSV to evaluate")
    evaluate.add_argument(
        "--task",
        choices=("binary", "multiclass"),
        default="binary",
        help="predict the binary Label or the Attack category (default: binary)",
    )
    evaluate.add_argument(
        "--variant",
        choices=("basic", "extended"),
        help="assert the dataset's feature variant; fails if the file disagrees",
    )
    evaluate.add_argument(
        "--drop-ttl",
        action="store_true",
        help="exclude MIN_TTL/MAX_TTL from the feature matrix",
    )
    evaluate.add_argument("--seed", type=int, default=0, help="base random seed (default: 0)")
    evaluate.add_argument(
        "--repetitions", type=int, default=5, help="independent splits to average (default: 5)"
    )
    evaluate.add_argument(
        "--test-fraction",
        type=float,
        default=0.3,
        help="held-out share of rows per split (default: 0.3)",
    )
    evaluate.add_argument(
        "--trees", type=int, default=100, help="trees in the forest (default: 100)"
    )
    evaluate.add_argument(
        "--name", help="dataset name shown in the report (default: file stem)"
    )
    evaluate.add_argument(
        "--format", choices=("text", "csv"), help="report format (default: by output suffix)"
    )
    evaluate.add_argument("-o", "--out", help="write the report here instead of stdout")
    return parser


def _run_evaluate(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.repetitions < 1:
        parser.error("--repetitions must be at least 1")
    if not 0.0 < args.test_fraction < 1.0:
        parser.error("--test-fraction must be strictly between 0 and 1")
    if args.trees < 1:
        parser.error("--trees must be at least 1")

    dataset = load_dataset(args.dataset)
    variant = dataset.layout.variant
    if args.variant is not None and args.variant != variant:
        raise EvalError(
            f"{args.dataset}: expected a {args.variant}-variant file, found {variant}"
        )

    config = EvalConfig(
        dataset=args.dataset,
        task=args.task,
        drop_ttl=args.drop_ttl,
        test_fraction=args.test_fraction,
        repetitions=args.repetitions,
        seed=args.seed,
        n_estimators=args.trees,
    )
    metrics = run_evaluation(config)

    name = args.name if args.name is not None else Path(args.dataset).stem
    fmt = args.format
    if fmt is None:
        fmt = "csv" if args.out is not None and args.out.endswith(".csv") else "text"
    rendered = render([ReportRow(dataset=name, variant=variant, metrics=metrics)], fmt)

    if args.out is not None:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(rendered)
        print(f"wrote {args.out} ({metrics.repetitions} repetitions)", file=sys.stderr)
    else:
        sys.stdout.write(rendered)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "evaluate":
            return _run_evaluate(args, parser)
        parser.error(f"unknown command {args.command!r}")
    except (EvalError, OSError) as exc:
        print(f"nfbench: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
