"""Command-line entry point: ``hhikit analyze --input sales.csv``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from typing import List, Optional

from .dataset import parse_csv
from .errors import HhikitError
from .report import render_csv, render_svg, render_table
from .series import analyze_series

DEFAULT_GAP_THRESHOLDS = (1.0, 3.5)
_PLOT_CHOICES = {"shares": "shares", "hhi": "hhi", "cr4": "cr4", "top-share": "top_share"}


@dataclass(frozen=True)
class RunConfig:
    input_path: str
    output_format: str = "table"
    plot_metric: Optional[str] = None
    plot_path: Optional[str] = None
    k: int = 4
    gap_thresholds_pct: List[float] = field(default_factory=lambda: list(DEFAULT_GAP_THRESHOLDS))

    def __post_init__(self):
        if self.output_format not in ("table", "csv"):
            raise ValueError(f"unknown output format {self.output_format!r}")
        if (self.plot_metric is None) != (self.plot_path is None):
            raise ValueError("--plot and --plot-path must be given together")
        if self.k < 1:
            raise ValueError(f"--k must be a positive integer, got {self.k}")


def run(config: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        with open(config.input_path, "rb") as fh:
            dataset = parse_csv(fh)
    except OSError as exc:
        print(f"error: cannot read {config.input_path}: {exc.strerror or exc}", file=stderr)
        return 1
    except HhikitError as exc:
        print(f"error: {config.input_path}: {type(exc).__name__}: {exc}", file=stderr)
        return 1

    try:
        report = analyze_series(dataset, k=config.k)
        svg = render_svg(report, config.plot_metric) if config.plot_metric else None
    except HhikitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return 1

    if config.output_format == "csv":
        stdout.write(render_csv(report, config.gap_thresholds_pct))
    else:
        stdout.write(render_table(report, config.gap_thresholds_pct))

    if svg is not None:
        try:
            with open(config.plot_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(svg)
        except OSError as exc:
            print(f"error: cannot write {config.plot_path}: {exc.strerror or exc}", file=stderr)
            return 1
    return 0


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hhikit", description="Market concentration analytics for quarterly share data."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    an = sub.add_parser("analyze", help="compute HHI bounds, CR4 and crossovers per quarter")
    an.add_argument("--input", required=True, help="CSV with header quarter,vendor,units")
    an.add_argument("--format", choices=("table", "csv"), default="table")
    an.add_argument("--plot", choices=tuple(_PLOT_CHOICES), help="metric to chart as SVG")
    an.add_argument("--plot-path", help="where to write the SVG chart")
    an.add_argument("--k", type=_positive_int, default=4, help="firms in the concentration ratio")
    an.add_argument(
        "--gap-threshold", type=float, action="append", dest="gap_thresholds",
        metavar="PCT", help="relative bound gap threshold in percent (repeatable)",
    )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="warning: %(message)s")
    if (args.plot is None) != (args.plot_path is None):
        parser.error("--plot and --plot-path must be given together")
    config = RunConfig(
        input_path=args.input,
        output_format=args.format,
        plot_metric=_PLOT_CHOICES[args.plot] if args.plot else None,
        plot_path=args.plot_path,
        k=args.k,
        gap_thresholds_pct=args.gap_thresholds or list(DEFAULT_GAP_THRESHOLDS),
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
