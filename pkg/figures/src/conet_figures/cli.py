"""Command line front end: `conet-figures`."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import FigureSpec, render
from .schema import SUMMARY_ALL, SUMMARY_TOP, FigureDataError

# CLI keeps the short summary spellings; the CSV column uses the long ones.
SUMMARY_FLAGS = {"all": SUMMARY_ALL, "top": SUMMARY_TOP}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conet-figures",
        description=(
            "Render a 2x3 metric grid (one panel per graph metric, one "
            "curve per text size) from the CSV reports of a conet-probe "
            "sweep."
        ),
    )
    parser.add_argument(
        "--report",
        required=True,
        choices=["info", "var"],
        help="which report to draw: informativeness or variability ratio",
    )
    parser.add_argument(
        "--summary",
        required=True,
        choices=sorted(SUMMARY_FLAGS),
        help="node summary to plot: all nodes or top-frequency words",
    )
    parser.add_argument(
        "--in",
        dest="input_dir",
        required=True,
        type=Path,
        metavar="DIR",
        help="directory holding informativeness.csv / variability.csv",
    )
    parser.add_argument(
        "--out",
        required=True,
        type=Path,
        metavar="FILE",
        help="output image path (.png or .svg)",
    )
    parser.add_argument(
        "--strategy",
        help="enrichment strategy to plot when the CSV holds several",
    )
    parser.add_argument(
        "--stopwords",
        help="stopword handling to plot when the CSV holds several",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(
            input_dir=args.input_dir,
            report=args.report,
            summary=SUMMARY_FLAGS[args.summary],
            out_path=args.out,
            strategy=args.strategy,
            stopwords=args.stopwords,
        )
        out = render(spec)
    except (FigureDataError, OSError) as exc:
        print(f"conet-figures: error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
