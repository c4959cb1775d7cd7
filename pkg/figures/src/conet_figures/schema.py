"""CSV report loading and validation.

The input contract is the pair of summary files written by the sweep
tool.  Column names are pinned here as literals; validation failures
always name the offending file, row, and column so a bad export is
diagnosable without opening the CSV by hand.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

REPORT_INFO = "info"
REPORT_VAR = "var"
REPORT_NAMES = (REPORT_INFO, REPORT_VAR)

INFO_FILENAME = "informativeness.csv"
VAR_FILENAME = "variability.csv"

# Column sets as produced upstream; order in the file does not matter,
# presence does.
INFO_COLUMNS = (
    "size",
    "stopwords",
    "strategy",
    "P",
    "metric",
    "summary",
    "I",
    "n_t",
    "n_informative",
    "n_undefined",
)
VAR_COLUMNS = (
    "size",
    "stopwords",
    "strategy",
    "P",
    "metric",
    "summary",
    "v_syntax",
    "v_semantics",
    "v_ratio",
    "syntax_dominant",
)

# Fixed panel order for the 2x3 grid.
METRIC_ORDER = (
    "avg_shortest_path",
    "closeness",
    "clustering",
    "betweenness",
    "pagerank",
    "eigenvector",
)

SUMMARY_ALL = "all_nodes"
SUMMARY_TOP = "top_words"
SUMMARY_NAMES = (SUMMARY_ALL, SUMMARY_TOP)


class FigureDataError(ValueError):
    """Input CSV is missing, malformed, or does not cover the request."""


@dataclass(frozen=True)
class ReportRow:
    """One summary cell: the y-value for a (metric, summary, size, P) point."""

    size: int
    stopwords: str
    strategy: str
    p: float
    metric: str
    summary: str
    value: float | None


def report_filename(report: str) -> str:
    """Map a report kind to the CSV file it is drawn from."""
    if report == REPORT_INFO:
        return INFO_FILENAME
    if report == REPORT_VAR:
        return VAR_FILENAME
    raise FigureDataError(
        f"unknown report {report!r}; expected one of {', '.join(REPORT_NAMES)}"
    )


def _value_column(report: str) -> str:
    return "I" if report == REPORT_INFO else "v_ratio"


def _parse_float(
    raw: str, *, path: Path, line: int, column: str, allow_empty: bool
) -> float | None:
    if raw == "":
        if allow_empty:
            return None
        raise FigureDataError(f"{path}:{line}: column {column!r} is empty")
    try:
        return float(raw)
    except ValueError:
        raise FigureDataError(
            f"{path}:{line}: column {column!r} has non-numeric value {raw!r}"
        ) from None


def _parse_int(raw: str, *, path: Path, line: int, column: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise FigureDataError(
            f"{path}:{line}: column {column!r} has non-integer value {raw!r}"
        ) from None


def load_report(path: Path, report: str) -> list[ReportRow]:
    """Read one summary CSV into typed rows.

    Raises :class:`FigureDataError` if the file is absent, a required
    column is missing from the header, a cell fails to parse, or an
    informativeness value falls outside [0, 100].  Empty value cells
    (undefined summaries) load as ``None``.
    """
    required = INFO_COLUMNS if report == REPORT_INFO else VAR_COLUMNS
    value_col = _value_column(report)
    if not path.is_file():
        raise FigureDataError(f"report file not found: {path}")
    rows: list[ReportRow] = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames
        if header is None:
            raise FigureDataError(f"{path}: file is empty")
        missing = [c for c in required if c not in header]
        if missing:
            raise FigureDataError(
                f"{path}: missing required column(s) {', '.join(missing)}"
            )
        for record in reader:
            line = reader.line_num
            if None in record.values() or None in record:
                raise FigureDataError(
                    f"{path}:{line}: row has wrong number of fields"
                )
            size = _parse_int(record["size"], path=path, line=line, column="size")
            p = _parse_float(
                record["P"], path=path, line=line, column="P", allow_empty=False
            )
            metric = record["metric"]
            if metric not in METRIC_ORDER:
                raise FigureDataError(
                    f"{path}:{line}: column 'metric' has unknown value {metric!r}"
                )
            summary = record["summary"]
            if summary not in SUMMARY_NAMES:
                raise FigureDataError(
                    f"{path}:{line}: column 'summary' has unknown value {summary!r}"
                )
            value = _parse_float(
                record[value_col],
                path=path,
                line=line,
                column=value_col,
                allow_empty=True,
            )
            if (
                report == REPORT_INFO
                and value is not None
                and not 0.0 <= value <= 100.0
            ):
                raise FigureDataError(
                    f"{path}:{line}: column 'I' must lie in [0, 100], got {value!r}"
                )
            assert p is not None
            rows.append(
                ReportRow(
                    size=size,
                    stopwords=record["stopwords"],
                    strategy=record["strategy"],
                    p=p,
                    metric=metric,
                    summary=summary,
                    value=value,
                )
            )
    if not rows:
        raise FigureDataError(f"{path}: no data rows")
    return rows
