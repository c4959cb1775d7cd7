"""Figure assembly and deterministic output.

One figure is a 2x3 grid of panels, one per graph metric in a fixed
order, with one curve per text size and the enrichment level P on the
x-axis.  Rendering the same spec against the same CSV twice must produce
byte-identical files, so everything that could drift (backend, ids,
timestamps) is pinned here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg", force=False)

from matplotlib.figure import Figure

from .schema import (
    METRIC_ORDER,
    REPORT_INFO,
    REPORT_NAMES,
    SUMMARY_NAMES,
    FigureDataError,
    ReportRow,
    load_report,
    report_filename,
)

FIGSIZE = (13.0, 7.5)
DPI = 100
CURVE_COLORS = (
    "#1f77b4",
    "#ff7f0e",
    "#2ca02c",
    "#d62728",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
)
REFERENCE_LABEL = "_reference"
SVG_HASHSALT = "conet-figures"
OUTPUT_SUFFIXES = (".png", ".svg")


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: which report, which summary, from where, to where."""

    input_dir: Path
    report: str
    summary: str
    out_path: Path
    strategy: str | None = None
    stopwords: str | None = None

    def __post_init__(self) -> None:
        if self.report not in REPORT_NAMES:
            raise FigureDataError(
                f"unknown report {self.report!r}; "
                f"expected one of {', '.join(REPORT_NAMES)}"
            )
        if self.summary not in SUMMARY_NAMES:
            raise FigureDataError(
                f"unknown summary {self.summary!r}; "
                f"expected one of {', '.join(SUMMARY_NAMES)}"
            )
        if self.out_path.suffix not in OUTPUT_SUFFIXES:
            raise FigureDataError(
                f"output file must end in {' or '.join(OUTPUT_SUFFIXES)}, "
                f"got {self.out_path.name!r}"
            )

    @property
    def csv_path(self) -> Path:
        return self.input_dir / report_filename(self.report)


@dataclass(frozen=True)
class SeriesGrid:
    """Selected, validated curves: one per (metric, size) pair."""

    strategy: str
    stopwords: str
    sizes: tuple[int, ...]
    series: dict[tuple[str, int], tuple[tuple[float, float], ...]] = field(
        repr=False
    )


def _resolve_selector(
    requested: str | None, available: list[str], *, path: Path, column: str
) -> str:
    if requested is not None:
        if requested not in available:
            raise FigureDataError(
                f"{path}: no rows with {column}={requested!r}; "
                f"available: {', '.join(available)}"
            )
        return requested
    if len(available) == 1:
        return available[0]
    raise FigureDataError(
        f"{path}: column {column!r} has several values "
        f"({', '.join(available)}); pass --{column} to pick one"
    )


def select_series(rows: list[ReportRow], spec: FigureSpec) -> SeriesGrid:
    """Filter rows down to the requested summary/strategy/stopwords slice.

    Every metric in the fixed panel order must yield one curve per text
    size present in the slice; a missing or partially undefined series
    is an error rather than an empty panel.
    """
    path = spec.csv_path
    pool = [r for r in rows if r.summary == spec.summary]
    if not pool:
        raise FigureDataError(
            f"{path}: no rows with summary={spec.summary!r} in column 'summary'"
        )
    strategy = _resolve_selector(
        spec.strategy,
        sorted({r.strategy for r in pool}),
        path=path,
        column="strategy",
    )
    pool = [r for r in pool if r.strategy == strategy]
    stopwords = _resolve_selector(
        spec.stopwords,
        sorted({r.stopwords for r in pool}),
        path=path,
        column="stopwords",
    )
    pool = [r for r in pool if r.stopwords == stopwords]

    sizes = tuple(sorted({r.size for r in pool}))
    points: dict[tuple[str, int], dict[float, float]] = {}
    for row in pool:
        key = (row.metric, row.size)
        if row.value is None:
            raise FigureDataError(
                f"{path}: value for metric {row.metric!r}, size {row.size}, "
                f"P={row.p:g} is undefined; cannot plot this slice"
            )
        bucket = points.setdefault(key, {})
        if row.p in bucket:
            raise FigureDataError(
                f"{path}: duplicate rows for metric {row.metric!r}, "
                f"size {row.size}, P={row.p:g}"
            )
        bucket[row.p] = row.value

    series: dict[tuple[str, int], tuple[tuple[float, float], ...]] = {}
    for metric in METRIC_ORDER:
        for size in sizes:
            bucket = points.get((metric, size))
            if not bucket:
                raise FigureDataError(
                    f"{path}: no rows for metric {metric!r} at size {size} "
                    f"(summary={spec.summary!r}, strategy={strategy!r}, "
                    f"stopwords={stopwords!r})"
                )
            series[(metric, size)] = tuple(sorted(bucket.items()))
    return SeriesGrid(
        strategy=strategy, stopwords=stopwords, sizes=sizes, series=series
    )


def build_figure(spec: FigureSpec, grid: SeriesGrid) -> Figure:
    """Assemble the 2x3 panel figure for an already-selected grid."""
    fig = Figure(figsize=FIGSIZE, dpi=DPI)
    axes = fig.subplots(2, 3, sharex=True)
    flat = axes.ravel()
    info = spec.report == REPORT_INFO
    for ax, metric in zip(flat, METRIC_ORDER):
        if not info:
            ax.axhline(
                1.0,
                color="#999999",
                linestyle="--",
                linewidth=1.0,
                label=REFERENCE_LABEL,
                zorder=1,
            )
        for idx, size in enumerate(grid.sizes):
            pts = grid.series[(metric, size)]
            xs = [p for p, _ in pts]
            ys = [v for _, v in pts]
            ax.plot(
                xs,
                ys,
                marker="o",
                markersize=4,
                linewidth=1.6,
                color=CURVE_COLORS[idx % len(CURVE_COLORS)],
                label=f"size {size}",
                zorder=2,
            )
        ax.set_title(metric.replace("_", " "))
        ax.grid(True, linewidth=0.4, alpha=0.5)
        if info:
            ax.set_ylim(0.0, 100.0)
    for ax in axes[1]:
        ax.set_xlabel("P (%)")
    ylabel = "informative texts (%)" if info else "variability ratio"
    for row in axes:
        row[0].set_ylabel(ylabel)
    kind = "informativeness" if info else "variability"
    fig.suptitle(
        f"{kind} by enrichment level — {spec.summary.replace('_', ' ')} "
        f"(strategy={grid.strategy}, stopwords={grid.stopwords})"
    )
    handles, labels = flat[0].get_legend_handles_labels()
    fig.legend(handles, labels, loc="lower center", ncol=max(len(labels), 1))
    fig.subplots_adjust(
        left=0.06, right=0.985, top=0.90, bottom=0.13, hspace=0.32, wspace=0.26
    )
    return fig


def _save(fig: Figure, out_path: Path) -> None:
    # Strip per-run metadata so identical specs yield identical bytes.
    if out_path.suffix == ".png":
        fig.savefig(out_path, format="png", metadata={"Software": None})
        return
    with matplotlib.rc_context({"svg.hashsalt": SVG_HASHSALT}):
        fig.savefig(out_path, format="svg", metadata={"Date": None})


def render(spec: FigureSpec) -> Path:
    """Load, select, draw, and write; returns the output path."""
    rows = load_report(spec.csv_path, spec.report)
    grid = select_series(rows, spec)
    fig = build_figure(spec, grid)
    spec.out_path.parent.mkdir(parents=True, exist_ok=True)
    _save(fig, spec.out_path)
    return spec.out_path
