"""Render multi-panel figures from conet-probe CSV reports.

This package consumes only the CSV files the sweep tool writes
(``informativeness.csv`` and ``variability.csv``); it never touches the
producer's in-process objects, so the two packages can be installed and
upgraded independently.
"""

from .render import FigureSpec, build_figure, render
from .schema import FigureDataError, load_report

__all__ = [
    "FigureDataError",
    "FigureSpec",
    "build_figure",
    "load_report",
    "render",
]

__version__ = "0.1.0"
