"""Baseline normalization, informativeness, and variability statistics.

A metric value X~ measured on a real text is compared against the
mean mu and population standard deviation sigma of the same metric
over that text's shuffled replicas:

    X = X~ / mu          (normalized value)
    eps = |sigma / mu * X|   (propagated relative deviation)
    D = |X - 1| / eps    (distance from the shuffled baseline)

A cell is informative when D > 1.  Informativeness I is the
percentage of texts with D > 1 in a configuration cell; the
variability ratio V_R compares the coefficient of variation across
languages (fixed content) to the one across texts (fixed language).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


class StatsError(ValueError):
    """Raised when a statistics precondition is violated."""


@dataclass(frozen=True)
class NormalizedMetric:
    """One text's metric value normalized against its shuffled baseline.

    Fields are None when undefined; ``reason`` is non-empty exactly in
    that case.  ``d`` holds the distance actually used for the
    informative decision (absolute by default, signed when requested);
    the sign of X - 1 stays auditable through x_norm.
    """

    x_raw: float | None
    baseline_mean: float | None
    baseline_std: float | None
    x_norm: float | None
    eps: float | None
    d: float | None
    informative: bool | None
    reason: str = ""


@dataclass(frozen=True)
class InformativenessEntry:
    """Share of texts in one configuration cell that beat the baseline."""

    i_percent: float | None
    n_t: int
    n_informative: int
    n_undefined: int


@dataclass(frozen=True)
class VariabilityEntry:
    """Syntax-vs-semantics variability comparison for one cell."""

    v_syntax: float | None
    v_semantics: float | None
    v_ratio: float | None
    syntax_dominant: bool | None
    reason: str = ""


def normalize(
    x_raw: float | None,
    baseline: Sequence[float | None],
    *,
    signed: bool = False,
    ddof: int = 0,
) -> NormalizedMetric:
    """Normalize one measurement against its replica baseline.

    ``baseline`` holds the replica values; Nones (replicas where the
    metric was undefined) are excluded from mu and sigma.  sigma is
    the population standard deviation unless ddof=1.  Undefined
    results (undefined x_raw, no defined replicas, or zero mu) come
    back with a reason instead of raising; an empty baseline list is a
    caller bug and raises.
    """
    if len(baseline) == 0:
        raise StatsError("baseline must contain at least one replica value")
    defined = np.asarray(
        [b for b in baseline if b is not None], dtype=float
    )
    mu = float(defined.mean()) if defined.size else None
    sigma = (
        float(defined.std(ddof=ddof))
        if defined.size > ddof
        else None
    )
    if x_raw is None:
        return NormalizedMetric(
            x_raw=None, baseline_mean=mu, baseline_std=sigma,
            x_norm=None, eps=None, d=None, informative=None,
            reason="metric undefined on the original text",
        )
    if defined.size == 0:
        return NormalizedMetric(
            x_raw=x_raw, baseline_mean=None, baseline_std=None,
            x_norm=None, eps=None, d=None, informative=None,
            reason="no defined baseline replicas",
        )
    if sigma is None:
        return NormalizedMetric(
            x_raw=x_raw, baseline_mean=mu, baseline_std=None,
            x_norm=None, eps=None, d=None, informative=None,
            reason="too few baseline replicas for the deviation",
        )
    if mu == 0.0:
        return NormalizedMetric(
            x_raw=x_raw, baseline_mean=mu, baseline_std=sigma,
            x_norm=None, eps=None, d=None, informative=None,
            reason="baseline mean is zero",
        )
    x_norm = x_raw / mu
    eps = abs(sigma / mu * x_norm)
    delta = x_norm - 1.0
    if eps == 0.0:
        # The text either matches a zero-variance baseline exactly or
        # separates from it by any finite amount.
        if delta == 0.0:
            d = 0.0
        elif signed:
            d = math.copysign(math.inf, delta)
        else:
            d = math.inf
    else:
        d = delta / eps if signed else abs(delta) / eps
    return NormalizedMetric(
        x_raw=x_raw, baseline_mean=mu, baseline_std=sigma,
        x_norm=x_norm, eps=eps, d=d, informative=d > 1.0,
    )


def informativeness(
    cells: Sequence[NormalizedMetric],
) -> InformativenessEntry:
    """Aggregate one configuration cell across texts.

    I = 100 * |D > 1| / N_T where N_T counts only texts with a defined
    D; undefined texts are excluded from both sides and tallied in
    n_undefined.  I is None when every text was undefined.
    """
    if len(cells) == 0:
        raise StatsError("informativeness needs at least one cell")
    defined = [c for c in cells if c.d is not None]
    n_informative = sum(1 for c in defined if c.informative)
    n_t = len(defined)
    i_percent = 100.0 * n_informative / n_t if n_t else None
    return InformativenessEntry(
        i_percent=i_percent,
        n_t=n_t,
        n_informative=n_informative,
        n_undefined=len(cells) - n_t,
    )


def coefficient_of_variation(values: Sequence[float]) -> float:
    """Population standard deviation over the absolute mean."""
    arr = np.asarray(list(values), dtype=float)
    if arr.size < 2:
        raise StatsError(
            f"coefficient of variation needs >= 2 values, got {arr.size}"
        )
    mu = float(arr.mean())
    if mu == 0.0:
        raise StatsError("coefficient of variation undefined at zero mean")
    return float(arr.std()) / abs(mu)


def variability_ratio(
    syntax_values: Sequence[float], semantics_values: Sequence[float]
) -> float:
    """V_R = CV(fixed content, varying language) / CV(fixed language).

    V_R > 1 means the metric moves more with syntax than with
    semantics.  Raises when either CV is degenerate or the semantic
    variability is zero.
    """
    v_syntax = coefficient_of_variation(syntax_values)
    v_semantics = coefficient_of_variation(semantics_values)
    if v_semantics == 0.0:
        raise StatsError("semantic variability is zero; ratio undefined")
    return v_syntax / v_semantics


def variability_entry(
    syntax_values: Sequence[float], semantics_values: Sequence[float]
) -> VariabilityEntry:
    """Non-raising variability comparison for report assembly."""
    v_syntax = v_semantics = None
    reasons = []
    try:
        v_syntax = coefficient_of_variation(syntax_values)
    except StatsError as exc:
        reasons.append(f"syntax: {exc}")
    try:
        v_semantics = coefficient_of_variation(semantics_values)
    except StatsError as exc:
        reasons.append(f"semantics: {exc}")
    ratio = dominant = None
    if v_syntax is not None and v_semantics is not None:
        if v_semantics == 0.0:
            reasons.append("semantics: variability is zero; ratio undefined")
        else:
            ratio = v_syntax / v_semantics
            dominant = ratio > 1.0
    return VariabilityEntry(
        v_syntax=v_syntax,
        v_semantics=v_semantics,
        v_ratio=ratio,
        syntax_dominant=dominant,
        reason="; ".join(reasons),
    )
