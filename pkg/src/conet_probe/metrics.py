"""Six node-level network metrics and their two summarizations.

All metrics treat the graph as undirected, unweighted, and simple.
Distance-based metrics (avg_shortest_path, closeness, betweenness) are
computed on the largest connected component and are undefined for
nodes outside it; clustering and PageRank cover the full graph;
eigenvector centrality is computed on the largest component and is 0
elsewhere.  Undefined per-node values are NaN and drop out of
summaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .network import CoocNetwork

METRIC_NAMES = (
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

DEFAULT_DAMPING = 0.85
POWER_TOL = 1e-10
POWER_MAX_ITER = 1000
TOP_WORD_COUNT = 10


class MetricUndefinedError(ValueError):
    """A metric has no defined value on this graph."""


class ConvergenceError(RuntimeError):
    """An iterative solver hit its iteration cap; carries the residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass
class TopWords:
    """The highest-frequency words of one document's network.

    Ties break by earlier first occurrence (lower node index), then
    lexicographically.  Shuffles of a document keep its frequency
    table, so its TopWords carry over to its replicas unchanged.
    """

    words: tuple[str, ...]
    frequencies: dict[str, int]


@dataclass
class MetricVector:
    """All 12 summary values for one network, plus audit fields.

    ``values`` maps (metric, summary) to a float, or None when the
    value is undefined; ``reasons`` explains each None.  ``skipped``
    counts nodes that were requested by a summary but had no defined
    value.  ``component_coverage`` is |largest component| / |nodes|.
    """

    values: dict[tuple[str, str], float | None]
    reasons: dict[tuple[str, str], str] = field(default_factory=dict)
    skipped: dict[tuple[str, str], int] = field(default_factory=dict)
    component_coverage: float = 1.0

    def get(self, metric: str, summary: str) -> float | None:
        return self.values[(metric, summary)]

    def to_json_dict(self) -> dict:
        return {
            "values": {
                f"{m}/{s}": v for (m, s), v in self.values.items()
            },
            "reasons": {
                f"{m}/{s}": r for (m, s), r in self.reasons.items()
            },
            "skipped": {
                f"{m}/{s}": c for (m, s), c in self.skipped.items()
            },
            "component_coverage": self.component_coverage,
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "MetricVector":
        def unkey(d):
            return {tuple(k.split("/", 1)): v for k, v in d.items()}

        return cls(
            values=unkey(payload["values"]),
            reasons=unkey(payload.get("reasons", {})),
            skipped=unkey(payload.get("skipped", {})),
            component_coverage=payload["component_coverage"],
        )


def _as_csr(graph) -> sp.csr_array:
    """Accept a CoocNetwork, dense array, or sparse matrix."""
    if isinstance(graph, CoocNetwork):
        n = graph.n_nodes
        pairs = list(graph.cooc_edges) + list(graph.virtual_edges)
        if not pairs:
            return sp.csr_array((n, n))
        rows = [i for i, _ in pairs] + [j for _, j in pairs]
        cols = [j for _, j in pairs] + [i for i, _ in pairs]
        data = np.ones(len(rows))
        return sp.csr_array((data, (rows, cols)), shape=(n, n))
    if sp.issparse(graph):
        return sp.csr_array(graph)
    arr = np.asarray(graph, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"adjacency must be square, got shape {arr.shape}")
    return sp.csr_array(arr)


def largest_component(adj) -> np.ndarray:
    """Sorted node indices of the largest connected component.

    Size ties resolve to the component containing the smallest node
    index, which is deterministic under any input.
    """
    a = _as_csr(adj)
    n = a.shape[0]
    if n == 0:
        raise MetricUndefinedError("graph has no nodes")
    _, labels = csgraph.connected_components(a, directed=False)
    sizes = np.bincount(labels)
    return np.flatnonzero(labels == int(np.argmax(sizes)))


def distance_matrix(adj) -> np.ndarray:
    """All-pairs unweighted shortest-path distances (np.inf if unreachable)."""
    a = _as_csr(adj)
    return csgraph.shortest_path(a, method="D", unweighted=True)


def _lcc_context(adj):
    a = _as_csr(adj)
    comp = largest_component(a)
    sub = a if comp.size == a.shape[0] else sp.csr_array(a[np.ix_(comp, comp)])
    dist = distance_matrix(sub)
    return a, comp, sub, dist


def avg_shortest_path_nodes(adj) -> np.ndarray:
    """Per-node mean distance to the other largest-component nodes.

    NaN outside the largest component.  The all-node mean of this
    array equals the mean distance over unordered reachable pairs.
    """
    a, comp, _, dist = _lcc_context(adj)
    out = np.full(a.shape[0], np.nan)
    n_c = comp.size
    if n_c >= 2:
        out[comp] = dist.sum(axis=1) / (n_c - 1)
    return out


def avg_shortest_path(adj) -> float:
    """Mean distance over unordered node pairs of the largest component."""
    values = avg_shortest_path_nodes(adj)
    defined = values[~np.isnan(values)]
    if defined.size == 0:
        raise MetricUndefinedError(
            "largest component has fewer than 2 nodes"
        )
    return float(defined.mean())


def closeness_nodes(adj) -> np.ndarray:
    """(n_c - 1) / farness within the largest component; NaN outside."""
    a, comp, _, dist = _lcc_context(adj)
    out = np.full(a.shape[0], np.nan)
    n_c = comp.size
    if n_c >= 2:
        out[comp] = (n_c - 1) / dist.sum(axis=1)
    return out


def clustering_nodes(adj) -> np.ndarray:
    """Triangle density of each node's neighborhood, on the full graph.

    triangles / C(degree, 2), defined as 0 when degree < 2.
    """
    a = _as_csr(adj)
    deg = np.asarray(a.sum(axis=1)).ravel()
    # (A @ A) .* A sums common-neighbor counts over incident edges,
    # which double-counts each triangle at the node.
    paths = np.asarray((a @ a).multiply(a).sum(axis=1)).ravel()
    denom = deg * (deg - 1)
    out = np.zeros(a.shape[0])
    mask = deg >= 2
    out[mask] = paths[mask] / denom[mask]
    return out


def _betweenness_on_component(sub: sp.csr_array, dist: np.ndarray) -> np.ndarray:
    """Brandes accumulation, level-synchronous over all sources at once.

    sigma (path counts) grows level by level through sparse products;
    delta (dependencies) flows back down.  Summation order is fixed by
    the level schedule and numpy's axis-0 reduction, so results are
    bit-stable for a given scipy/numpy pair.
    """
    n = sub.shape[0]
    if n < 3:
        return np.zeros(n)
    max_level = int(dist.max())
    masks = [dist == level for level in range(max_level + 1)]
    sigma = np.zeros((n, n))
    np.fill_diagonal(sigma, 1.0)
    for level in range(1, max_level + 1):
        frontier = sigma * masks[level - 1]
        sigma += (sub @ frontier.T).T * masks[level]

    delta = np.zeros((n, n))
    with np.errstate(invalid="ignore", divide="ignore"):
        for level in range(max_level, 0, -1):
            ratio = np.where(masks[level], (1.0 + delta) / sigma, 0.0)
            delta += (sub @ ratio.T).T * sigma * masks[level - 1]
    np.fill_diagonal(delta, 0.0)
    return delta.sum(axis=0) / ((n - 1.0) * (n - 2.0))


def betweenness_nodes(adj) -> np.ndarray:
    """Normalized shortest-path betweenness on the largest component.

    Fraction of shortest paths through the node, summed over unordered
    source-target pairs and divided by (n_c-1)(n_c-2)/2; equivalently
    the raw directed accumulation divided by (n_c-1)(n_c-2).  Zero
    when the component has < 3 nodes; NaN outside the component.
    """
    a, comp, sub, dist = _lcc_context(adj)
    out = np.full(a.shape[0], np.nan)
    out[comp] = _betweenness_on_component(sub, dist)
    return out


def pagerank_nodes(adj, damping: float = DEFAULT_DAMPING) -> np.ndarray:
    """PageRank on the full graph, each edge walked in both directions.

    Dangling (degree-0) mass is spread uniformly.  Iterates until the
    L1 change is below 1e-10, capped at 1000 rounds; the scores sum
    to 1.
    """
    if not 0.0 < damping < 1.0:
        raise ValueError(f"damping must be in (0, 1), got {damping}")
    a = _as_csr(adj)
    n = a.shape[0]
    if n == 0:
        raise MetricUndefinedError("graph has no nodes")
    deg = np.asarray(a.sum(axis=1)).ravel()
    dangling = deg == 0.0
    inv_deg = np.where(dangling, 0.0, 1.0 / np.where(dangling, 1.0, deg))
    rank = np.full(n, 1.0 / n)
    for _ in range(POWER_MAX_ITER):
        share = rank * inv_deg
        flow = a @ share
        spread = rank[dangling].sum() / n
        new = (1.0 - damping) / n + damping * (flow + spread)
        residual = float(np.abs(new - rank).sum())
        rank = new
        if residual < POWER_TOL:
            return rank
    raise ConvergenceError(
        f"pagerank did not converge in {POWER_MAX_ITER} iterations "
        f"(L1 residual {residual:.3e})",
        residual,
    )


def _eigenvector_on_component(sub: sp.csr_array) -> np.ndarray:
    """Power iteration on A + I of one connected component.

    The identity offset leaves the eigenvectors of A untouched while
    making the dominant eigenvalue strictly largest in magnitude, so
    bipartite components cannot oscillate.  Unit L2 norm; the positive
    start keeps every iterate nonnegative.
    """
    n_c = sub.shape[0]
    vec = np.full(n_c, 1.0 / math.sqrt(n_c))
    for _ in range(POWER_MAX_ITER):
        new = sub @ vec + vec
        new /= np.linalg.norm(new)
        residual = float(np.linalg.norm(new - vec))
        vec = new
        if residual < POWER_TOL:
            return vec
    raise ConvergenceError(
        f"eigenvector did not converge in {POWER_MAX_ITER} iterations "
        f"(L2 residual {residual:.3e})",
        residual,
    )


def eigenvector_nodes(adj) -> np.ndarray:
    """Dominant-eigenvector centrality of the largest component.

    Unit L2 norm, nonnegative entries, zeros outside the component.
    """
    a, comp, sub, _ = _lcc_context(adj)
    if sub.nnz == 0:
        raise MetricUndefinedError("graph has no edges")
    out = np.zeros(a.shape[0])
    out[comp] = _eigenvector_on_component(sub)
    return out


def top_words(net: CoocNetwork, count: int = TOP_WORD_COUNT) -> TopWords:
    """The ``count`` most frequent words of a network's source document.

    Rank by frequency descending; ties go to the word that appeared
    first in the document (lower node index), then lexicographic.
    """
    order = sorted(
        range(net.n_nodes),
        key=lambda i: (-net.frequencies[net.words[i]], i, net.words[i]),
    )
    chosen = tuple(net.words[i] for i in order[:count])
    return TopWords(words=chosen, frequencies=dict(net.frequencies))


def summarize(
    values: np.ndarray,
    words: tuple[str, ...],
    mode: str,
    top: TopWords | None = None,
) -> tuple[float | None, int]:
    """Mean of defined per-node values under one summary mode.

    all_nodes averages every non-NaN entry.  top_words averages the
    entries of ``top.words`` that exist as nodes and are defined.
    Returns (mean, skipped) where skipped counts requested nodes that
    had no defined value; mean is None when nothing was defined.
    """
    if mode == SUMMARY_ALL:
        selected = np.asarray(values, dtype=float)
        requested = selected.size
    elif mode == SUMMARY_TOP:
        if top is None:
            raise ValueError("top_words summary requires a TopWords")
        index = {w: i for i, w in enumerate(words)}
        picks = [index[w] for w in top.words if w in index]
        selected = np.asarray(values, dtype=float)[picks]
        requested = len(top.words)
    else:
        raise ValueError(f"unknown summary mode {mode!r}")
    defined = selected[~np.isnan(selected)]
    skipped = requested - defined.size
    if defined.size == 0:
        return None, skipped
    return float(defined.mean()), skipped


def compute_metric_vector(
    net: CoocNetwork,
    top: TopWords | None = None,
    damping: float = DEFAULT_DAMPING,
) -> MetricVector:
    """Evaluate all six metrics under both summaries on one network.

    ``top`` defaults to the network's own top words; the pipeline
    passes the original document's TopWords when scoring shuffled
    replicas so both summaries compare like with like.
    """
    if net.n_nodes == 0:
        raise MetricUndefinedError("graph has no nodes")
    if top is None:
        top = top_words(net)
    a, comp, sub, dist = _lcc_context(net)
    n_c = comp.size

    per_node: dict[str, np.ndarray] = {}
    failures: dict[str, str] = {}

    nan = np.full(net.n_nodes, np.nan)
    if n_c >= 2:
        asp = nan.copy()
        asp[comp] = dist.sum(axis=1) / (n_c - 1)
        per_node["avg_shortest_path"] = asp
        clo = nan.copy()
        clo[comp] = (n_c - 1) / dist.sum(axis=1)
        per_node["closeness"] = clo
    else:
        failures["avg_shortest_path"] = (
            "largest component has fewer than 2 nodes"
        )
        failures["closeness"] = "largest component has fewer than 2 nodes"

    per_node["clustering"] = clustering_nodes(a)

    betw = nan.copy()
    betw[comp] = _betweenness_on_component(sub, dist)
    per_node["betweenness"] = betw

    try:
        per_node["pagerank"] = pagerank_nodes(a, damping=damping)
    except ConvergenceError as exc:
        failures["pagerank"] = str(exc)

    if sub.nnz == 0:
        failures["eigenvector"] = "graph has no edges"
    else:
        try:
            eig = np.zeros(net.n_nodes)
            eig[comp] = _eigenvector_on_component(sub)
            per_node["eigenvector"] = eig
        except ConvergenceError as exc:
            failures["eigenvector"] = str(exc)

    values: dict[tuple[str, str], float | None] = {}
    reasons: dict[tuple[str, str], str] = {}
    skipped: dict[tuple[str, str], int] = {}
    for metric in METRIC_NAMES:
        for summary in SUMMARY_NAMES:
            key = (metric, summary)
            if metric in failures:
                values[key] = None
                reasons[key] = failures[metric]
                continue
            mean, nskip = summarize(
                per_node[metric], net.words, summary, top
            )
            values[key] = mean
            skipped[key] = nskip
            if mean is None:
                reasons[key] = "no defined node values"
    return MetricVector(
        values=values,
        reasons=reasons,
        skipped=skipped,
        component_coverage=n_c / net.n_nodes,
    )
