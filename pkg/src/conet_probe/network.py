"""Co-occurrence networks, embedding-based virtual edge candidates, and
the global / local (disparity filter) thresholding strategies.
"""

from __future__ import annotations

import hashlib
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .corpus import Document, DocumentTooShortError
from .embeddings import EmbeddingTable

STRATEGY_ORIGINAL = "original"
STRATEGY_GLOBAL = "global"
STRATEGY_LOCAL = "local"
STRATEGIES = (STRATEGY_ORIGINAL, STRATEGY_GLOBAL, STRATEGY_LOCAL)


@dataclass
class CoocNetwork:
    """Undirected graph over the unique words of one document.

    Node index order is first occurrence in the source document.
    ``cooc_edges`` holds index pairs (i < j) from token adjacency;
    ``virtual_edges`` maps index pairs (i < j) to cosine weights in
    (0, 1].  The two sets are disjoint and self-loops never occur.
    """

    words: tuple[str, ...]
    cooc_edges: frozenset[tuple[int, int]]
    virtual_edges: dict[tuple[int, int], float] = field(default_factory=dict)
    frequencies: dict[str, int] = field(default_factory=dict)

    @property
    def n_nodes(self) -> int:
        return len(self.words)

    @property
    def n_cooc_edges(self) -> int:
        return len(self.cooc_edges)

    def adjacency(self) -> np.ndarray:
        """Dense 0/1 adjacency of the union graph (cooc + virtual)."""
        n = self.n_nodes
        adj = np.zeros((n, n))
        for i, j in self.cooc_edges:
            adj[i, j] = adj[j, i] = 1.0
        for i, j in self.virtual_edges:
            adj[i, j] = adj[j, i] = 1.0
        return adj

    def word_pair(self, pair: tuple[int, int]) -> tuple[str, str]:
        """The pair's words in lexicographic order (for stable output)."""
        a, b = self.words[pair[0]], self.words[pair[1]]
        return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class EnrichmentConfig:
    strategy: str
    fraction: float  # percentage of N_E
    preserve_cooc: bool = True

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if not 0.0 <= self.fraction <= 100.0:
            raise ValueError(
                f"fraction must be in [0, 100], got {self.fraction}"
            )


@dataclass
class EdgeCandidate:
    """A non-adjacent node pair eligible to become a virtual edge."""

    pair: tuple[int, int]  # i < j
    weight: float  # cosine similarity, > 0
    alpha: float | None = None  # disparity significance, local strategy only


def build_cooc(doc: Document) -> CoocNetwork:
    """Build the co-occurrence network of a document.

    Each unique word becomes a node; every pair of adjacent tokens with
    distinct words contributes one undirected edge.  Repeated bigrams
    collapse to a single edge and self-adjacency is discarded.
    """
    if doc.size < 2:
        raise DocumentTooShortError(
            f"{doc.text_id or 'document'}: need at least 2 tokens to build "
            f"a network, got {doc.size}"
        )
    index: dict[str, int] = {}
    for token in doc.tokens:
        if token not in index:
            index[token] = len(index)
    edges = set()
    for a, b in zip(doc.tokens, doc.tokens[1:]):
        if a != b:
            i, j = index[a], index[b]
            edges.add((i, j) if i < j else (j, i))
    return CoocNetwork(
        words=tuple(index),
        cooc_edges=frozenset(edges),
        frequencies=dict(Counter(doc.tokens)),
    )


def candidates(net: CoocNetwork, table: EmbeddingTable) -> list[EdgeCandidate]:
    """Virtual-edge candidates: non-adjacent pairs with positive cosine.

    One candidate per unordered node pair that is not a co-occurrence
    edge, where both words have usable vectors and the similarity is
    strictly positive (the disparity null model needs positive
    weights).  Sorted by weight descending; ties break by the
    lexicographic word pair.
    """
    n = net.n_nodes
    if n < 2:
        return []
    unit, ok = table.unit_rows(net.words)
    sims = unit @ unit.T

    eligible = np.logical_and.outer(ok, ok)
    np.fill_diagonal(eligible, False)
    for i, j in net.cooc_edges:
        eligible[i, j] = eligible[j, i] = False
    eligible &= sims > 0.0
    eligible[np.tril_indices(n)] = False

    ii, jj = np.nonzero(eligible)
    cands = [
        EdgeCandidate(pair=(int(i), int(j)), weight=float(sims[i, j]))
        for i, j in zip(ii, jj)
    ]
    cands.sort(key=lambda c: (-c.weight, net.word_pair(c.pair)))
    return cands


def virtual_edge_quota(n_cooc_edges: int, fraction: float) -> int:
    """K = round(fraction/100 * N_E), rounding half up."""
    return int(math.floor(fraction * n_cooc_edges / 100.0 + 0.5))


def enrich_global(
    net: CoocNetwork, cands: list[EdgeCandidate], fraction: float
) -> CoocNetwork:
    """Add the K highest-weight candidates as virtual edges.

    ``cands`` must already be sorted as produced by ``candidates``.
    Co-occurrence edges are untouched; a shortfall of candidates is the
    caller's to record.
    """
    k = virtual_edge_quota(net.n_cooc_edges, fraction)
    chosen = cands[: min(k, len(cands))]
    return CoocNetwork(
        words=net.words,
        cooc_edges=net.cooc_edges,
        virtual_edges={c.pair: c.weight for c in chosen},
        frequencies=net.frequencies,
    )


def disparity_alpha(weight: float, strength: float, degree: int) -> float:
    """Disparity-filter significance of one edge seen from one endpoint.

    For an endpoint of degree k and strength s (sum of incident
    weights), an edge of weight w has normalized weight pi = w/s and
    significance  1 - (k-1) * integral_0^pi (1-x)^(k-2) dx,  which has
    the closed form (1 - pi)^(k-1).  Lower alpha means more
    significant.  A degree-1 endpoint yields alpha = 1: its sole edge
    carries no multiscale information.
    """
    if weight <= 0.0:
        raise ValueError(f"edge weight must be positive, got {weight}")
    if strength < weight:
        raise ValueError(
            f"strength {strength} cannot be smaller than edge weight {weight}"
        )
    if degree < 1:
        raise ValueError(f"degree must be >= 1, got {degree}")
    pi = weight / strength
    return (1.0 - pi) ** (degree - 1)


def local_significance(
    net: CoocNetwork, cands: list[EdgeCandidate]
) -> list[EdgeCandidate]:
    """Score candidates with the disparity filter on the union graph.

    The weighted union graph carries every co-occurrence edge at weight
    1 and every candidate at its cosine weight.  Each candidate's
    significance is min(alpha_ij, alpha_ji) over its two endpoints,
    computed once on the full union graph (single filtering pass, no
    recomputation as edges are picked).
    """
    n = net.n_nodes
    strength = np.zeros(n)
    degree = np.zeros(n, dtype=int)
    for i, j in net.cooc_edges:
        strength[i] += 1.0
        strength[j] += 1.0
        degree[i] += 1
        degree[j] += 1
    for c in cands:
        i, j = c.pair
        strength[i] += c.weight
        strength[j] += c.weight
        degree[i] += 1
        degree[j] += 1

    scored = []
    for c in cands:
        i, j = c.pair
        alpha = min(
            disparity_alpha(c.weight, strength[i], int(degree[i])),
            disparity_alpha(c.weight, strength[j], int(degree[j])),
        )
        scored.append(EdgeCandidate(pair=c.pair, weight=c.weight, alpha=alpha))
    return scored


def enrich_local(
    net: CoocNetwork, cands: list[EdgeCandidate], fraction: float
) -> CoocNetwork:
    """Add the K candidates most significant under the disparity filter.

    K matches the global strategy's quota for the same fraction.
    Significance ties break by higher weight, then lexicographic word
    pair.  Co-occurrence edges are always preserved.
    """
    k = virtual_edge_quota(net.n_cooc_edges, fraction)
    scored = local_significance(net, cands)
    scored.sort(key=lambda c: (c.alpha, -c.weight, net.word_pair(c.pair)))
    chosen = scored[: min(k, len(scored))]
    return CoocNetwork(
        words=net.words,
        cooc_edges=net.cooc_edges,
        virtual_edges={c.pair: c.weight for c in chosen},
        frequencies=net.frequencies,
    )


def enrich(
    net: CoocNetwork,
    cands: list[EdgeCandidate],
    config: EnrichmentConfig,
) -> CoocNetwork:
    """Apply one enrichment configuration."""
    if config.strategy == STRATEGY_ORIGINAL or config.fraction == 0.0:
        return CoocNetwork(
            words=net.words,
            cooc_edges=net.cooc_edges,
            virtual_edges={},
            frequencies=net.frequencies,
        )
    if config.strategy == STRATEGY_GLOBAL:
        return enrich_global(net, cands, config.fraction)
    return enrich_local(net, cands, config.fraction)


def format_edge_list(net: CoocNetwork) -> str:
    """Canonical dump: ``word_a word_b {C|V} weight`` lines, sorted.

    Words within a line are in lexicographic order; lines are sorted.
    Weights use repr so the dump is bit-exact under a fixed seed.
    """
    lines = []
    for pair in net.cooc_edges:
        a, b = net.word_pair(pair)
        lines.append(f"{a} {b} C {1.0!r}")
    for pair, weight in net.virtual_edges.items():
        a, b = net.word_pair(pair)
        lines.append(f"{a} {b} V {float(weight)!r}")
    return "\n".join(sorted(lines)) + ("\n" if lines else "")


def union_graph_hash(net: CoocNetwork, extra: tuple = ()) -> str:
    """Content hash of the unweighted union graph plus optional extras.

    Metrics ignore weights, so the hash covers node count and the
    sorted union edge set; identical enriched topologies (for example
    any strategy at fraction 0) share cache entries.
    """
    edges = sorted(set(net.cooc_edges) | set(net.virtual_edges))
    payload = repr((net.n_nodes, edges, extra)).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()
