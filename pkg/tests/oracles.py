"""Independent reference implementations used to verify the fast paths.

Everything here favors obviousness over speed: explicit loops,
textbook formulas, brute-force enumeration.  None of it shares code
with the package under test beyond numpy itself.
"""

from __future__ import annotations

import numpy as np
from scipy import integrate


def quad_alpha(pi: float, k: int) -> float:
    """Edge significance by adaptive quadrature of its defining integral:
    1 - (k-1) * integral_0^pi (1-x)^(k-2) dx."""
    value, _ = integrate.quad(lambda x: (1.0 - x) ** (k - 2), 0.0, pi)
    return 1.0 - (k - 1) * value


def floyd_warshall(adj: np.ndarray) -> np.ndarray:
    """All-pairs distances by the classic triple loop."""
    n = adj.shape[0]
    dist = np.full((n, n), np.inf)
    for i in range(n):
        dist[i, i] = 0.0
        for j in range(n):
            if adj[i, j]:
                dist[i, j] = 1.0
    for k in range(n):
        for i in range(n):
            for j in range(n):
                through = dist[i, k] + dist[k, j]
                if through < dist[i, j]:
                    dist[i, j] = through
    return dist


def count_shortest_paths(adj: np.ndarray, dist: np.ndarray) -> np.ndarray:
    """sigma[s, t]: number of shortest s-t paths, by dynamic programming
    over increasing distance."""
    n = adj.shape[0]
    sigma = np.zeros((n, n))
    for s in range(n):
        sigma[s, s] = 1.0
        reachable = [t for t in range(n) if np.isfinite(dist[s, t]) and t != s]
        for t in sorted(reachable, key=lambda t: dist[s, t]):
            total = 0.0
            for u in range(n):
                if adj[u, t] and dist[s, u] == dist[s, t] - 1.0:
                    total += sigma[s, u]
            sigma[s, t] = total
    return sigma


def betweenness_pairsum(adj: np.ndarray) -> np.ndarray:
    """Betweenness on the largest component from the pair-sum identity:
    B(v) = sum over s < t of sigma_sv * sigma_vt / sigma_st for pairs
    whose shortest paths pass through v, normalized by C(n_c-1, 2).
    Nodes outside the largest component get NaN."""
    comp = largest_component_brute(adj)
    n = adj.shape[0]
    out = np.full(n, np.nan)
    sub = adj[np.ix_(comp, comp)]
    m = len(comp)
    dist = floyd_warshall(sub)
    sigma = count_shortest_paths(sub, dist)
    for vi in range(m):
        total = 0.0
        for si in range(m):
            if si == vi:
                continue
            for ti in range(si + 1, m):
                if ti == vi:
                    continue
                if dist[si, vi] + dist[vi, ti] == dist[si, ti]:
                    total += sigma[si, vi] * sigma[vi, ti] / sigma[si, ti]
        denom = (m - 1) * (m - 2) / 2.0
        out[comp[vi]] = total / denom if denom > 0 else 0.0
    return out


def betweenness_enumeration(adj: np.ndarray) -> np.ndarray:
    """Betweenness by literally enumerating every shortest path.

    Only sane for tiny graphs; the ground truth the faster oracles and
    the implementation both have to match.
    """
    comp = largest_component_brute(adj)
    n = adj.shape[0]
    sub = adj[np.ix_(comp, comp)]
    m = len(comp)
    dist = floyd_warshall(sub)

    def all_shortest_paths(s, t):
        paths = []

        def extend(path):
            head = path[-1]
            if head == t:
                paths.append(tuple(path))
                return
            for u in range(m):
                if sub[head, u] and dist[s, u] == dist[s, head] + 1.0 \
                        and dist[u, t] == dist[s, t] - dist[s, u]:
                    extend(path + [u])

        extend([s])
        return paths

    counts = np.zeros(m)
    for s in range(m):
        for t in range(s + 1, m):
            paths = all_shortest_paths(s, t)
            for path in paths:
                for v in path[1:-1]:
                    counts[v] += 1.0 / len(paths)
    out = np.full(n, np.nan)
    denom = (m - 1) * (m - 2) / 2.0
    for vi in range(m):
        out[comp[vi]] = counts[vi] / denom if denom > 0 else 0.0
    return out


def largest_component_brute(adj: np.ndarray) -> list[int]:
    """Largest component by repeated flood fill; ties to the smallest
    member index."""
    n = adj.shape[0]
    seen = set()
    best: list[int] = []
    for start in range(n):
        if start in seen:
            continue
        stack = [start]
        comp = set()
        while stack:
            v = stack.pop()
            if v in comp:
                continue
            comp.add(v)
            stack.extend(u for u in range(n) if adj[v, u] and u not in comp)
        seen |= comp
        if len(comp) > len(best):
            best = sorted(comp)
    return best


def avg_shortest_path_from_dist(dist_lcc: np.ndarray) -> float:
    """Mean over unordered finite pairs of a connected component."""
    m = dist_lcc.shape[0]
    total = 0.0
    pairs = 0
    for i in range(m):
        for j in range(i + 1, m):
            total += dist_lcc[i, j]
            pairs += 1
    return total / pairs


def closeness_brute(adj: np.ndarray) -> np.ndarray:
    comp = largest_component_brute(adj)
    out = np.full(adj.shape[0], np.nan)
    sub = adj[np.ix_(comp, comp)]
    dist = floyd_warshall(sub)
    m = len(comp)
    if m >= 2:
        for vi in range(m):
            out[comp[vi]] = (m - 1) / dist[vi].sum()
    return out


def clustering_brute(adj: np.ndarray) -> np.ndarray:
    n = adj.shape[0]
    out = np.zeros(n)
    for v in range(n):
        neighbors = [u for u in range(n) if adj[v, u]]
        k = len(neighbors)
        if k < 2:
            continue
        links = 0
        for a in range(k):
            for b in range(a + 1, k):
                if adj[neighbors[a], neighbors[b]]:
                    links += 1
        out[v] = 2.0 * links / (k * (k - 1))
    return out


def pagerank_solve(adj: np.ndarray, damping: float = 0.85) -> np.ndarray:
    """PageRank as the exact solution of its linear system."""
    n = adj.shape[0]
    deg = adj.sum(axis=1)
    transition = np.zeros((n, n))
    for j in range(n):
        if deg[j] > 0:
            transition[:, j] = adj[:, j] / deg[j]
        else:
            transition[:, j] = 1.0 / n
    system = np.eye(n) - damping * transition
    return np.linalg.solve(system, np.full(n, (1.0 - damping) / n))


def eigenvector_squaring(adj: np.ndarray) -> np.ndarray:
    """Dominant eigenvector via repeated squaring of (A + I) on the
    largest component; zeros elsewhere, unit L2 norm."""
    comp = largest_component_brute(adj)
    sub = adj[np.ix_(comp, comp)] + np.eye(len(comp))
    power = sub.copy()
    for _ in range(60):
        power = power @ power
        power /= power.max()
    vec = power @ np.ones(len(comp))
    vec /= np.linalg.norm(vec)
    out = np.zeros(adj.shape[0])
    out[comp] = vec
    return out


def path_graph(n: int) -> np.ndarray:
    adj = np.zeros((n, n))
    for i in range(n - 1):
        adj[i, i + 1] = adj[i + 1, i] = 1.0
    return adj


def cycle_graph(n: int) -> np.ndarray:
    adj = path_graph(n)
    adj[0, n - 1] = adj[n - 1, 0] = 1.0
    return adj


def star_graph(n: int) -> np.ndarray:
    """Center node 0 plus n-1 leaves."""
    adj = np.zeros((n, n))
    adj[0, 1:] = adj[1:, 0] = 1.0
    return adj


def complete_graph(n: int) -> np.ndarray:
    adj = np.ones((n, n)) - np.eye(n)
    return adj


def random_connected_graph(rng: np.random.Generator, n: int,
                           extra_prob: float = 0.2) -> np.ndarray:
    """Random spanning tree plus independent extra edges."""
    adj = np.zeros((n, n))
    for v in range(1, n):
        parent = int(rng.integers(0, v))
        adj[v, parent] = adj[parent, v] = 1.0
    for i in range(n):
        for j in range(i + 1, n):
            if adj[i, j] == 0 and rng.random() < extra_prob:
                adj[i, j] = adj[j, i] = 1.0
    return adj


def random_graph(rng: np.random.Generator, n: int, p: float) -> np.ndarray:
    """Plain edge-probability graph; may be disconnected."""
    adj = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                adj[i, j] = adj[j, i] = 1.0
    return adj


def small_graph_family() -> list[tuple[str, np.ndarray]]:
    """The exhaustive <= 8 node family: paths, cycles, stars, complete
    graphs, and a seeded batch of random connected graphs."""
    family = []
    for n in range(2, 9):
        family.append((f"path-{n}", path_graph(n)))
        family.append((f"complete-{n}", complete_graph(n)))
        if n >= 3:
            family.append((f"cycle-{n}", cycle_graph(n)))
            family.append((f"star-{n}", star_graph(n)))
    rng = np.random.default_rng(2024)
    for i in range(40):
        n = int(rng.integers(4, 9))
        family.append((f"random-{i}-n{n}",
                       random_connected_graph(rng, n, 0.3)))
    return family
