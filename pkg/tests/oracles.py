"""Independent brute-force oracles used to pin expected values in tests.

These deliberately avoid the library's own algorithms: distances come from
exhaustive enumeration of simple paths, gap finding from a full scan, and
class grouping from union-find.  Keep instances tiny (n <= ~12, sparse).
"""

from __future__ import annotations

import math


def brute_distances(g, source: int, allowed=None) -> list[float]:
    """Shortest distances by enumerating every simple path from ``source``."""
    if allowed is None:
        ok = lambda v: True  # noqa: E731
    elif callable(allowed):
        ok = allowed
    else:
        members = set(allowed)
        ok = members.__contains__
    assert ok(source)
    best = [math.inf] * g.n
    best[source] = 0.0

    def dfs(u: int, used: set[int], length: float) -> None:
        for v, w in g.adj[u]:
            if v in used or not ok(v):
                continue
            nd = length + w
            if nd < best[v]:
                best[v] = nd
            used.add(v)
            dfs(v, used, nd)
            used.remove(v)

    dfs(source, {source}, 0.0)
    return best


def brute_ball(g, center: int, r: float, allowed=None) -> frozenset[int]:
    dist = brute_distances(g, center, allowed)
    return frozenset(v for v in range(g.n) if dist[v] <= r)


def brute_all_pairs(g) -> list[list[float]]:
    return [brute_distances(g, s) for s in range(g.n)]


def floyd_warshall(n: int, edges) -> list[list[float]]:
    """Independent all-pairs distances for minor-sized graphs."""
    dist = [[math.inf] * n for _ in range(n)]
    for i in range(n):
        dist[i][i] = 0.0
    for u, v, w in edges:
        if w < dist[u][v]:
            dist[u][v] = w
            dist[v][u] = w
    for m in range(n):
        for i in range(n):
            dim = dist[i][m]
            if math.isinf(dim):
                continue
            row_m = dist[m]
            row_i = dist[i]
            for j in range(n):
                alt = dim + row_m[j]
                if alt < row_i[j]:
                    row_i[j] = alt
    return dist


def exhaustive_gap_scan(powers, k: int) -> int | None:
    """Smallest separating m0 by scanning every candidate window."""
    occ = sorted(set(powers))
    if not occ:
        return None
    for m0 in range(0, max(occ) + 1):
        window = set(range(m0, m0 + k + 1))
        if window & set(occ):
            continue
        if any(p < m0 for p in occ) and any(p > m0 + k for p in occ):
            return m0
    return None


def union_find_classes(metric, cut: float) -> list[list[int]]:
    """Threshold components via union-find (independent of BFS grouping)."""
    k = len(metric)
    parent = list(range(k))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(k):
        for j in range(i + 1, k):
            if metric[i][j] < cut:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def count_cells_meeting(cells, path_vertices) -> int:
    vs = set(path_vertices)
    return sum(1 for cell in cells if set(cell) & vs)


class StubRng:
    """Deterministic uniform stream for replaying sampled procedures."""

    def __init__(self, values):
        self.values = list(values)
        self.used = 0

    def random(self) -> float:
        self.used += 1
        return self.values.pop(0)
