"""Weighted undirected graphs with designated terminals.

Distances are double-precision floats.  Set-membership comparisons against a
radius use exact floating comparison: radii are drawn from continuous
distributions, so boundary ties have measure zero.  Unreachable distances are
the distinct sentinel ``UNREACHABLE`` (infinity), never a large finite number.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import GraphFormatError, NoPathError

UNREACHABLE = math.inf

VertexPredicate = Callable[[int], bool]


@dataclass(frozen=True)
class WeightedGraph:
    """Immutable undirected graph with positive edge weights and terminals.

    ``adj[v]`` lists ``(neighbor, weight)`` pairs sorted by neighbor id.
    Terminals are distinct vertex ids; every vertex must be reachable from at
    least one terminal (hard construction error otherwise, since the
    partitioning algorithms cannot terminate on stranded vertices).
    """

    n: int
    adj: tuple[tuple[tuple[int, float], ...], ...]
    terminals: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise GraphFormatError("vertex count must be >= 1")
        if len(self.adj) != self.n:
            raise GraphFormatError("adjacency length does not match vertex count")
        if not self.terminals:
            raise GraphFormatError("at least one terminal is required")
        if len(set(self.terminals)) != len(self.terminals):
            raise GraphFormatError("terminal ids must be distinct")
        for t in self.terminals:
            if not 0 <= t < self.n:
                raise GraphFormatError(f"terminal {t} out of range")
        seen: dict[int, dict[int, float]] = {}
        for u in range(self.n):
            nbrs = {}
            last = -1
            for v, w in self.adj[u]:
                if not 0 <= v < self.n:
                    raise GraphFormatError(f"neighbor {v} out of range")
                if v == u:
                    raise GraphFormatError(f"self-loop at vertex {u}")
                if v <= last:
                    raise GraphFormatError(f"adjacency of {u} not sorted/duplicate-free")
                if not (w > 0) or not math.isfinite(w):
                    raise GraphFormatError(f"edge ({u},{v}) weight must be positive and finite")
                nbrs[v] = w
                last = v
            seen[u] = nbrs
        for u in range(self.n):
            for v, w in seen[u].items():
                if seen[v].get(u) != w:
                    raise GraphFormatError(f"edge ({u},{v}) is not symmetric")
        reached = _multi_source_reach(self.adj, self.terminals, self.n)
        if len(reached) != self.n:
            missing = min(set(range(self.n)) - reached)
            raise GraphFormatError(
                f"vertex {missing} is unreachable from every terminal"
            )

    @property
    def k(self) -> int:
        return len(self.terminals)

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self) -> list[tuple[int, int, float]]:
        """All edges as (u, v, w) with u < v, sorted."""
        out = []
        for u in range(self.n):
            for v, w in self.adj[u]:
                if u < v:
                    out.append((u, v, w))
        return out

    def weight(self, u: int, v: int) -> float:
        for x, w in self.adj[u]:
            if x == v:
                return w
        raise KeyError((u, v))

    @classmethod
    def build(
        cls,
        n: int,
        edges: Iterable[tuple[int, int, float]],
        terminals: Sequence[int],
    ) -> "WeightedGraph":
        """Construct from an edge list; rejects duplicates and self-loops."""
        lists: list[list[tuple[int, float]]] = [[] for _ in range(max(n, 0))]
        seen: set[tuple[int, int]] = set()
        for u, v, w in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u},{v}) endpoint out of range")
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise GraphFormatError(f"duplicate edge ({key[0]},{key[1]})")
            seen.add(key)
            w = float(w)
            lists[u].append((v, w))
            lists[v].append((u, w))
        adj = tuple(tuple(sorted(a)) for a in lists)
        return cls(n=n, adj=adj, terminals=tuple(int(t) for t in terminals))


def _multi_source_reach(adj, sources: Iterable[int], n: int) -> set[int]:
    reached = set(sources)
    stack = list(reached)
    while stack:
        u = stack.pop()
        for v, _ in adj[u]:
            if v not in reached:
                reached.add(v)
                stack.append(v)
    return reached


def _as_predicate(allowed) -> VertexPredicate:
    if allowed is None:
        return lambda v: True
    if callable(allowed):
        return allowed
    members = allowed if isinstance(allowed, (set, frozenset)) else frozenset(allowed)
    return members.__contains__


def shortest_distances(
    g: WeightedGraph,
    source: int,
    allowed=None,
    cutoff: float | None = None,
) -> list[float]:
    """Single-source shortest distances in the subgraph induced by ``allowed``.

    ``allowed`` may be None (all vertices), a vertex predicate, or a vertex
    collection.  Vertices outside the induced subgraph, or unreachable inside
    it, get ``UNREACHABLE``.  With ``cutoff`` set, exploration stops beyond
    that distance (entries above it may be left as ``UNREACHABLE``).
    """
    allow = _as_predicate(allowed)
    if not 0 <= source < g.n:
        raise ValueError(f"source {source} out of range")
    if not allow(source):
        raise ValueError(f"source {source} fails the vertex predicate")
    dist = [UNREACHABLE] * g.n
    dist[source] = 0.0
    heap: list[tuple[float, int]] = [(0.0, source)]
    adj = g.adj
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, w in adj[u]:
            nd = d + w
            if nd < dist[v] and allow(v):
                if cutoff is not None and nd > cutoff:
                    continue
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def ball(g: WeightedGraph, center: int, r: float, allowed=None) -> frozenset[int]:
    """Closed metric ball of radius ``r`` around ``center`` in G[allowed].

    The induced subgraph on the result is connected, since every member's
    shortest path from the center stays within the radius.
    """
    if r < 0:
        raise ValueError("radius must be nonnegative")
    dist = shortest_distances(g, center, allowed=allowed, cutoff=r)
    return frozenset(v for v in range(g.n) if dist[v] <= r)


@dataclass(frozen=True)
class PathWitness:
    """A concrete shortest path: vertex sequence plus its total weight."""

    vertices: tuple[int, ...]
    length: float


def shortest_path_witness(g: WeightedGraph, u: int, v: int) -> PathWitness:
    """Materialize one shortest u-v path, deterministically.

    Ties are broken by walking back from ``v`` and always choosing the
    lexicographically smallest predecessor id among neighbors that lie on a
    shortest path, so repeated calls yield the same witness.
    """
    dist = shortest_distances(g, u)
    if math.isinf(dist[v]):
        raise NoPathError(f"vertices {u} and {v} are disconnected")
    if u == v:
        return PathWitness(vertices=(u,), length=0.0)
    rev = [v]
    cur = v
    while cur != u:
        # dist values were produced by these exact additions, so at least one
        # neighbor satisfies the equality exactly.
        pred = min(p for p, w in g.adj[cur] if dist[p] + w == dist[cur])
        rev.append(pred)
        cur = pred
    return PathWitness(vertices=tuple(reversed(rev)), length=dist[v])


def terminal_rows(g: WeightedGraph) -> list[list[float]]:
    """Distance rows from every terminal to all vertices (k Dijkstras)."""
    return [shortest_distances(g, t) for t in g.terminals]


def terminal_metric(g: WeightedGraph, rows: list[list[float]] | None = None) -> np.ndarray:
    """k-by-k matrix of pairwise terminal distances.

    Symmetric by construction: entry (i, j) with i < j is taken from the row
    of the smaller index and mirrored, which sidesteps last-ulp asymmetries in
    float summation order.
    """
    if rows is None:
        rows = terminal_rows(g)
    k = g.k
    metric = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            d = rows[i][g.terminals[j]]
            metric[i, j] = d
            metric[j, i] = d
    return metric


def aspect_ratio(g: WeightedGraph) -> float:
    """Max over min pairwise terminal distance; requires k >= 2."""
    if g.k < 2:
        raise ValueError("aspect ratio needs at least two terminals")
    metric = terminal_metric(g)
    off = metric[~np.eye(g.k, dtype=bool)]
    return float(off.max() / off.min())


def induced_subgraph(
    g: WeightedGraph,
    vertices: Iterable[int],
    terminals: Sequence[int],
) -> tuple[WeightedGraph, tuple[int, ...]]:
    """Induced subgraph on ``vertices`` with relabeled contiguous ids.

    Returns the subgraph and the old id of each new vertex (new id = position).
    ``terminals`` are old ids and must be members of ``vertices``.
    """
    old_ids = tuple(sorted(set(vertices)))
    new_of = {old: new for new, old in enumerate(old_ids)}
    edges = []
    for old_u in old_ids:
        for old_v, w in g.adj[old_u]:
            if old_u < old_v and old_v in new_of:
                edges.append((new_of[old_u], new_of[old_v], w))
    sub = WeightedGraph.build(len(old_ids), edges, [new_of[t] for t in terminals])
    return sub, old_ids


def scale_weights(g: WeightedGraph, divisor: float) -> WeightedGraph:
    """Divide every edge weight by ``divisor`` (same topology and terminals)."""
    if not (divisor > 0) or not math.isfinite(divisor):
        raise ValueError("divisor must be positive and finite")
    adj = tuple(
        tuple((v, w / divisor) for v, w in nbrs) for nbrs in g.adj
    )
    return WeightedGraph(n=g.n, adj=adj, terminals=g.terminals)


# Edge-list text format: header "n m k", then m lines "u v w" (0-based ids,
# positive decimal weight), then one line of k terminal ids.


def parse_edge_list(text: str) -> WeightedGraph:
    """Parse the edge-list text format; duplicate edges and self-loops are rejected."""
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise GraphFormatError("empty input")
    header = lines[0].split()
    if len(header) != 3:
        raise GraphFormatError("header must be 'n m k'")
    try:
        n, m, k = (int(x) for x in header)
    except ValueError as exc:
        raise GraphFormatError(f"bad header: {exc}") from exc
    if len(lines) != 1 + m + 1:
        raise GraphFormatError(
            f"expected {m} edge lines plus a terminal line, got {len(lines) - 1}"
        )
    edges = []
    for idx in range(1, 1 + m):
        parts = lines[idx].split()
        if len(parts) != 3:
            raise GraphFormatError(f"line {idx + 1}: expected 'u v w'")
        try:
            u, v, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError as exc:
            raise GraphFormatError(f"line {idx + 1}: {exc}") from exc
        if not (w > 0) or math.isinf(w) or math.isnan(w):
            raise GraphFormatError(f"line {idx + 1}: weight must be positive and finite")
        edges.append((u, v, w))
    terminals = lines[1 + m].split()
    if len(terminals) != k:
        raise GraphFormatError(f"expected {k} terminal ids, got {len(terminals)}")
    try:
        term_ids = [int(t) for t in terminals]
    except ValueError as exc:
        raise GraphFormatError(f"terminal line: {exc}") from exc
    return WeightedGraph.build(n, edges, term_ids)


def format_edge_list(g: WeightedGraph) -> str:
    """Serialize to the edge-list text format (weights via repr, round-trip exact)."""
    out = [f"{g.n} {g.m} {g.k}"]
    for u, v, w in g.edges():
        out.append(f"{u} {v} {w!r}")
    out.append(" ".join(str(t) for t in g.terminals))
    return "\n".join(out) + "\n"


def load_graph(path) -> WeightedGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def save_graph(g: WeightedGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_edge_list(g))
