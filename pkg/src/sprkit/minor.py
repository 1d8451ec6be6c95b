"""Terminal-centered minors: partition validation, contraction, baselines.

A partial partition holds one (possibly empty) cell per terminal, aligned
with terminal order.  Contraction collapses each cell onto its terminal and
assigns every surviving edge the original-graph distance between its terminal
endpoints, so minor distances always dominate graph distances.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import PartitionError
from .graph import WeightedGraph, terminal_metric


@dataclass(frozen=True)
class PartialPartition:
    """Pairwise-disjoint vertex cells, one per terminal, in terminal order.

    Cells may be empty and need not cover the whole vertex set; uncovered
    vertices form the implicit leftover class.  Structural requirements for
    contraction (terminal membership, connectivity, completeness) are checked
    by ``validate_partition`` rather than at construction, because carving
    procedures legitimately produce cells that break them.
    """

    cells: tuple[frozenset[int], ...]

    @classmethod
    def of(cls, cells: Iterable[Iterable[int]]) -> "PartialPartition":
        return cls(cells=tuple(frozenset(c) for c in cells))

    @classmethod
    def from_labels(cls, labels: Sequence[int], k: int) -> "PartialPartition":
        """Build from per-vertex cell indices; -1 marks uncovered vertices."""
        cells: list[set[int]] = [set() for _ in range(k)]
        for v, lab in enumerate(labels):
            if lab >= 0:
                cells[lab].add(v)
        return cls.of(cells)

    @property
    def k(self) -> int:
        return len(self.cells)

    def clusters(self) -> list[frozenset[int]]:
        """Nonempty cells only (cell-terminal alignment is kept in ``cells``)."""
        return [c for c in self.cells if c]

    def labels(self, n: int) -> list[int]:
        out = [-1] * n
        for j, cell in enumerate(self.cells):
            for v in cell:
                out[v] = j
        return out

    def assigned(self) -> frozenset[int]:
        out: set[int] = set()
        for cell in self.cells:
            out |= cell
        return frozenset(out)

    def is_complete(self, n: int) -> bool:
        return len(self.assigned()) == n


def validate_partition(
    g: WeightedGraph,
    p: PartialPartition,
    require_complete: bool = False,
) -> str | None:
    """Return None if valid, else a report naming the first violated invariant.

    Checks, in order: disjointness, terminal membership, per-cell
    connectivity in G, and (optionally) completeness.  Violations are data,
    not exceptions.
    """
    if p.k != g.k:
        raise ValueError(f"expected {g.k} cells, got {p.k}")
    owner: dict[int, int] = {}
    for j, cell in enumerate(p.cells):
        for v in cell:
            if not 0 <= v < g.n:
                raise ValueError(f"cell {j} contains out-of-range vertex {v}")
            if v in owner:
                return f"disjointness: vertex {v} lies in cells {owner[v]} and {j}"
            owner[v] = j
    for j, t in enumerate(g.terminals):
        if p.cells[j] and t not in p.cells[j]:
            return f"terminal membership: terminal {t} missing from its cell {j}"
        if not p.cells[j]:
            return f"terminal membership: cell {j} is empty (must contain terminal {t})"
    for j, t in enumerate(g.terminals):
        cell = p.cells[j]
        reached = {t}
        stack = [t]
        while stack:
            u = stack.pop()
            for v, _ in g.adj[u]:
                if v in cell and v not in reached:
                    reached.add(v)
                    stack.append(v)
        if len(reached) != len(cell):
            stray = min(cell - reached)
            return f"connectivity: cell {j} is disconnected (vertex {stray} cut off)"
    if require_complete and len(owner) != g.n:
        return f"completeness: {g.n - len(owner)} vertices unassigned"
    return None


@dataclass(frozen=True)
class TerminalMinor:
    """Graph on the terminals with standard-restriction edge weights.

    ``edges`` holds (i, j, w) with i < j indexing into ``terminals``; an edge
    exists iff some original edge joins the two cells, and its weight is the
    original-graph distance between the two terminals.  Parallel edges from
    contraction collapse to one (identical weight by definition).
    ``provenance`` optionally lists the original cross edges behind each
    minor edge, aligned with ``edges``.
    """

    terminals: tuple[int, ...]
    edges: tuple[tuple[int, int, float], ...]
    provenance: tuple[tuple[tuple[int, int, float], ...], ...] | None = None

    @property
    def k(self) -> int:
        return len(self.terminals)

    def as_graph(self) -> WeightedGraph:
        """Relabel terminal i -> vertex i; all vertices are terminals."""
        return WeightedGraph.build(
            self.k,
            [(i, j, w) for i, j, w in self.edges],
            list(range(self.k)),
        )


def contract(
    g: WeightedGraph,
    p: PartialPartition,
    include_provenance: bool = False,
) -> TerminalMinor:
    """Contract each cell of a valid complete partition onto its terminal.

    Weights are recomputed from the original graph (k single-source
    searches), not from intermediate contracted states.
    """
    report = validate_partition(g, p, require_complete=True)
    if report is not None:
        raise PartitionError(report)
    label = p.labels(g.n)
    metric = terminal_metric(g)
    cross: dict[tuple[int, int], list[tuple[int, int, float]]] = {}
    for u, v, w in g.edges():
        a, b = label[u], label[v]
        if a == b:
            continue
        key = (a, b) if a < b else (b, a)
        cross.setdefault(key, []).append((u, v, w))
    keys = sorted(cross)
    edges = tuple((i, j, float(metric[i, j])) for i, j in keys)
    prov = tuple(tuple(cross[key]) for key in keys) if include_provenance else None
    return TerminalMinor(terminals=g.terminals, edges=edges, provenance=prov)


def minor_distances(m: TerminalMinor) -> np.ndarray:
    """All-pairs shortest-path distances in the minor (inf when disconnected)."""
    return terminal_metric(m.as_graph())


def nearest_terminal_partition(g: WeightedGraph) -> PartialPartition:
    """Assign every vertex to its nearest terminal, with connected cells.

    Grows a multi-source shortest-path forest with lexicographic priority
    (distance, terminal index, vertex id).  Each vertex joins the cell of the
    terminal that reaches it first, so ties go to the smallest terminal index
    and every cell is connected by construction.
    """
    labels = [-1] * g.n
    heap: list[tuple[float, int, int]] = []
    for j, t in enumerate(g.terminals):
        heapq.heappush(heap, (0.0, j, t))
    while heap:
        d, j, u = heapq.heappop(heap)
        if labels[u] >= 0:
            continue
        labels[u] = j
        for v, w in g.adj[u]:
            if labels[v] < 0:
                heapq.heappush(heap, (d + w, j, v))
    return PartialPartition.from_labels(labels, g.k)


def minor_to_edge_list(m: TerminalMinor) -> str:
    """Edge-list text for the minor (vertex i = i-th terminal of the source graph)."""
    from .graph import format_edge_list

    return format_edge_list(m.as_graph())


def minor_to_json(m: TerminalMinor, include_provenance: bool = False) -> dict:
    """JSON-ready dict; per-edge provenance (original cross edges) behind a flag."""
    doc: dict = {
        "terminals": list(m.terminals),
        "edges": [
            {"u": i, "v": j, "weight": w} for i, j, w in m.edges
        ],
    }
    if include_provenance:
        prov = m.provenance if m.provenance is not None else tuple(() for _ in m.edges)
        for entry, cross in zip(doc["edges"], prov):
            entry["cross_edges"] = [[u, v, w] for u, v, w in cross]
    return doc
