"""Recursive partitioner for graphs with unbounded terminal aspect ratio.

When the ratio of largest to smallest terminal distance exceeds a threshold,
the terminal distances (rounded down to powers of two) must leave an empty
window of k+1 consecutive exponents.  Terminals closer than the window bottom
form equivalence classes; a ball of window-bottom radius around one
representative per class covers its class, and these balls are pairwise
disjoint with small diameter.  Each ball is partitioned independently by the
direct ball-growing algorithm, contracted to a super-terminal, and the
contracted graph is solved recursively.  Unwinding, every vertex assigned to
a super-terminal is attached to one of that class's terminals by a
shortest-path forest seeded at the ball, which preserves the inner
assignments and keeps every final cell connected.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvariantViolation,
    NoSeparatingGap,
    RecursionDepthExceeded,
)
from .graph import (
    WeightedGraph,
    aspect_ratio,
    ball,
    shortest_distances,
    terminal_metric,
    terminal_rows,
    induced_subgraph,
)
from .minor import PartialPartition, validate_partition
from .seeds import STREAM_ALG1, STREAM_BALL, STREAM_RECURSE, mix
from .spr import DEFAULT_ASPECT_THRESHOLD, rescale_to_unit_min, run_partition

_REL_SLACK = 1.0 + 1e-9  # absorbs float summation noise in distance bounds


@dataclass(frozen=True)
class GapCertificate:
    """An empty window of k+1 exponents inside the occupied distance scales."""

    m0: int
    occupied_powers: tuple[int, ...]


def rounded_distance_powers(metric: np.ndarray) -> tuple[int, ...]:
    """Sorted exponents floor(log2(d)) of off-diagonal metric entries.

    Expects a metric rescaled to minimum terminal distance 1, so exponents
    are nonnegative.  Non-finite entries (disconnected pairs) are skipped.
    """
    k = metric.shape[0]
    powers: set[int] = set()
    for i in range(k):
        for j in range(i + 1, k):
            d = float(metric[i, j])
            if not math.isfinite(d):
                continue
            if d <= 0:
                raise ValueError("metric has a nonpositive off-diagonal entry")
            powers.add(int(math.floor(math.log2(d))))
    return tuple(sorted(powers))


def find_gap(powers: tuple[int, ...], k: int) -> GapCertificate:
    """Smallest m0 whose window {m0, ..., m0+k} is empty and separates.

    Separation means some occupied exponent lies below m0 and some above
    m0+k.  The scan walks consecutive occupied exponents only, never the full
    candidate range.  Raises NoSeparatingGap when no window qualifies, which
    signals that the bounded-aspect-ratio regime applies.
    """
    occ = tuple(sorted(set(powers)))
    for lo, hi in zip(occ, occ[1:]):
        if hi - lo >= k + 2:
            return GapCertificate(m0=lo + 1, occupied_powers=occ)
    raise NoSeparatingGap(f"no empty window of {k + 1} exponents separates {occ}")


def equivalence_classes(metric: np.ndarray, m0: int) -> list[list[int]]:
    """Group terminal indices whose pairwise distance is below 2^m0.

    Classes are the connected components of the threshold graph.  The result
    is verified to be a genuine equivalence: every intra-class distance below
    2^m0 and every inter-class distance at least 2^(m0+k+1).  A failure means
    the gap certificate did not hold for this metric.
    """
    k = metric.shape[0]
    cut = 2.0**m0
    label = [-1] * k
    classes: list[list[int]] = []
    for start in range(k):
        if label[start] >= 0:
            continue
        cid = len(classes)
        comp = [start]
        label[start] = cid
        queue = [start]
        while queue:
            u = queue.pop()
            for v in range(k):
                if label[v] < 0 and metric[u, v] < cut:
                    label[v] = cid
                    comp.append(v)
                    queue.append(v)
        classes.append(sorted(comp))
    far = 2.0 ** (m0 + k + 1)
    for i in range(k):
        for j in range(i + 1, k):
            d = float(metric[i, j])
            if label[i] == label[j] and not d < cut:
                raise InvariantViolation(
                    f"terminals {i},{j} grouped together but {d} >= 2^{m0}"
                )
            if label[i] != label[j] and math.isfinite(d) and d < far:
                raise InvariantViolation(
                    f"terminals {i},{j} in different classes but {d} < 2^{m0 + k + 1}"
                )
    return classes


@dataclass(frozen=True)
class LevelInfo:
    """Diagnostics for one recursion level (vertex ids are level-local)."""

    depth: int
    k: int
    aspect: float
    scale: float
    mode: str  # "delegated" | "fallback" | "recursed"
    m0: int | None = None
    classes: tuple[tuple[int, ...], ...] = ()  # terminal vertex ids per class
    balls: tuple[tuple[int, ...], ...] = ()
    ball_diameters: tuple[float, ...] = ()
    alg1_outer: int = 0


@dataclass
class GeneralResult:
    partition: PartialPartition
    levels: list[LevelInfo] = field(default_factory=list)


def spr_general(
    g: WeightedGraph,
    seed: int = 0,
    threshold: float = DEFAULT_ASPECT_THRESHOLD,
    *,
    with_provenance_check: bool = True,
) -> GeneralResult:
    """Complete valid partition of any graph, recursing on distance scales.

    Each level rescales to unit minimum terminal distance first.  Within the
    threshold the direct partitioner runs (on the stream derived from the
    seed); beyond it, the gap machinery above applies, and if no separating
    gap exists below the configured threshold the level falls back to the
    direct partitioner and records that.  Recursion depth is bounded by the
    terminal count.
    """
    if threshold < 1:
        raise ValueError("threshold must be at least 1")
    levels: list[LevelInfo] = []
    part = _partition_level(g, seed, threshold, 0, g.k, levels, with_provenance_check)
    return GeneralResult(partition=part, levels=levels)


def _partition_level(
    g: WeightedGraph,
    seed: int,
    threshold: float,
    depth: int,
    k_top: int,
    levels: list[LevelInfo],
    check: bool,
) -> PartialPartition:
    if depth > k_top:
        raise RecursionDepthExceeded(
            f"recursion depth {depth} exceeds terminal count {k_top}"
        )
    k = g.k
    if k == 1:
        res = run_partition(g, mix(seed, STREAM_ALG1))
        levels.append(
            LevelInfo(depth=depth, k=1, aspect=1.0, scale=1.0, mode="delegated",
                      alg1_outer=res.outer_iterations)
        )
        return res.partition

    scaled, factor = rescale_to_unit_min(g)
    aspect = aspect_ratio(scaled)
    if aspect <= threshold:
        res = run_partition(scaled, mix(seed, STREAM_ALG1))
        levels.append(
            LevelInfo(depth=depth, k=k, aspect=aspect, scale=factor, mode="delegated",
                      alg1_outer=res.outer_iterations)
        )
        return res.partition

    rows = terminal_rows(scaled)
    metric = terminal_metric(scaled, rows)
    powers = rounded_distance_powers(metric)
    try:
        cert = find_gap(powers, k)
    except NoSeparatingGap:
        res = run_partition(scaled, mix(seed, STREAM_ALG1))
        levels.append(
            LevelInfo(depth=depth, k=k, aspect=aspect, scale=factor, mode="fallback",
                      alg1_outer=res.outer_iterations)
        )
        return res.partition

    classes = equivalence_classes(metric, cert.m0)
    radius = 2.0**cert.m0
    balls = [
        ball(scaled, scaled.terminals[cls[0]], radius) for cls in classes
    ]
    diameters = _check_class_balls(scaled, classes, balls, cert.m0)

    # Partition each ball independently with its class terminals.
    stitched = [-1] * g.n
    alg1_outer = 0
    for a, cls in enumerate(classes):
        sub, old_ids = induced_subgraph(
            scaled, balls[a], [scaled.terminals[idx] for idx in cls]
        )
        res = run_partition(sub, mix(seed, STREAM_BALL, a))
        alg1_outer += res.outer_iterations
        for pos, cell in enumerate(res.partition.cells):
            tidx = cls[pos]
            for v in cell:
                stitched[old_ids[v]] = tidx

    levels.append(
        LevelInfo(
            depth=depth,
            k=k,
            aspect=aspect,
            scale=factor,
            mode="recursed",
            m0=cert.m0,
            classes=tuple(tuple(scaled.terminals[idx] for idx in cls) for cls in classes),
            balls=tuple(tuple(sorted(b)) for b in balls),
            ball_diameters=tuple(diameters),
            alg1_outer=alg1_outer,
        )
    )
    contracted, outside, ball_of = _contract_balls(scaled, balls)
    rec_part = _partition_level(
        contracted, mix(seed, STREAM_RECURSE), threshold, depth + 1, k_top, levels, check
    )

    # Unwind: attach each vertex from the recursion's super-terminal cell to a
    # terminal of that class, by a forest seeded at the ball so the inner
    # assignments are kept and every cell stays connected.
    super_base = len(outside)
    for a, cls in enumerate(classes):
        rec_cell = rec_part.cells[a]
        w_set = set(balls[a])
        for x in rec_cell:
            if x < super_base:
                w_set.add(outside[x])
        _stitch_class(scaled, w_set, balls[a], stitched, rows, a)

    part = PartialPartition.from_labels(stitched, k)
    report = validate_partition(g, part, require_complete=True)
    if report is not None:
        raise InvariantViolation(f"stitched partition invalid: {report}")
    return part


def _check_class_balls(
    g: WeightedGraph,
    classes: list[list[int]],
    balls: list[frozenset[int]],
    m0: int,
) -> list[float]:
    """Class-cover invariants: disjoint balls containing their class, small diameter."""
    owner: dict[int, int] = {}
    for a, b_ in enumerate(balls):
        for v in b_:
            if v in owner:
                raise InvariantViolation(
                    f"class balls {owner[v]} and {a} overlap at vertex {v}"
                )
            owner[v] = a
    limit = 2.0 ** (m0 + 1) * _REL_SLACK
    diameters = []
    for a, cls in enumerate(classes):
        members = balls[a]
        for idx in cls:
            if g.terminals[idx] not in members:
                raise InvariantViolation(
                    f"terminal {g.terminals[idx]} escapes its class ball {a}"
                )
        diam = 0.0
        for v in members:
            dist = shortest_distances(g, v)
            for u in members:
                if dist[u] > diam:
                    diam = dist[u]
        if not diam <= limit:
            raise InvariantViolation(
                f"class ball {a} has diameter {diam} > 2^{m0 + 1}"
            )
        diameters.append(diam)
    return diameters


def _contract_balls(
    g: WeightedGraph,
    balls: list[frozenset[int]],
) -> tuple[WeightedGraph, list[int], dict[int, int]]:
    """Contract each ball to a super-terminal, keeping remaining edge weights.

    Parallel edges collapse to the minimum weight.  Returns the contracted
    graph (outside vertices first, then one super-terminal per ball, in class
    order), the old ids of the outside vertices, and the old-id -> class map.
    """
    ball_of: dict[int, int] = {}
    for a, b_ in enumerate(balls):
        for v in b_:
            ball_of[v] = a
    outside = [v for v in range(g.n) if v not in ball_of]
    new_of = {old: i for i, old in enumerate(outside)}
    super_base = len(outside)
    best: dict[tuple[int, int], float] = {}
    for u, v, w in g.edges():
        nu = super_base + ball_of[u] if u in ball_of else new_of[u]
        nv = super_base + ball_of[v] if v in ball_of else new_of[v]
        if nu == nv:
            continue
        key = (nu, nv) if nu < nv else (nv, nu)
        if key not in best or w < best[key]:
            best[key] = w
    edges = [(u, v, w) for (u, v), w in sorted(best.items())]
    terminals = [super_base + a for a in range(len(balls))]
    contracted = WeightedGraph.build(super_base + len(balls), edges, terminals)
    return contracted, outside, ball_of


def _stitch_class(
    g: WeightedGraph,
    w_set: set[int],
    ball_vertices: frozenset[int],
    stitched: list[int],
    rows: list[list[float]],
    class_idx: int,
) -> None:
    """Label the non-ball vertices of one expanded super-cell.

    Multi-source Dijkstra over the cell: every ball vertex seeds the search
    with its inner terminal label and a potential equal to its distance to
    that terminal, so an outside vertex joins the terminal it can reach
    cheapest through that terminal's own region.  Ties break on (key, terminal index,
    vertex id).  Chains never re-enter the ball, so each final cell is the
    inner cell plus trees hanging off it.
    """
    heap: list[tuple[float, int, int]] = []
    for x in sorted(ball_vertices):
        lab = stitched[x]
        heap.append((rows[lab][x], lab, x))
    heapq.heapify(heap)
    done: set[int] = set()
    while heap:
        d, lab, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        if stitched[v] == -1:
            stitched[v] = lab
        for nb, w in g.adj[v]:
            if nb in done or nb in ball_vertices or nb not in w_set:
                continue
            if stitched[nb] == -1:
                heapq.heappush(heap, (d + w, lab, nb))
    missing = [v for v in w_set if stitched[v] == -1]
    if missing:
        raise InvariantViolation(
            f"stitching left {len(missing)} vertices of class {class_idx} unlabeled"
        )
