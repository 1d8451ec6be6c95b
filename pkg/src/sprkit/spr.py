"""Iterative exponential-radius ball growing that partitions all vertices.

Each terminal owns a cell, initially just itself.  Outer iterations sweep the
terminals in order; each step draws an exponential radius increment with mean
b^i (b slightly above 1, growing the expected radius every outer round) and
re-grows the cell to a ball around its terminal inside the subgraph induced
by that cell plus all still-unassigned vertices.  Assigned vertices never
change hands, cells stay connected and terminal-anchored, and the loop runs
until every vertex is assigned.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import InvariantViolation, IterationLimitError
from .graph import WeightedGraph, aspect_ratio, scale_weights, terminal_metric
from .minor import PartialPartition

DEFAULT_ASPECT_THRESHOLD = 2.0**48


def growth_factor(k: int) -> float:
    """Radius growth base b = 1 + 1/(35*log2(k)); degenerate k=1 uses b=2."""
    if k < 1:
        raise ValueError("need at least one terminal")
    if k == 1:
        return 2.0
    return 1.0 + 1.0 / (35.0 * math.log2(k))


@dataclass(frozen=True)
class GrowthStep:
    """One inner-loop step: ball of terminal ``j`` regrown at iteration ``i``."""

    i: int
    j: int
    draw: float
    radius: float
    newly_assigned: tuple[int, ...]


@dataclass
class SprResult:
    partition: PartialPartition
    outer_iterations: int
    b: float
    trace: list[GrowthStep] | None


def _restricted_ball(g: WeightedGraph, labels: list[int], j: int, source: int, r: float) -> dict[int, float]:
    """Ball around ``source`` within the subgraph induced by cell j + unassigned."""
    import heapq

    dist = {source: 0.0}
    heap = [(0.0, source)]
    adj = g.adj
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, w in adj[u]:
            lab = labels[v]
            if lab != -1 and lab != j:
                continue
            nd = d + w
            if nd > r:
                continue
            if nd < dist.get(v, math.inf):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def _iteration_cap(g: WeightedGraph, b: float) -> int:
    # Generous guard against RNG pathology; far above the expected rounds.
    if g.k >= 2:
        metric = terminal_metric(g)
        finite = [metric[i, j] for i in range(g.k) for j in range(i + 1, g.k) if math.isfinite(metric[i, j])]
        ratio = (max(finite) / min(finite)) if finite else 1.0
    else:
        ratio = 1.0
    return 200 * math.ceil(math.log(g.n * ratio * g.k + 2) / math.log(b))


def run_partition(
    g: WeightedGraph,
    seed: int = 0,
    *,
    rng=None,
    b_override: float | None = None,
    rate_parameterization: bool = False,
    trace: bool = False,
    max_outer: int | None = None,
) -> SprResult:
    """Partition all vertices by iterative restricted ball growing.

    Radius increments are exponential with mean b^i (the growing-expectation
    reading; ``rate_parameterization=True`` flips to rate b^i, i.e. mean
    b^-i, for experimentation).  Sampling is by inversion,
    -mean * ln(1 - U).  The RNG draws one uniform per (iteration, terminal)
    step, in loop order, so runs replay exactly from the seed; the sweep stops
    as soon as no vertex is unassigned, which is a deterministic function of
    the draws.

    With ``trace=True`` every step is recorded and the cell invariants
    (disjoint, terminal-anchored, connected, monotonically growing) are
    asserted after each step instead of only at the end.
    """
    rng = rng if rng is not None else random.Random(seed)
    b = b_override if b_override is not None else growth_factor(g.k)
    if not b > 1.0:
        raise ValueError("growth base must exceed 1")
    cap = max_outer if max_outer is not None else _iteration_cap(g, b)

    n, k = g.n, g.k
    labels = [-1] * n
    cells: list[set[int]] = []
    for j, t in enumerate(g.terminals):
        labels[t] = j
        cells.append({t})
    radii = [0.0] * k
    unassigned = n - k
    steps: list[GrowthStep] | None = [] if trace else None

    i = 0
    while unassigned > 0:
        i += 1
        if i > cap:
            raise IterationLimitError(
                f"no complete partition after {cap} outer iterations",
                cells=PartialPartition.of(cells),
                iterations=cap,
            )
        for j in range(k):
            mean = b**i if not rate_parameterization else b**-i
            draw = -mean * math.log1p(-rng.random())
            radii[j] += draw
            members = _restricted_ball(g, labels, j, g.terminals[j], radii[j])
            # Pure ball assignment: the regrown ball must contain the old cell.
            for v in cells[j]:
                if v not in members:
                    raise InvariantViolation(
                        f"cell {j} lost vertex {v} when regrown to radius {radii[j]}"
                    )
            new = sorted(v for v in members if labels[v] == -1)
            for v in new:
                labels[v] = j
                cells[j].add(v)
            unassigned -= len(new)
            if steps is not None:
                steps.append(
                    GrowthStep(i=i, j=j, draw=draw, radius=radii[j], newly_assigned=tuple(new))
                )
                _check_step_invariants(g, cells, j)
            if unassigned == 0:
                break

    return SprResult(
        partition=PartialPartition.of(cells),
        outer_iterations=i,
        b=b,
        trace=steps,
    )


def _check_step_invariants(g: WeightedGraph, cells: list[set[int]], j: int) -> None:
    cell = cells[j]
    t = g.terminals[j]
    if t not in cell:
        raise InvariantViolation(f"terminal {t} missing from its cell {j}")
    reached = {t}
    stack = [t]
    while stack:
        u = stack.pop()
        for v, _ in g.adj[u]:
            if v in cell and v not in reached:
                reached.add(v)
                stack.append(v)
    if len(reached) != len(cell):
        raise InvariantViolation(f"cell {j} disconnected after growth step")


def paper_aspect_threshold(k: int) -> float:
    """The 2^(k^3) gate; infinity once it exceeds double range (k >= 11)."""
    if k < 1:
        raise ValueError("need at least one terminal")
    exponent = k**3
    if exponent > 1023:
        return math.inf
    return 2.0**exponent


def assumption_holds(g: WeightedGraph, threshold: float = DEFAULT_ASPECT_THRESHOLD) -> bool:
    """True when the terminal aspect ratio is within ``threshold``."""
    return aspect_ratio(g) <= threshold


def rescale_to_unit_min(g: WeightedGraph) -> tuple[WeightedGraph, float]:
    """Scale weights so the minimum terminal distance is 1.

    Returns the scaled graph and the factor (the original minimum distance);
    multiply scaled distances by the factor to recover original units.
    """
    if g.k < 2:
        raise ValueError("rescaling needs at least two terminals")
    metric = terminal_metric(g)
    off = [
        metric[i, j]
        for i in range(g.k)
        for j in range(i + 1, g.k)
        if math.isfinite(metric[i, j])
    ]
    if not off:
        return g, 1.0
    factor = float(min(off))
    if factor == 1.0:
        return g, 1.0
    return scale_weights(g, factor), factor
