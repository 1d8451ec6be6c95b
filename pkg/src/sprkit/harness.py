"""Instance generators, distortion evaluation, and trial amplification."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import AmplificationError, InvariantViolation
from .general import spr_general
from .graph import WeightedGraph, terminal_metric
from .minor import (
    PartialPartition,
    TerminalMinor,
    contract,
    minor_distances,
    nearest_terminal_partition,
    validate_partition,
)
from .seeds import STREAM_GENERATE, STREAM_TRIAL, mix, spawn
from .spr import DEFAULT_ASPECT_THRESHOLD, rescale_to_unit_min, run_partition

STRETCH_SLACK = 1e-9  # numeric tolerance for domination (sums of <= n doubles)

FAMILIES = ("cycle", "grid", "random_tree", "gnp_weighted", "barbell")


@dataclass(frozen=True)
class TrialReport:
    """Outcome of one minor construction on one instance."""

    seed: int
    algorithm: str  # "alg1" | "general" | "baseline"
    stretch: tuple[tuple[float, ...], ...]  # diagonal fixed at 1.0
    max_stretch: float
    outer_iterations: int
    wall_time: float
    partition_valid: bool


@dataclass(frozen=True)
class AmplifiedResult:
    """Independent trials of one algorithm; best = smallest max stretch."""

    trials: tuple[TrialReport, ...]
    failures: tuple[str, ...]
    best_index: int
    best_max_stretch: float


@dataclass(frozen=True)
class ComparisonReport:
    baseline: TrialReport
    amplified: AmplifiedResult


def distortion(g: WeightedGraph, m: TerminalMinor) -> tuple[np.ndarray, float]:
    """Entrywise minor-over-graph distance ratios and their maximum.

    The diagonal is excluded (set to 1.0).  Terminal pairs unreachable in
    both graphs get ratio 1.0; a zero terminal distance is impossible for
    distinct terminals under positive weights and raises.
    """
    tm = terminal_metric(g)
    md = minor_distances(m)
    k = g.k
    stretch = np.ones((k, k))
    worst = 1.0
    for i in range(k):
        for j in range(i + 1, k):
            dg = tm[i, j]
            dm = md[i, j]
            if dg == 0.0:
                raise InvariantViolation(
                    f"terminals {i} and {j} at distance zero; graph invalid"
                )
            if math.isinf(dg):
                ratio = 1.0 if math.isinf(dm) else math.inf
            else:
                ratio = float(dm / dg)
            stretch[i, j] = ratio
            stretch[j, i] = ratio
            if ratio > worst:
                worst = ratio
    return stretch, worst


def evaluate_partition(
    g: WeightedGraph, p: PartialPartition
) -> tuple[tuple[tuple[float, ...], ...], float, bool]:
    """Contract, measure stretch, and report validity in one step."""
    valid = validate_partition(g, p, require_complete=True) is None
    minor = contract(g, p)
    matrix, worst = distortion(g, minor)
    rows = tuple(tuple(float(x) for x in row) for row in matrix)
    return rows, worst, valid


def run_trial(
    g: WeightedGraph,
    algorithm: str,
    seed: int,
    threshold: float = DEFAULT_ASPECT_THRESHOLD,
    alg1_options: dict | None = None,
) -> TrialReport:
    """Build one minor with the chosen algorithm and measure its stretch.

    "alg1" rescales to unit minimum terminal distance first (the partition's
    validity and the stretch are scale-invariant).  "baseline" is the
    deterministic nearest-terminal partition.  Stretch is always reported in
    original units.
    """
    start = time.perf_counter()
    outer = 0
    if algorithm == "baseline":
        part = nearest_terminal_partition(g)
    elif algorithm == "alg1":
        opts = alg1_options or {}
        work = rescale_to_unit_min(g)[0] if g.k >= 2 else g
        res = run_partition(work, seed, **opts)
        part = res.partition
        outer = res.outer_iterations
    elif algorithm == "general":
        res = spr_general(g, seed, threshold=threshold)
        part = res.partition
        outer = sum(level.alg1_outer for level in res.levels)
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    stretch, worst, valid = evaluate_partition(g, part)
    elapsed = time.perf_counter() - start
    return TrialReport(
        seed=seed,
        algorithm=algorithm,
        stretch=stretch,
        max_stretch=worst,
        outer_iterations=outer,
        wall_time=elapsed,
        partition_valid=valid,
    )


def amplify(
    g: WeightedGraph,
    algorithm: str,
    trials: int,
    seed: int,
    threshold: float = DEFAULT_ASPECT_THRESHOLD,
    alg1_options: dict | None = None,
) -> AmplifiedResult:
    """Run independent trials on derived seeds and keep the best minor.

    Trial i uses seed mix(seed, STREAM_TRIAL, i), so any single trial can be
    replayed in isolation.  Failed trials are recorded and excluded from the
    selection; if every trial fails, AmplificationError is raised.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    reports: list[TrialReport] = []
    failures: list[str] = []
    for idx in range(trials):
        child = mix(seed, STREAM_TRIAL, idx)
        try:
            reports.append(
                run_trial(g, algorithm, child, threshold=threshold, alg1_options=alg1_options)
            )
        except Exception as exc:  # noqa: BLE001 - every trial failure is data
            failures.append(f"trial {idx}: {type(exc).__name__}: {exc}")
    if not reports:
        raise AmplificationError("; ".join(failures))
    best_index = min(range(len(reports)), key=lambda i: (reports[i].max_stretch, i))
    return AmplifiedResult(
        trials=tuple(reports),
        failures=tuple(failures),
        best_index=best_index,
        best_max_stretch=reports[best_index].max_stretch,
    )


def compare_baseline(
    g: WeightedGraph,
    trials: int,
    seed: int,
    threshold: float = DEFAULT_ASPECT_THRESHOLD,
) -> ComparisonReport:
    """Nearest-terminal baseline next to the amplified randomized construction."""
    baseline = run_trial(g, "baseline", seed)
    amplified = amplify(g, "general", trials, seed, threshold=threshold)
    return ComparisonReport(baseline=baseline, amplified=amplified)


# ---------------------------------------------------------------------------
# Instance generators.  All draws go through a seeded RNG; identical
# (family, params, seed) yield identical graphs.


def generate(family: str, seed: int = 0, **params) -> WeightedGraph:
    """Generate a connected instance of the given family.

    Families: cycle(n, k), grid(rows, cols, k), random_tree(n, k),
    gnp_weighted(n, k, p), barbell(clique, bridge_weight, steiner_per_side).
    Shared params: placement ("spread" or "uniform"), wmin/wmax for random
    weights.  Disconnected samples are redrawn up to a bound, then rejected.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")
    rng = spawn(seed, STREAM_GENERATE)
    builder = {
        "cycle": _gen_cycle,
        "grid": _gen_grid,
        "random_tree": _gen_random_tree,
        "gnp_weighted": _gen_gnp,
        "barbell": _gen_barbell,
    }[family]
    return builder(rng, **params)


def _pick_terminals(
    edges: list[tuple[int, int, float]],
    n: int,
    k: int,
    placement: str,
    rng,
) -> list[int]:
    if not 1 <= k <= n:
        raise ValueError("terminal count must be in [1, n]")
    if placement == "uniform":
        return sorted(rng.sample(range(n), k))
    if placement != "spread":
        raise ValueError("placement must be 'uniform' or 'spread'")
    # Greedy farthest-point traversal from vertex 0, ties to the smallest id.
    adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for u, v, w in edges:
        adj[u].append((v, w))
        adj[v].append((u, w))
    import heapq

    def dists(source: int) -> list[float]:
        dist = [math.inf] * n
        dist[source] = 0.0
        heap = [(0.0, source)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for v, w in adj[u]:
                nd = d + w
                if nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        return dist

    chosen = [0]
    nearest = dists(0)
    while len(chosen) < k:
        best = max(range(n), key=lambda v: (nearest[v], -v))
        chosen.append(best)
        for v, d in enumerate(dists(best)):
            if d < nearest[v]:
                nearest[v] = d
    return sorted(chosen)


def _random_weight(rng, wmin: float, wmax: float) -> float:
    if not (0 < wmin <= wmax):
        raise ValueError("need 0 < wmin <= wmax")
    return rng.uniform(wmin, wmax) if wmin < wmax else wmin


def _gen_cycle(rng, n: int = 9, k: int = 3, placement: str = "spread", **_) -> WeightedGraph:
    """Unit-weight n-cycle; spread terminals sit at evenly spaced positions."""
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    edges = [(i, (i + 1) % n, 1.0) for i in range(n)]
    if placement == "spread":
        terminals = sorted({i * n // k for i in range(k)})
        if len(terminals) != k:
            raise ValueError("k too large for spread placement on this cycle")
    else:
        terminals = _pick_terminals(edges, n, k, placement, rng)
    return WeightedGraph.build(n, edges, terminals)


def _gen_grid(
    rng,
    rows: int = 3,
    cols: int = 3,
    k: int = 2,
    placement: str = "spread",
    wmin: float = 1.0,
    wmax: float = 1.0,
    **_,
) -> WeightedGraph:
    n = rows * cols
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1, _random_weight(rng, wmin, wmax)))
            if r + 1 < rows:
                edges.append((v, v + cols, _random_weight(rng, wmin, wmax)))
    terminals = _pick_terminals(edges, n, k, placement, rng)
    return WeightedGraph.build(n, edges, terminals)


def _gen_random_tree(
    rng,
    n: int = 16,
    k: int = 2,
    placement: str = "uniform",
    wmin: float = 1.0,
    wmax: float = 2.0,
    **_,
) -> WeightedGraph:
    """Random attachment tree: vertex i > 0 hangs off a uniform earlier vertex."""
    if n < 1:
        raise ValueError("tree needs n >= 1")
    edges = [
        (rng.randrange(i), i, _random_weight(rng, wmin, wmax)) for i in range(1, n)
    ]
    terminals = _pick_terminals(edges, n, k, placement, rng)
    return WeightedGraph.build(n, edges, terminals)


def _gen_gnp(
    rng,
    n: int = 20,
    k: int = 2,
    p: float = 0.25,
    placement: str = "uniform",
    wmin: float = 1.0,
    wmax: float = 2.0,
    max_resample: int = 200,
    **_,
) -> WeightedGraph:
    """G(n, p) with uniform random weights, resampled until connected."""
    if not 0 < p <= 1:
        raise ValueError("p must be in (0, 1]")
    for _attempt in range(max_resample):
        edges = []
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < p:
                    edges.append((u, v, _random_weight(rng, wmin, wmax)))
        if _is_connected(n, edges):
            terminals = _pick_terminals(edges, n, k, placement, rng)
            return WeightedGraph.build(n, edges, terminals)
    raise ValueError(f"no connected G({n},{p}) sample in {max_resample} attempts")


def _gen_barbell(
    rng,
    clique: int = 4,
    bridge_weight: float = 2.0**60,
    steiner_per_side: int = 2,
    **_,
) -> WeightedGraph:
    """Two unit-weight cliques joined by one heavy bridge edge.

    All clique vertices are terminals; a few extra non-terminal vertices hang
    off each side with random light edges.  The bridge weight drives the
    terminal aspect ratio, so large values exercise the scale-gap recursion.
    """
    if clique < 2:
        raise ValueError("clique size must be >= 2")
    n = 2 * clique + 2 * steiner_per_side
    edges = []
    for side in range(2):
        base = side * clique
        for i in range(clique):
            for j in range(i + 1, clique):
                edges.append((base + i, base + j, 1.0))
    edges.append((0, clique, float(bridge_weight)))
    for s in range(2 * steiner_per_side):
        v = 2 * clique + s
        side = s % 2
        anchor = side * clique + rng.randrange(clique)
        edges.append((anchor, v, rng.choice([0.5, 1.0, 1.5, 2.0])))
    terminals = list(range(2 * clique))
    return WeightedGraph.build(n, edges, terminals)


def _is_connected(n: int, edges: list[tuple[int, int, float]]) -> bool:
    if n == 0:
        return False
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v, _ in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == n
