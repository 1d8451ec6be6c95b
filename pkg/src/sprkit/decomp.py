"""Randomized low-diameter terminal decomposition and its empirical checks.

Carving grows one ball per terminal, in terminal order, with radii drawn from
a truncated exponential on [0, delta); each cell is its ball minus all earlier
balls.  Every cell therefore has diameter at most 2*delta, the cells are
pairwise disjoint, and every terminal is covered.  ``verify_decomposition``
estimates the separation probability of vertex pairs and the number of cells
crossed by terminal shortest paths over many independent carves.

Logarithms are base 2 throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvariantViolation
from .graph import (
    PathWitness,
    WeightedGraph,
    shortest_distances,
    shortest_path_witness,
    terminal_rows,
)
from .minor import PartialPartition


@dataclass(frozen=True)
class TruncExpParams:
    """Parameters (lam, delta) of the exponential law conditioned on [0, delta)."""

    lam: float
    delta: float

    def __post_init__(self) -> None:
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise ValueError("lam must be positive and finite")
        if not (self.delta > 0 and math.isfinite(self.delta)):
            raise ValueError("delta must be positive and finite")


def texp_cdf(params: TruncExpParams, x: float) -> float:
    """Analytic CDF on [0, delta)."""
    if x <= 0:
        return 0.0
    if x >= params.delta:
        return 1.0
    c = -math.expm1(-params.delta / params.lam)
    return -math.expm1(-x / params.lam) / c


def texp_pdf(params: TruncExpParams, x: float) -> float:
    """Density: e^{-x/lam} / (lam * (1 - e^{-delta/lam})) on [0, delta)."""
    if x < 0 or x >= params.delta:
        return 0.0
    c = -math.expm1(-params.delta / params.lam)
    return math.exp(-x / params.lam) / (params.lam * c)


def sample_texp(params: TruncExpParams, rng) -> float:
    """Inverse-CDF sample: x = -lam * ln(1 - U * (1 - e^{-delta/lam})).

    ``rng`` only needs a ``random()`` method yielding uniforms in [0, 1);
    the result is strictly below delta.
    """
    u = rng.random()
    c = -math.expm1(-params.delta / params.lam)
    return -params.lam * math.log1p(-u * c)


def carve_lambda(k: int, delta: float) -> float:
    """Ball-radius scale: delta / log2(k); extended to delta itself at k = 1."""
    if k < 1:
        raise ValueError("need at least one terminal")
    if k == 1:
        return delta
    return delta / math.log2(k)


def separation_rate(k: int) -> float:
    """Coefficient 4*log2(k) governing separation probability and crossing counts."""
    return 4.0 * math.log2(k)


def carve(
    g: WeightedGraph,
    delta: float,
    rng,
    term_rows: Sequence[Sequence[float]] | None = None,
) -> PartialPartition:
    """One randomized carve: cell j = ball(t_j, R_j) minus all earlier balls.

    Balls live in the unrestricted graph metric.  Radii are independent
    truncated-exponential draws, one per terminal in terminal order (exactly k
    uniforms are consumed from ``rng``).  Cell alignment with terminals is
    retained even for cells that come out empty; a terminal captured by an
    earlier ball lands in that earlier cell.

    ``term_rows`` may supply precomputed terminal distance rows; semantics are
    identical, it only skips the k single-source searches.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    rows = term_rows if term_rows is not None else terminal_rows(g)
    params = TruncExpParams(lam=carve_lambda(g.k, delta), delta=delta)
    taken = [False] * g.n
    cells = []
    for j in range(g.k):
        r = sample_texp(params, rng)
        row = rows[j]
        cell = [v for v in range(g.n) if row[v] <= r and not taken[v]]
        for v in cell:
            taken[v] = True
        cells.append(frozenset(cell))
    return PartialPartition(cells=tuple(cells))


def degree_of_separation(p: PartialPartition, path: PathWitness) -> int:
    """Number of cells of the partition that the path meets."""
    vs = frozenset(path.vertices)
    return sum(1 for cell in p.cells if cell and not vs.isdisjoint(cell))


def far_ball_probability(k: int, delta: float) -> float:
    """Probability that a carving radius reaches within 2*lam of its cap.

    Closed form Pr[R >= delta - 2*lam] for R ~ texp(lam=delta/log2 k, delta),
    with the lower limit clamped to 0 (for k <= 4 the threshold is
    nonpositive, so the probability is exactly 1).  The value is scale-free in
    delta and is checked against its 8/k bound before returning.
    """
    if k < 2:
        raise ValueError("need at least two terminals")
    if delta <= 0:
        raise ValueError("delta must be positive")
    lam = carve_lambda(k, delta)
    a = max(0.0, delta - 2.0 * lam)
    num = math.exp(-a / lam) - math.exp(-delta / lam)
    den = -math.expm1(-delta / lam)
    p = num / den
    if p > 8.0 / k + 1e-12:
        raise InvariantViolation(f"far-ball probability {p} exceeds 8/k for k={k}")
    return p


@dataclass(frozen=True)
class PairSeparation:
    """Empirical separation frequency for one vertex pair."""

    u: int
    v: int
    distance: float
    frequency: float
    std_err: float


@dataclass(frozen=True)
class PathCrossing:
    """Empirical cell-crossing statistics for one terminal shortest path."""

    s: int
    t: int
    length: float
    mean: float
    std_err: float
    tail: dict[int, float]  # t -> frequency of (crossings > t)


@dataclass
class DecompositionStats:
    """Aggregates over repeated carves of one instance at one delta."""

    trials: int
    delta: float
    k: int
    diameter_violations: int
    pair_separation: list[PairSeparation]
    path_crossings: list[PathCrossing]
    zp_histogram: dict[int, float] = field(default_factory=dict)


def verify_decomposition(
    g: WeightedGraph,
    delta: float,
    trials: int,
    rng,
    vertex_pairs: int = 50,
    tail_max: int = 8,
) -> DecompositionStats:
    """Run ``trials`` carves and collect diameter / separation / crossing stats.

    Sampled pairs are all terminal pairs plus ``vertex_pairs`` random distinct
    vertex pairs (drawn from ``rng`` before the trial loop, so the whole run
    is fixed by the seed).  Sampled paths are the deterministic shortest-path
    witnesses of all terminal pairs.  A diameter violation is any nonempty
    cell whose graph-metric diameter exceeds 2*delta.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if g.k < 2:
        raise ValueError("need at least two terminals")
    n, k = g.n, g.k
    rows = terminal_rows(g)
    apsp = np.array([shortest_distances(g, s) for s in range(n)])

    pairs: list[tuple[int, int]] = []
    for i in range(k):
        for j in range(i + 1, k):
            pairs.append((g.terminals[i], g.terminals[j]))
    seen = set(pairs)
    while len(pairs) < k * (k - 1) // 2 + vertex_pairs and n >= 2:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        if key in seen:
            continue
        seen.add(key)
        pairs.append(key)
        if len(seen) == n * (n - 1) // 2:
            break
    paths = [
        shortest_path_witness(g, g.terminals[i], g.terminals[j])
        for i in range(k)
        for j in range(i + 1, k)
    ]
    path_idx = [np.array(p.vertices, dtype=np.intp) for p in paths]
    pu = np.array([p[0] for p in pairs], dtype=np.intp)
    pv = np.array([p[1] for p in pairs], dtype=np.intp)

    sep_counts = np.zeros(len(pairs), dtype=np.int64)
    zp_sum = np.zeros(len(paths))
    zp_sumsq = np.zeros(len(paths))
    tail_counts = np.zeros((len(paths), tail_max + 1), dtype=np.int64)
    diameter_violations = 0
    limit = 2.0 * delta

    for _ in range(trials):
        part = carve(g, delta, rng, term_rows=rows)
        labels = np.array(part.labels(n), dtype=np.int64)
        for cell in part.cells:
            if len(cell) > 1:
                idx = np.fromiter(cell, dtype=np.intp)
                if float(apsp[np.ix_(idx, idx)].max()) > limit:
                    diameter_violations += 1
        sep_counts += labels[pu] != labels[pv]
        for p_i, idx in enumerate(path_idx):
            lab = labels[idx]
            zp = len(np.unique(lab[lab >= 0]))
            zp_sum[p_i] += zp
            zp_sumsq[p_i] += zp * zp
            for t in range(1, tail_max + 1):
                if zp > t:
                    tail_counts[p_i, t] += 1

    pair_stats = []
    for idx, (u, v) in enumerate(pairs):
        f = sep_counts[idx] / trials
        se = math.sqrt(f * (1.0 - f) / trials)
        pair_stats.append(
            PairSeparation(u=u, v=v, distance=float(apsp[u, v]), frequency=f, std_err=se)
        )
    path_stats = []
    for p_i, w in enumerate(paths):
        mean = zp_sum[p_i] / trials
        var = max(0.0, zp_sumsq[p_i] / trials - mean * mean)
        tail = {
            t: tail_counts[p_i, t] / trials for t in range(1, tail_max + 1)
        }
        path_stats.append(
            PathCrossing(
                s=w.vertices[0],
                t=w.vertices[-1],
                length=w.length,
                mean=float(mean),
                std_err=math.sqrt(var / trials),
                tail=tail,
            )
        )
    total = trials * len(paths)
    histogram = {
        t: float(tail_counts[:, t].sum() / total) for t in range(1, tail_max + 1)
    }
    return DecompositionStats(
        trials=trials,
        delta=delta,
        k=k,
        diameter_violations=diameter_violations,
        pair_separation=pair_stats,
        path_crossings=path_stats,
        zp_histogram=histogram,
    )


def evaluate_requirements(stats: DecompositionStats) -> dict:
    """Pass/fail summary of the decomposition requirements at desk scale.

    Checks: (a) no cell diameter above 2*delta; (b) every pair's separation
    frequency within 4*log2(k) * d/delta plus three standard errors; (c) every
    path's mean crossing count within 1 + 4*log2(k) * d(P)/delta plus three
    standard errors; (d) tail frequencies nonincreasing with a fitted
    geometric decay over the resolvable range.
    """
    beta = separation_rate(stats.k)
    delta = stats.delta
    sep_ok = all(
        p.frequency <= beta * p.distance / delta + 3.0 * p.std_err
        for p in stats.pair_separation
    )
    mean_ok = all(
        p.mean <= 1.0 + beta * p.length / delta + 3.0 * p.std_err
        for p in stats.path_crossings
    )
    floor = 10.0 / stats.trials
    ts = sorted(stats.zp_histogram)
    freqs = [stats.zp_histogram[t] for t in ts]
    monotone = all(freqs[i + 1] <= freqs[i] for i in range(len(freqs) - 1))
    pts = [(t, f) for t, f in zip(ts, freqs) if f > floor]
    decay_rate = None
    if len(pts) >= 2:
        xs = np.array([t for t, _ in pts], dtype=float)
        ys = np.log(np.array([f for _, f in pts]))
        slope = float(np.polyfit(xs, ys, 1)[0])
        decay_rate = -slope
        decay_ok = slope < 0.0
    else:
        decay_ok = True  # tail already below resolution: decay is immediate
    return {
        "diameter_bound": {
            "passed": stats.diameter_violations == 0,
            "violations": stats.diameter_violations,
        },
        "separation_probability": {"passed": bool(sep_ok)},
        "mean_crossings": {"passed": bool(mean_ok)},
        "tail_decay": {
            "passed": bool(monotone and decay_ok),
            "monotone": bool(monotone),
            "fitted_rate": decay_rate,
        },
        "all_passed": bool(
            stats.diameter_violations == 0 and sep_ok and mean_ok and monotone and decay_ok
        ),
    }
