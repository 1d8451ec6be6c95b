import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import connected_graphs
from oracles import brute_all_pairs, brute_ball, brute_distances

from sprkit import (
    UNREACHABLE,
    WeightedGraph,
    aspect_ratio,
    ball,
    format_edge_list,
    parse_edge_list,
    shortest_distances,
    shortest_path_witness,
    terminal_metric,
)
from sprkit.errors import GraphFormatError, NoPathError


def path_graph(weights, terminals=(0,)):
    n = len(weights) + 1
    edges = [(i, i + 1, w) for i, w in enumerate(weights)]
    return WeightedGraph.build(n, edges, terminals)


def cycle_graph(n, terminals):
    edges = [(i, (i + 1) % n, 1.0) for i in range(n)]
    return WeightedGraph.build(n, edges, terminals)


NINE_CYCLE = cycle_graph(9, (0, 3, 6))
# Frozen from the all-simple-paths oracle.
NINE_CYCLE_DISTS = [0.0, 1.0, 2.0, 3.0, 4.0, 4.0, 3.0, 2.0, 1.0]


class TestShortestDistances:
    def test_two_edge_path(self):
        g = path_graph([1.0, 2.0])
        assert shortest_distances(g, 0) == [0.0, 1.0, 3.0]

    def test_excluding_middle_disconnects(self):
        g = path_graph([1.0, 2.0])
        dist = shortest_distances(g, 0, allowed={0, 2})
        assert dist[2] == UNREACHABLE

    def test_nine_cycle_matches_oracle(self):
        assert brute_distances(NINE_CYCLE, 0) == NINE_CYCLE_DISTS
        for src in range(9):
            got = shortest_distances(NINE_CYCLE, src)
            assert got == [NINE_CYCLE_DISTS[(v - src) % 9] for v in range(9)]

    def test_source_must_satisfy_predicate(self):
        g = path_graph([1.0])
        with pytest.raises(ValueError):
            shortest_distances(g, 0, allowed={1})


class TestBall:
    def test_zero_radius(self):
        assert ball(NINE_CYCLE, 4, 0.0) == {4}

    def test_unit_radius_on_cycle(self):
        dist = shortest_distances(NINE_CYCLE, 3)
        expected = {v for v in range(9) if dist[v] <= 1.0}
        assert ball(NINE_CYCLE, 3, 1.0) == expected == {2, 3, 4}

    def test_radius_beyond_diameter_is_everything(self):
        assert ball(NINE_CYCLE, 0, 100.0) == set(range(9))

    def test_negative_radius_rejected(self):
        with pytest.raises(ValueError):
            ball(NINE_CYCLE, 0, -1.0)


class TestWitness:
    def test_single_vertex(self):
        w = shortest_path_witness(NINE_CYCLE, 2, 2)
        assert w.vertices == (2,) and w.length == 0.0

    def test_path_graph(self):
        g = path_graph([1.0, 2.0])
        w = shortest_path_witness(g, 0, 2)
        assert w.vertices == (0, 1, 2) and w.length == 3.0

    def test_cycle_takes_shorter_arc(self):
        # Arcs 0..4 have lengths 4 (through 1,2,3) and 5 (through 8,7,6,5).
        w = shortest_path_witness(NINE_CYCLE, 0, 4)
        assert w.length == 4.0
        assert w.vertices == (0, 1, 2, 3, 4)

    def test_disconnected_pair_raises(self):
        g = WeightedGraph.build(3, [(0, 1, 1.0)], (0, 2))
        with pytest.raises(NoPathError):
            shortest_path_witness(g, 0, 2)

    def test_deterministic_under_ties(self):
        # Two equal-length routes 0-1-3 and 0-2-3; the witness must not flap.
        g = WeightedGraph.build(4, [(0, 1, 1.0), (0, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)], (0,))
        first = shortest_path_witness(g, 0, 3)
        assert first == shortest_path_witness(g, 0, 3)
        assert first.vertices == (0, 1, 3)  # smallest predecessor id wins


class TestTerminalMetric:
    def test_single_terminal(self):
        g = path_graph([1.0], terminals=(0,))
        m = terminal_metric(g)
        assert m.shape == (1, 1) and m[0, 0] == 0.0

    def test_nine_cycle_equilateral(self):
        m = terminal_metric(NINE_CYCLE)
        for i in range(3):
            for j in range(3):
                assert m[i, j] == (0.0 if i == j else 3.0)

    def test_star_leaves(self):
        # Center 0, three unit spokes; terminals are the leaves.
        g = WeightedGraph.build(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)], (1, 2, 3))
        m = terminal_metric(g)
        assert all(m[i, j] == 2.0 for i in range(3) for j in range(3) if i != j)


class TestAspectRatio:
    def test_equilateral_cycle(self):
        assert aspect_ratio(NINE_CYCLE) == 1.0

    def test_weighted_path(self):
        g = path_graph([1.0, 9.0], terminals=(0, 1, 2))
        assert aspect_ratio(g) == 10.0

    def test_two_terminals_always_one(self):
        g = path_graph([7.5], terminals=(0, 1))
        assert aspect_ratio(g) == 1.0

    def test_requires_two_terminals(self):
        with pytest.raises(ValueError):
            aspect_ratio(path_graph([1.0]))


class TestEdgeListFormat:
    def test_round_trip(self):
        text = format_edge_list(NINE_CYCLE)
        assert parse_edge_list(text) == NINE_CYCLE

    def test_round_trip_preserves_float_weights(self):
        g = path_graph([0.1, 2.0**60], terminals=(0, 2))
        assert parse_edge_list(format_edge_list(g)).edges() == g.edges()

    @pytest.mark.parametrize(
        "text",
        [
            "",
            "2 1\n0 1 1.0\n0",
            "2 1 1\n0 1 0.0\n0",  # nonpositive weight
            "2 1 1\n0 0 1.0\n0",  # self loop
            "3 2 1\n0 1 1.0\n0 1 2.0\n0",  # duplicate edge
            "2 1 1\n0 1 1.0\n5",  # terminal out of range
            "2 1 2\n0 1 1.0\n0 0",  # duplicate terminals
            "3 1 1\n0 1 1.0\n0",  # vertex 2 unreachable from terminal
        ],
    )
    def test_rejects_malformed(self, text):
        with pytest.raises(GraphFormatError):
            parse_edge_list(text)

    def test_duplicate_edge_reversed_rejected(self):
        with pytest.raises(GraphFormatError):
            WeightedGraph.build(2, [(0, 1, 1.0), (1, 0, 1.0)], (0,))


@settings(max_examples=60, deadline=None)
@given(connected_graphs(max_n=9, max_extra_edges=2))
def test_distances_match_brute_force(g):
    for src in range(g.n):
        assert shortest_distances(g, src) == brute_distances(g, src)


@settings(max_examples=40, deadline=None)
@given(connected_graphs(max_n=9, max_extra_edges=2))
def test_ball_equals_distance_filter(g):
    dist = shortest_distances(g, 0)
    for r in (0.0, 0.75, 1.5, 3.25, 100.0):
        assert ball(g, 0, r) == brute_ball(g, 0, r)
        assert ball(g, 0, r) == {v for v in range(g.n) if dist[v] <= r}


@settings(max_examples=40, deadline=None)
@given(connected_graphs(max_n=9, max_extra_edges=2), st.randoms(use_true_random=False))
def test_restricted_ball_matches_oracle(g, rnd):
    size = rnd.randint(1, g.n)
    allowed = {0} | set(rnd.sample(range(g.n), size - 1))
    dist = shortest_distances(g, 0, allowed=allowed)
    for r in (0.0, 1.0, 2.75, 50.0):
        got = ball(g, 0, r, allowed=allowed)
        assert got == brute_ball(g, 0, r, allowed=allowed)
        assert got == {v for v in range(g.n) if dist[v] <= r}


@settings(max_examples=40, deadline=None)
@given(connected_graphs(max_n=8, max_extra_edges=2))
def test_triangle_inequality(g):
    apsp = brute_all_pairs(g)
    for u in range(g.n):
        got = shortest_distances(g, u)
        assert got == apsp[u]
        for v in range(g.n):
            for w in range(g.n):
                assert apsp[u][w] <= apsp[u][v] + apsp[v][w]


@settings(max_examples=40, deadline=None)
@given(connected_graphs(max_n=9, max_extra_edges=2))
def test_witness_is_a_shortest_path(g):
    dist = shortest_distances(g, 0)
    for v in range(g.n):
        w = shortest_path_witness(g, 0, v)
        assert w.length == dist[v]
        total = 0.0
        for a, b in zip(w.vertices, w.vertices[1:]):
            total += g.weight(a, b)
        assert total == w.length
        assert len(set(w.vertices)) == len(w.vertices)


@settings(max_examples=40, deadline=None)
@given(connected_graphs(max_n=9, min_k=2, max_k=4))
def test_terminal_metric_shape(g):
    m = terminal_metric(g)
    assert (m == m.T).all()
    assert (m.diagonal() == 0.0).all()
    for i in range(g.k):
        for j in range(i + 1, g.k):
            assert m[i, j] > 0.0
            assert math.isfinite(m[i, j])
