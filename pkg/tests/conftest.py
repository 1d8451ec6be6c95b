from __future__ import annotations

import hypothesis.strategies as st

from sprkit import WeightedGraph

# Dyadic weights make every path sum exact in binary floating point, so
# oracle comparisons can use equality instead of tolerances.
DYADIC_WEIGHTS = [0.25 * i for i in range(1, 33)]


@st.composite
def connected_graphs(
    draw,
    min_n: int = 2,
    max_n: int = 10,
    max_extra_edges: int = 3,
    min_k: int = 1,
    max_k: int = 4,
):
    """Random connected graph with dyadic weights and a random terminal set."""
    n = draw(st.integers(min_n, max_n))
    edges = {}
    for v in range(1, n):
        parent = draw(st.integers(0, v - 1))
        edges[(parent, v)] = draw(st.sampled_from(DYADIC_WEIGHTS))
    candidates = [
        (u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges
    ]
    if candidates and max_extra_edges > 0:
        extra = draw(
            st.lists(
                st.sampled_from(candidates),
                max_size=max_extra_edges,
                unique=True,
            )
        )
        for pair in extra:
            edges[pair] = draw(st.sampled_from(DYADIC_WEIGHTS))
    k = draw(st.integers(min_k, min(max_k, n)))
    terminals = draw(
        st.lists(st.integers(0, n - 1), min_size=k, max_size=k, unique=True)
    )
    return WeightedGraph.build(n, [(u, v, w) for (u, v), w in edges.items()], terminals)

