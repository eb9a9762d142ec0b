"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from fvskernel.multigraph import MultiGraph


@st.composite
def multigraphs(draw, min_n=0, max_n=8, max_mult=3, loops=True):
    """Small multigraphs on handles 0..n-1 with bounded multiplicities."""
    n = draw(st.integers(min_n, max_n))
    g = MultiGraph.from_edges(n, ())
    if n == 0:
        return g
    pairs = [(u, v) for u in range(n) for v in range(u + (0 if loops else 1), n)]
    for u, v in draw(st.lists(st.sampled_from(pairs), max_size=3 * n)):
        if g.multiplicity(u, v) < max_mult:
            g.add_edge(u, v)
    return g
