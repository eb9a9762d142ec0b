import itertools

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from fvskernel.generators import (
    corpus_blocks,
    corpus_size,
    gen_corpus_small,
    gen_grid,
    gen_planted_planar,
    gen_tight,
    graph_from_code,
    grid_for_size,
    planted_solution,
)
from fvskernel.multigraph import MultiGraph
from fvskernel.oracle import is_fvs, min_fvs


def simple(g: MultiGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.vertices())
    h.add_edges_from((u, v) for u, v, _ in g.edges() if u != v)
    return h


def brute_corpus_counts(max_n, max_mult):
    """Independent count of connected multigraphs up to isomorphism: canonical
    form is the least multiplicity vector over all vertex permutations."""
    out = []
    for n in range(1, max_n + 1):
        pairs = list(itertools.combinations(range(n), 2))
        index = {p: i for i, p in enumerate(pairs)}
        perms = [[index[tuple(sorted((p[a], p[b])))] for a, b in pairs] for p in itertools.permutations(range(n))]
        seen = set()
        for code in itertools.product(range(max_mult + 1), repeat=len(pairs)):
            h = nx.Graph()
            h.add_nodes_from(range(n))
            h.add_edges_from(p for p, m in zip(pairs, code) if m)
            if not nx.is_connected(h):
                continue
            seen.add(min(tuple(code[i] for i in perm) for perm in perms))
        out.append(len(seen))
    return out


def test_corpus_counts_match_brute_force():
    assert [len(b.mults) for b in corpus_blocks(4, 3)] == brute_corpus_counts(4, 3)


@pytest.mark.slow
def test_corpus_counts_match_brute_force_five_vertices():
    assert [len(b.mults) for b in corpus_blocks(5, 2)] == brute_corpus_counts(5, 2)


def test_corpus_counts_frozen():
    assert [len(b.mults) for b in corpus_blocks(4, 3)] == [1, 3, 16, 250]
    assert [len(b.mults) for b in corpus_blocks(4, 2)] == [1, 2, 7, 53]
    assert [len(b.mults) for b in corpus_blocks(5, 2)] == [1, 2, 7, 53, 712]


@pytest.mark.slow
def test_full_corpus_size():
    assert [len(b.mults) for b in corpus_blocks(6, 3)] == [1, 3, 16, 250, 10364, 1590368]
    assert corpus_size(6, 3) == 1601002


def test_corpus_graphs_connected_and_bounded():
    for b in corpus_blocks(5, 3):
        assert b.mults.max(initial=0) <= 3
        for r in range(len(b.mults)):
            g = b.graph(r)
            assert nx.is_connected(simple(g))


def test_corpus_rejects_bad_arguments():
    with pytest.raises(ValueError):
        corpus_blocks(8, 1)
    with pytest.raises(ValueError):
        corpus_blocks(3, 0)


def test_gen_corpus_small_pairs_every_k():
    insts = list(gen_corpus_small(3, 2, range(2)))
    assert len(insts) == 2 * corpus_size(3, 2)
    assert {i.k for i in insts} == {0, 1}


def test_graph_from_code():
    g = graph_from_code(3, [2, 0, 1])
    assert g.edge_list() == [(0, 1, 2), (1, 2, 1)]


# -- tight family ------------------------------------------------------------------------


@pytest.mark.parametrize("m,n", [(4, 24), (5, 37), (13, 141), (26, 310), (52, 648)])
def test_tight_sizes(m, n):
    inst = gen_tight(m)
    assert inst.k == m and inst.graph.num_vertices() == n
    assert nx.check_planarity(simple(inst.graph))[0]
    assert is_fvs(inst.graph, range(m))


def test_tight_ratio_at_52():
    assert gen_tight(52).graph.num_vertices() / 52 >= 12.0


def test_tight_optimum_at_four():
    assert min_fvs(gen_tight(4).graph, max_n=24).size == 4


def test_tight_needs_four():
    with pytest.raises(ValueError):
        gen_tight(3)


# -- planted instances --------------------------------------------------------------------


@given(st.integers(2, 8), st.floats(1.0, 6.0), st.integers(0, 10**6))
def test_planted_is_planar_with_small_solution(k, factor, seed):
    inst = gen_planted_planar(k, factor, seed)
    g = inst.graph
    sol = planted_solution(k, factor, seed)
    assert inst.k == k and len(sol) == k
    assert is_fvs(g, sol)
    assert g.num_vertices() == max(k, round(factor * k)) + k
    assert nx.check_planarity(simple(g))[0]
    assert max((m for _, _, m in g.edges()), default=0) <= 2 and not g.loop_vertices()


def test_planted_is_deterministic():
    a = gen_planted_planar(5, 3.0, 42)
    b = gen_planted_planar(5, 3.0, 42)
    c = gen_planted_planar(5, 3.0, 43)
    assert a.graph.edge_list() == b.graph.edge_list()
    assert a.graph.edge_list() != c.graph.edge_list()


def test_planted_needs_two():
    with pytest.raises(ValueError):
        gen_planted_planar(1, 3.0, 0)


# -- grids -------------------------------------------------------------------------------


def test_grid_counts():
    inst = gen_grid(3, 4)
    assert inst.graph.num_vertices() == 12 and inst.graph.num_edges() == 17
    assert inst.k == 12 and gen_grid(2, 2, 1).k == 1
    with pytest.raises(ValueError):
        gen_grid(0, 3)


@pytest.mark.parametrize("n", [1, 50, 1000, 50000])
def test_grid_for_size_is_close(n):
    g = grid_for_size(n).graph
    assert n <= g.num_vertices() <= n + 2 * int(n**0.5) + 1
