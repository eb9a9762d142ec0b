import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fvskernel.audit import pad6
from fvskernel.engine import first_rule_match
from fvskernel.generators import corpus_blocks, gen_corpus_small
from fvskernel.multigraph import Instance, MultiGraph
from fvskernel.oracle import (
    OracleBudgetError,
    batch_min_fvs,
    check_rule_soundness,
    decision,
    encode6,
    is_fvs,
    min_fvs,
)
from fvskernel.rules import RuleId, apply_match, iter_deg2, iter_deg3double, iter_gamma
from strategies import multigraphs
from test_multigraph import dfs_has_cycle


def brute_min_fvs(g: MultiGraph) -> int:
    """Independent oracle: plain subset enumeration with a DFS cycle test."""
    vs = list(g.vertices())
    for size in range(len(vs) + 1):
        for s in itertools.combinations(vs, size):
            if not dfs_has_cycle(g.induced_subgraph(v for v in vs if v not in s)):
                return size
    raise AssertionError("unreachable")


def test_forest_needs_nothing():
    g = MultiGraph.from_edges(4, [(0, 1), (1, 2), (1, 3)])
    assert min_fvs(g).vertices == frozenset()


def test_triangle():
    assert min_fvs(MultiGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])).size == 1


def test_k4_needs_two():
    k4 = MultiGraph.from_edges(4, itertools.combinations(range(4), 2))
    assert brute_min_fvs(k4) == 2
    assert min_fvs(k4).size == 2


def test_decision_examples():
    tri = MultiGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    assert not decision(tri, 0)
    assert decision(tri, 1)
    digons = MultiGraph.from_edges(4, [(0, 1), (0, 1), (2, 3), (2, 3)])
    assert brute_min_fvs(digons) == 2
    assert not decision(digons, 1)
    assert not decision(tri, -1)


def test_loops_are_forced():
    g = MultiGraph.from_edges(3, [(0, 0), (1, 2)])
    assert min_fvs(g).vertices == frozenset({0})


def test_witness_is_lexicographically_first():
    # a 4-cycle: every single vertex works, the lowest handle is returned
    g = MultiGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert min_fvs(g).vertices == frozenset({0})


def test_budget_error():
    g = MultiGraph.from_edges(21, ())
    with pytest.raises(OracleBudgetError):
        min_fvs(g)
    assert min_fvs(g, max_n=21).size == 0


@given(multigraphs(max_n=8))
def test_min_fvs_is_valid_and_minimal(g):
    sol = min_fvs(g)
    assert is_fvs(g, sol.vertices)
    assert sol.size == brute_min_fvs(g)


@given(multigraphs(max_n=8), st.integers(0, 8))
def test_decision_monotone(g, k):
    if decision(g, k):
        assert decision(g, k + 1)


def test_batch_matches_exact_on_corpus():
    for block in corpus_blocks(5, 3):
        got = batch_min_fvs(pad6(block))
        want = [min_fvs(block.graph(r)).size for r in range(len(block.mults))]
        assert got.tolist() == want


@given(multigraphs(max_n=6))
def test_batch_matches_exact_with_loops(g):
    mults, loops = encode6(g)
    assert batch_min_fvs(mults[None, :], np.array([loops]))[0] == min_fvs(g).size


def test_rule3_sound_on_small_corpus():
    rep = check_rule_soundness(
        "Deg2",
        gen_corpus_small(5, 3),
        lambda g: first_rule_match(g, RuleId.Deg2),
        apply_match,
    )
    assert rep.fired > 0
    assert rep.ok, rep.failures[:3]


def gamma_configurations():
    """Every Gamma configuration plus up to three extra vertices, multiplicity
    at most two: u sees exactly v, w, x; v sees w and x."""
    for extra in range(4):
        for muv, mvw, mvx, mwx in itertools.product((1, 2), (1, 2), (1, 2), (0, 1, 2)):
            base = [(0, 1)] * muv + [(0, 2), (0, 3)] + [(1, 2)] * mvw + [(1, 3)] * mvx + [(2, 3)] * mwx
            n = 4 + extra
            free = [(a, b) for a, b in itertools.combinations(range(1, n), 2) if b >= 4]
            for bits in itertools.product((0, 1), repeat=len(free)):
                edges = base + [p for p, b in zip(free, bits) if b]
                yield MultiGraph.from_edges(n, edges)


def test_rule7_sound_on_all_small_configurations():
    count = 0
    for g in gamma_configurations():
        m = next(iter_gamma(g, 0), None)
        assert m is not None
        h = g.copy()
        drop = apply_match(h, m)
        before, after = min_fvs(g).size, min_fvs(h).size
        for k in range(0, 8):
            assert (before <= k) == (after <= k - drop), (g.edge_list(), k)
        count += 1
    assert count == 24 * (1 + 2**3 + 2**7 + 2**12)


def test_harness_catches_corrupted_rule4():
    def broken_apply(g, m):
        apply_match(g, m)
        return 0  # Deg3Double must pay one

    def detect(g):
        for v in g.vertices():
            m = next(iter_deg3double(g, v), None)
            if m is not None:
                return m
        return None

    rep = check_rule_soundness("Deg3Double-broken", gen_corpus_small(4, 2), detect, broken_apply)
    assert rep.fired > 0
    assert not rep.ok


def test_deg2_applier_unit():
    g = MultiGraph.from_edges(3, [(0, 1), (1, 2)])
    m = next(iter_deg2(g, 1))
    assert apply_match(g, m) == 0
    assert g.multiplicity(0, 2) == 1 and 1 not in g
