import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fvskernel.audit import SEEDS, seeded_instance
from fvskernel.engine import (
    MODES,
    EngineState,
    NonPlanarInput,
    check_invariants,
    classify_terminal,
    detect_around,
    is_reduced,
    kernelize,
    kernelize_budgets,
)
from fvskernel.generators import corpus_blocks, gen_grid, gen_planted_planar, gen_tight, grid_for_size
from fvskernel.multigraph import Instance, MultiGraph
from fvskernel.oracle import min_fvs
from fvskernel.paths import all_path_configs, path_configs
from fvskernel.rules import RuleId, reject_bound
from strategies import multigraphs


def graph(n, edges):
    return MultiGraph.from_edges(n, edges)


TRIANGLE = [(0, 1), (1, 2), (0, 2)]
K23 = [(x, z) for x in (0, 1) for z in (2, 3, 4)]


def resolved(out):
    """Decision of an outcome, with open kernels settled by the oracle."""
    if out.is_no:
        return False
    return min_fvs(out.instance.graph, max_n=24).size <= out.instance.k


# -- kernelize examples --------------------------------------------------------


@pytest.mark.parametrize("mode", MODES)
def test_triangle_reduces_to_empty(mode):
    out = kernelize(Instance(graph(3, TRIANGLE), 1), mode=mode)
    assert out.status == "kernel"
    assert out.instance.graph.num_vertices() == 0 and out.instance.k == 0
    if mode == "naive":
        assert out.trace.rules() == [RuleId.Deg2, RuleId.Deg2, RuleId.Loop]


@pytest.mark.parametrize("mode", MODES)
def test_triangle_without_budget_is_no(mode):
    assert kernelize(Instance(graph(3, TRIANGLE), 0), mode=mode).is_no


@pytest.mark.parametrize("mode", MODES)
def test_k23_needs_basic_rules_before_rule6(mode):
    # ThreeDeg3 would pay two on a graph whose optimum is one
    out = kernelize(Instance(graph(5, K23), 1), mode=mode)
    assert not out.is_no and resolved(out)
    assert RuleId.ThreeDeg3 not in out.trace.rules()


@st.composite
def unicyclic(draw):
    n = draw(st.integers(2, 12))
    edges = [(draw(st.integers(0, v - 1)), v) for v in range(1, n)]
    a, b = draw(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)))
    edges.append((a, b) if a != b else (a, a))
    return graph(n, edges)


@given(unicyclic(), st.integers(1, 4), st.sampled_from(MODES))
def test_tree_plus_one_cycle_is_yes(g, k, mode):
    out = kernelize(Instance(g, k), mode=mode)
    assert out.status == "kernel" and out.instance.graph.num_vertices() == 0


@pytest.mark.parametrize("m", [4, 13])
@pytest.mark.parametrize("mode", MODES)
def test_tight_example_is_fixed_point(m, mode):
    inst = gen_tight(m)
    out = kernelize(inst, mode=mode)
    assert out.status == "kernel" and len(out.trace) == 0
    assert out.instance == inst


def test_reject_fires_above_bound():
    inst = gen_tight(4)
    out = kernelize(Instance(inst.graph, 3))
    assert out.is_no and out.trace.rules() == [RuleId.Reject]
    assert inst.graph.num_vertices() > reject_bound(5, 3)


def test_negative_budget_rejected_by_api():
    with pytest.raises(ValueError):
        kernelize(Instance(graph(1, []), -1))
    with pytest.raises(ValueError):
        kernelize(Instance(graph(1, []), 1), mode="fast")
    with pytest.raises(ValueError):
        kernelize(Instance(graph(1, []), 1), ell=7)


def test_euler_check():
    k6 = graph(6, itertools.combinations(range(6), 2))
    with pytest.raises(NonPlanarInput):
        kernelize(Instance(k6, 3), check_planarity=True)
    assert kernelize(Instance(k6, 3)).status in ("kernel", "no")


def test_input_not_modified():
    g = graph(5, K23)
    before = g.edge_list()
    kernelize(Instance(g, 1))
    assert g.edge_list() == before


def test_trace_names_gadget_vertices():
    # two digons in a row: the Deg3Double rule fires and leaves original ids
    out = kernelize(Instance(graph(3, TRIANGLE), 1), mode="naive")
    assert out.trace.lines()[0].startswith("Deg2 u=1")
    from fvskernel.engine import ReductionTrace

    assert ReductionTrace(n_input=3).name(4) == "g2"


# -- classify_terminal ----------------------------------------------------------------


def test_classify_terminal_examples():
    assert classify_terminal(Instance(graph(0, []), 0)) == "yes-trivial"
    assert classify_terminal(Instance(graph(0, []), -1)) == "no-trivial"
    assert classify_terminal(Instance(gen_tight(4).graph, 3)) == "no-trivial"
    assert classify_terminal(Instance(gen_tight(4).graph, 4)) == "open"


def test_double_triangle_stays_open_at_k2():
    # reduced, three vertices, optimum two: above 13k-24 = 2 yet a yes-instance
    g = graph(3, [(0, 1), (0, 1), (1, 2), (1, 2), (0, 2), (0, 2)])
    assert is_reduced(g, 5) and min_fvs(g).size == 2
    assert classify_terminal(Instance(g, 2)) == "open"
    out = kernelize(Instance(g, 2))
    assert out.status == "kernel" and resolved(out)


# -- incremental bookkeeping --------------------------------------------------------------


def test_pendant_deletion_enqueues_neighbour():
    # v=0 has four neighbours, 4 is a pendant
    g = graph(6, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (2, 3), (3, 5), (1, 5), (0, 5)])
    st = EngineState(g)
    st.qs.clear()
    st.in_qs.clear()
    g.delete_vertex(4)
    assert 0 in st.in_qs
    st.detach()


def test_third_coneighbour_enters_q3():
    g = graph(5, [(0, 2), (1, 2), (0, 3), (1, 3), (0, 4)])
    st = EngineState(g)
    assert (0, 1) not in st.in_q3
    g.add_edge(1, 4)
    assert (0, 1) in st.in_q3
    st.detach()


def test_edge_between_busy_vertices_enqueues_nothing():
    g = graph(12, [(0, i) for i in range(2, 7)] + [(1, i) for i in range(7, 12)])
    st = EngineState(g)
    st.qs.clear()
    st.in_qs.clear()
    g.add_edge(0, 1)
    assert not st.qs
    st.detach()


def test_detect_around_examples():
    g = graph(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (1, 3)])
    st = EngineState(g)
    st.q3plus.clear()
    st.in_q3.clear()
    assert detect_around(st, g, 0).rule is RuleId.Deg2
    st.detach()

    d = graph(6, [(0, 1), (0, 4), (0, 5), (1, 2), (1, 4), (2, 3), (2, 5), (3, 4), (3, 5)])
    st = EngineState(d)
    m = detect_around(st, d, 0)
    assert m.rule is RuleId.Digon31 and m["u1"] == 0
    st.detach()

    star = graph(6, [(0, i) for i in range(1, 6)])
    st = EngineState(star)
    with pytest.raises(ValueError):
        detect_around(st, star, 0)
    st.detach()


def test_detect_around_needs_empty_q3():
    g = graph(5, K23)
    st = EngineState(g)
    with pytest.raises(RuntimeError):
        detect_around(st, g, 2)
    st.detach()


def debug_inputs():
    rng = np.random.default_rng(3)
    out = []
    for name in sorted(SEEDS):
        got = 0
        while got < 10:
            g = seeded_instance(name, rng)
            if g is not None:
                out.append(Instance(g, int(rng.integers(0, 6))))
                got += 1
    for i in range(40):
        out.append(gen_planted_planar(2 + i % 4, 3.0, i))
    return out


@pytest.mark.parametrize("ell", [5, 6])
def test_invariants_hold_in_debug_mode(ell):
    inputs = debug_inputs()
    assert len(inputs) == 100
    for inst in inputs:
        kernelize(inst, mode="incremental", ell=ell, debug=True)


def test_invariant_checker_detects_corruption():
    g = graph(6, [(0, 1), (0, 4), (0, 5), (1, 2), (1, 4), (2, 3), (2, 5), (3, 4), (3, 5)])
    st = EngineState(g)
    assert check_invariants(st) == []
    st.d1[(0, 1)] = 2
    st.in_qs.clear()
    bad = check_invariants(st)
    assert any("D1" in b for b in bad) and any("Qs" in b for b in bad)
    st.detach()


def test_work_accounting_is_linear():
    for n in (100, 1000, 10000):
        inst = grid_for_size(n)
        out = kernelize(inst)
        g = inst.graph
        work = g.num_vertices() + g.num_edges() + len(out.trace)
        assert out.stats["detector_calls"] <= 10 * work
        assert out.stats["qs_insertions"] <= 10 * work


# -- drivers and budgets ------------------------------------------------------------------


@given(multigraphs(max_n=7, max_mult=3), st.integers(0, 5))
def test_modes_agree_and_outputs_are_reduced(g, k):
    outs = [kernelize(Instance(g, k), mode=m) for m in MODES]
    assert len({resolved(o) for o in outs}) == 1
    assert resolved(outs[0]) == (min_fvs(g).size <= k)
    for o in outs:
        if not o.is_no:
            assert is_reduced(o.instance.graph, 5)


@pytest.mark.parametrize("mode", MODES)
def test_budgets_match_direct_runs(mode):
    graphs = [b.graph(r) for b in corpus_blocks(4, 3) for r in range(len(b.mults))]
    graphs += [gen_planted_planar(3, 3.0, s).graph for s in range(10)]
    ks = list(range(7))
    for g in graphs:
        outs = kernelize_budgets(g, ks, mode=mode)
        for k, o in zip(ks, outs):
            d = kernelize(Instance(g, k), mode=mode)
            assert (o.status, o.instance) == (d.status, d.instance)
            assert o.trace.rules() == d.trace.rules()


@pytest.mark.parametrize("mode", MODES)
def test_planted_never_rejected(mode):
    for seed in range(30):
        inst = gen_planted_planar(2 + seed % 5, 4.0, seed)
        assert not kernelize(inst, mode=mode).is_no


@pytest.mark.parametrize("ell", [5, 6])
def test_idempotent(ell):
    for seed in range(20):
        out = kernelize(gen_planted_planar(4, 3.0, seed), ell=ell)
        if out.is_no:
            continue
        again = kernelize(out.instance, ell=ell)
        assert again.status == "kernel" and again.instance == out.instance and len(again.trace) == 0


@pytest.mark.parametrize("mode", MODES)
def test_grid_kernel_is_reduced(mode):
    out = kernelize(gen_grid(10, 10), mode=mode)
    assert out.status == "kernel" and is_reduced(out.instance.graph, 5)


# -- path search -----------------------------------------------------------------------


def test_path_configs_are_induced_and_closed():
    rng = np.random.default_rng(5)
    seen = 0
    for _ in range(2000):
        g = seeded_instance("path5", rng)
        if g is None:
            continue
        for pc in all_path_configs(g, 5):
            seen += 1
            seq = [pc.end_a, *pc.inner, pc.end_b]
            assert len(set(seq) | set(pc.w)) == 9
            for i, j in itertools.combinations(range(7), 2):
                if (i, j) == (0, 6):
                    continue  # the endpoints may be adjacent
                assert g.multiplicity(seq[i], seq[j]) == (1 if j == i + 1 else 0)
            outside = {t for x in pc.inner for t in g.neighbors(x)} - set(pc.inner)
            assert outside == {pc.end_a, pc.end_b, *pc.w}
            assert pc.inner[0] < pc.inner[-1]
    assert seen > 0


def test_path_configs_need_room():
    g = graph(8, [(i, i + 1) for i in range(7)])
    assert list(path_configs(g, 3, 5)) == []
