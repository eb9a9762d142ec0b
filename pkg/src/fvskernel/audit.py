"""Exhaustive checks over the small corpus, backed by the batch oracle.

Each corpus graph is reduced once (per rule, or per driver) and the oracle
compares minimum solution sizes before and after, which settles every budget
k at once: the decision for (G, k) is ``mfvs(G) <= k``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .cli import parse_instance, serialize_instance
from .engine import MODES, KernelizeOutcome, first_rule_match, kernelize, kernelize_budgets, naive_first_match
from .generators import CorpusBlock, corpus_blocks, gen_planted_planar
from .multigraph import Instance, MultiGraph
from .oracle import N6, PAIR_INDEX6, batch_min_fvs, encode6, min_fvs
from .rules import RuleId, apply_match, rule_order, scratch_coneighbors


def pad6(block: CorpusBlock) -> np.ndarray:
    """Block rows re-indexed into the six-vertex pair order of the batch oracle."""
    cols = [PAIR_INDEX6[p] for p in itertools.combinations(range(block.n), 2)]
    out = np.zeros((len(block.mults), len(PAIR_INDEX6)), dtype=np.uint8)
    out[:, cols] = block.mults
    return out


def corpus_mfvs(block: CorpusBlock) -> np.ndarray:
    return batch_min_fvs(pad6(block))


@dataclass
class RuleAudit:
    rule: RuleId
    fired: int = 0
    checked_pairs: int = 0  # (graph, k) pairs where the detector fired
    failures: list[tuple[str, int]] = field(default_factory=list)


def _decisions_agree(before: int, after: int, drop: int, ks: Sequence[int]) -> list[int]:
    return [k for k in ks if (before <= k) != (after <= k - drop)]


def _describe(g: MultiGraph) -> str:
    return " ".join(f"{u}-{v}x{m}" for u, v, m in g.edge_list())


def audit_rules(
    max_n: int = 6,
    max_mult: int = 3,
    ks: Sequence[int] = range(0, 7),
    rules: Iterable[RuleId] | None = None,
    ell: int = 5,
    blocks: Sequence[CorpusBlock] | None = None,
    isolated: bool = False,
) -> dict[RuleId, RuleAudit]:
    """Apply one rule per corpus graph and compare the decisions for every k.

    By default the rule is the one the engine would apply: the highest
    priority applicable rule.  With ``isolated`` every rule's detector fires
    on its own, ignoring the earlier rules.  A budget increase (negative drop)
    is a failure as well."""
    if max_n > N6:
        raise ValueError("the batch oracle handles at most six vertices")
    rules = list(rule_order(ell) if rules is None else rules)
    report = {r: RuleAudit(r) for r in rules}
    for block in blocks if blocks is not None else corpus_blocks(max_n, max_mult):
        before = corpus_mfvs(block)
        pending: list[tuple[RuleId, int, int, MultiGraph]] = []
        for row in range(len(block.mults)):
            g = block.graph(row)
            cn = scratch_coneighbors(g)
            if isolated:
                found = [first_rule_match(g, rule, ell, cn) for rule in rules]
            else:
                found = [naive_first_match(g, ell, cn)]
            for m in found:
                if m is None or m.rule not in report:
                    continue
                h = g.copy()
                drop = apply_match(h, m)
                pending.append((m.rule, row, drop, h))
        _settle(block, before, pending, ks, report)
    return report


def _settle(block, before, pending, ks, report) -> None:
    if not pending:
        return
    after = batch_min_fvs(*_encode_all([h for _, _, _, h in pending]))
    for (rule, row, drop, _), a in zip(pending, after):
        rep = report[rule]
        rep.fired += 1
        rep.checked_pairs += len(ks)
        if drop < 0:
            rep.failures.append((_describe(block.graph(row)), -1))
            continue
        for k in _decisions_agree(int(before[row]), int(a), drop, ks):
            rep.failures.append((_describe(block.graph(row)), k))


def audit_loop_rule(max_n: int = 5, max_mult: int = 3, ks: Sequence[int] = range(0, 7)) -> RuleAudit:
    """The loopless corpus never triggers the Loop rule; this adds every
    non-empty loop set to each corpus graph on at most ``max_n`` vertices."""
    report = {RuleId.Loop: RuleAudit(RuleId.Loop)}
    for block in corpus_blocks(max_n, max_mult):
        pending = []
        graphs = []
        for row in range(len(block.mults)):
            for mask in range(1, 1 << block.n):
                g = block.graph(row)
                for v in range(block.n):
                    if (mask >> v) & 1:
                        g.add_edge(v, v)
                m = naive_first_match(g, 5)
                h = g.copy()
                drop = apply_match(h, m)
                pending.append((m.rule, len(graphs), drop, h))
                graphs.append(g)
        before = batch_min_fvs(*_encode_all(graphs))
        _settle(_GraphList(graphs), before, pending, ks, report)
    return report[RuleId.Loop]


class _GraphList:
    """Adapter giving ``_settle`` the ``graph(row)`` access of a block."""

    def __init__(self, graphs: Sequence[MultiGraph]) -> None:
        self._graphs = graphs

    def graph(self, row: int) -> MultiGraph:
        return self._graphs[row]


def _encode_all(graphs: Sequence[MultiGraph]) -> tuple[np.ndarray, np.ndarray]:
    codes = np.zeros((len(graphs), len(PAIR_INDEX6)), dtype=np.uint8)
    loops = np.zeros(len(graphs), dtype=np.int64)
    for i, h in enumerate(graphs):
        codes[i], loops[i] = encode6(h)
    return codes, loops


# -- end-to-end ---------------------------------------------------------------------


@dataclass
class EndToEndAudit:
    """Counts over (instance, k) pairs; each failure list holds descriptions."""

    graphs: int = 0
    pairs: int = 0
    no_outcomes: int = 0
    open_kernels: int = 0
    oracle_mismatches: list[str] = field(default_factory=list)
    parity_mismatches: list[str] = field(default_factory=list)
    idempotence_failures: list[str] = field(default_factory=list)
    roundtrip_failures: list[str] = field(default_factory=list)

    def merge(self, other: "EndToEndAudit") -> None:
        for f in ("graphs", "pairs", "no_outcomes", "open_kernels"):
            setattr(self, f, getattr(self, f) + getattr(other, f))
        for f in ("oracle_mismatches", "parity_mismatches", "idempotence_failures", "roundtrip_failures"):
            getattr(self, f).extend(getattr(other, f))


def _kernel_graph(outs: Sequence[KernelizeOutcome]) -> MultiGraph | None:
    return next((o.instance.graph for o in outs if not o.is_no), None)


def _idempotent(outs: Sequence[KernelizeOutcome], mode: str, ell: int) -> bool:
    kg = _kernel_graph(outs)
    if kg is None:
        return True
    kept = [o for o in outs if not o.is_no]
    again = kernelize_budgets(kg, [o.instance.k for o in kept], mode, ell)
    return all(
        not b.is_no and serialize_instance(b.instance) == serialize_instance(a.instance)
        for a, b in zip(kept, again)
    )


def roundtrip_ok(inst: Instance) -> bool:
    text = serialize_instance(inst)
    back = parse_instance(text)
    return back.k == inst.k and back.graph.edge_list() == _relabelled(inst.graph) and serialize_instance(back) == text


def _relabelled(g: MultiGraph) -> list[tuple[int, int, int]]:
    idx = {v: i for i, v in enumerate(g.vertices())}
    return sorted(tuple(sorted((idx[u], idx[v]))) + (m,) for u, v, m in g.edges())


def audit_corpus_end_to_end(
    max_n: int = 6,
    max_mult: int = 3,
    ks: Sequence[int] = range(0, 7),
    modes: Sequence[str] = MODES,
    ell: int = 5,
    blocks: Sequence[CorpusBlock] | None = None,
    chunk: int = 20000,
) -> EndToEndAudit:
    """Kernelize every corpus graph for every k in both drivers, resolve open
    kernels with the batch oracle and compare with the oracle on the input.
    Also checks driver parity, idempotence and the serialisation round trip."""
    rep = EndToEndAudit()
    for block in blocks if blocks is not None else corpus_blocks(max_n, max_mult):
        truth = corpus_mfvs(block)
        for lo in range(0, len(block.mults), chunk):
            rows = range(lo, min(lo + chunk, len(block.mults)))
            results: list[dict[str, list[KernelizeOutcome]]] = []
            kernels: list[MultiGraph] = []
            for row in rows:
                g = block.graph(row)
                rep.graphs += 1
                if not roundtrip_ok(Instance(g, 0)):
                    rep.roundtrip_failures.append(_describe(g))
                per_mode = {}
                for mode in modes:
                    outs = kernelize_budgets(g, ks, mode, ell)
                    if not _idempotent(outs, mode, ell):
                        rep.idempotence_failures.append(f"{mode} {_describe(g)}")
                    per_mode[mode] = outs
                    kg = _kernel_graph(outs)
                    kernels.append(kg if kg is not None else MultiGraph())
                results.append(per_mode)
            kernel_mfvs = iter(_mfvs_many(kernels))
            for row, per_mode in zip(rows, results):
                decided = {}
                for mode in modes:
                    km = next(kernel_mfvs)
                    decided[mode] = [(o.status, not o.is_no and km <= o.instance.k) for o in per_mode[mode]]
                _compare(rep, block.graph, row, int(truth[row]), ks, modes, per_mode, decided)
    return rep


def _mfvs_many(graphs: Sequence[MultiGraph]) -> list[int]:
    small = [i for i, h in enumerate(graphs) if h.num_vertices() <= N6]
    out = [0] * len(graphs)
    if small:
        sizes = batch_min_fvs(*_encode_all([graphs[i] for i in small]))
        for i, s in zip(small, sizes):
            out[i] = int(s)
    for i, h in enumerate(graphs):
        if h.num_vertices() > N6:
            out[i] = min_fvs(h).size
    return out


def _compare(rep, graph_of, row, truth, ks, modes, per_mode, decided) -> None:
    for j, k in enumerate(ks):
        rep.pairs += 1
        want = truth <= k
        first = modes[0]
        status, got = decided[first][j]
        rep.no_outcomes += status == "no"
        rep.open_kernels += status == "kernel"
        for mode in modes:
            if decided[mode][j][1] != want:
                rep.oracle_mismatches.append(f"{mode} k={k} {_describe(graph_of(row))}")
            # classification is the resolved decision; the drivers may stop
            # at different kernels of the same instance
            if decided[mode][j][1] != decided[first][j][1]:
                rep.parity_mismatches.append(f"k={k} {_describe(graph_of(row))}")


def planted_cases(count: int = 1000, max_vertices: int = 18, seed: int = 0) -> list[tuple[int, float, int]]:
    """Deterministic (k, size_factor, seed) triples whose instances have at most
    ``max_vertices`` vertices."""
    rng = np.random.default_rng(seed)
    cases = []
    for i in range(count):
        k = 2 + i % 5
        hi = (max_vertices - k) / k
        cases.append((k, float(rng.uniform(1.0, hi)), seed * 100003 + i))
    return cases


def audit_planted_end_to_end(
    cases: Sequence[tuple[int, float, int]],
    modes: Sequence[str] = MODES,
    ell: int = 5,
    max_n: int = 20,
) -> EndToEndAudit:
    """Like the corpus audit, for planted instances at their own budget and
    one below it, resolved with the exact oracle."""
    rep = EndToEndAudit()
    for k0, factor, seed in cases:
        inst = gen_planted_planar(k0, factor, seed)
        g = inst.graph
        rep.graphs += 1
        if not roundtrip_ok(inst):
            rep.roundtrip_failures.append(f"planted {k0} {factor} {seed}")
        ks = [k0 - 1, k0]
        truth = min_fvs(g, max_n=max_n).size
        per_mode, decided = {}, {}
        for mode in modes:
            outs = [kernelize(Instance(g, k), mode=mode, ell=ell) for k in ks]
            if not _idempotent(outs, mode, ell):
                rep.idempotence_failures.append(f"{mode} planted {k0} {factor} {seed}")
            kg = _kernel_graph(outs)
            km = 0 if kg is None else min_fvs(kg, max_n=max_n).size
            per_mode[mode] = outs
            decided[mode] = [(o.status, not o.is_no and km <= o.instance.k) for o in outs]
        _compare(rep, lambda _row: g, 0, truth, ks, modes, per_mode, decided)
    return rep


# -- configuration-seeded instances ------------------------------------------

# name -> (vertices, fixed edges, optional edges, open vertices).  Open
# vertices may receive random extra edges; the rest keep exactly the listed
# neighbourhood so the configuration survives the randomisation.
SEEDS: dict[str, tuple[tuple[str, ...], tuple[tuple[str, str], ...], tuple[tuple[str, str], ...], tuple[str, ...]]] = {
    "digon121": (
        ("v1", "v2", "v3", "u1", "u2", "w1", "w2"),
        (("v1", "v2"), ("v1", "w1"), ("v1", "w2"), ("v2", "w1"), ("v2", "v3"), ("u1", "w1"), ("u1", "w2"), ("u1", "u2")),
        (),
        ("v3", "u2", "w1", "w2"),
    ),
    "digon31": (
        ("u1", "u2", "u3", "u4", "w1", "w2"),
        (("u1", "u2"), ("u1", "w1"), ("u1", "w2"), ("u2", "w1"), ("u2", "u3"), ("u3", "w2"), ("u3", "u4")),
        (),
        ("u4", "w1", "w2"),
    ),
    "meta_a": (
        ("v1", "v2", "u", "w1", "w2", "t1", "t2"),
        (("v1", "v2"), ("v1", "w1"), ("v1", "w2"), ("u", "w1"), ("u", "w2")),
        (("v2", "w1"), ("v2", "w2"), ("v2", "t1"), ("u", "t2")),
        ("w1", "w2", "t1", "t2"),
    ),
    "meta_b": (
        ("u1", "u2", "u3", "w1", "w2", "t"),
        (("u1", "u2"), ("u1", "w1"), ("u1", "w2"), ("u2", "u3")),
        (("u2", "w1"), ("u2", "w2"), ("u3", "w1"), ("u3", "w2"), ("u3", "t")),
        ("w1", "w2", "t"),
    ),
    "path5": (
        ("u0", "u", "x1", "x2", "x3", "v", "v0", "w1", "w2"),
        (("u0", "u"), ("u", "x1"), ("x1", "x2"), ("x2", "x3"), ("x3", "v"), ("v", "v0")),
        tuple((x, w) for x in ("u", "x1", "x2", "x3", "v") for w in ("w1", "w2")),
        ("u0", "v0", "w1", "w2"),
    ),
    "path6": (
        ("u0", "p1", "p2", "p3", "p4", "p5", "p6", "v0", "w1", "w2"),
        (("u0", "p1"), ("p1", "p2"), ("p2", "p3"), ("p3", "p4"), ("p4", "p5"), ("p5", "p6"), ("p6", "v0")),
        tuple((f"p{i}", w) for i in range(1, 7) for w in ("w1", "w2")),
        ("u0", "v0", "w1", "w2"),
    ),
}


def seeded_instance(name: str, rng: np.random.Generator, max_extra: int = 3) -> MultiGraph | None:
    """Random planar multigraph containing the named configuration, or None
    when the draw is not planar or has a vertex of degree below three."""
    import networkx as nx

    verts, fixed, optional, open_ = SEEDS[name]
    extra = [f"e{i}" for i in range(int(rng.integers(0, max_extra + 1)))]
    names = list(verts) + extra
    idx = {v: i for i, v in enumerate(names)}
    edges = [(idx[a], idx[b]) for a, b in fixed]
    edges += [(idx[a], idx[b]) for a, b in optional if rng.random() < 0.5]
    pool = [idx[v] for v in open_] + [idx[v] for v in extra]
    for a, b in itertools.combinations(pool, 2):
        edges += [(a, b)] * int(rng.choice((0, 1, 1, 2)))
    g = MultiGraph.from_edges(len(names), edges)
    if any(g.degree(v) < 3 for v in g.vertices()):
        return None
    simple = nx.Graph()
    simple.add_nodes_from(range(len(names)))
    simple.add_edges_from(edges)
    if not nx.check_planarity(simple)[0]:
        return None
    return g


def audit_reduction_steps(graphs: Iterable[MultiGraph], ell: int = 5, max_n: int = 20) -> dict[RuleId, RuleAudit]:
    """Reduce each graph with the naive driver, checking every step with the
    exact oracle: a step is sound iff mfvs drops by exactly the budget paid."""
    report = {r: RuleAudit(r) for r in rule_order(ell)}
    for g in graphs:
        g = g.copy()
        cur = min_fvs(g, max_n=max_n).size
        while True:
            m = naive_first_match(g, ell)
            if m is None:
                break
            h = g.copy()
            drop = apply_match(h, m)
            after = min_fvs(h, max_n=max_n).size
            rep = report[m.rule]
            rep.fired += 1
            if drop < 0 or cur != after + drop:
                rep.failures.append((_describe(g), cur))
            g, cur = h, after
    return report
