"""Kernelization drivers.

``naive`` rescans the whole graph for the highest-priority applicable rule
after every change.  ``incremental`` follows the worklist scheme: adjacent
pairs (D1), co-neighbour sets S_{x,y} (D2), a queue of pairs with three
co-neighbours (Q3+) and a queue of low-degree vertices (Qs).  Loops and
triple edges are normalised as soon as they appear in both drivers' outputs.

ThreeDeg3 is only sound once Loop..Triple no longer apply anywhere (K_{2,3} alone
is a counterexample), so the incremental driver drains a third queue (Qb) of
vertices with at most two neighbours before it serves Q3+.
"""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .multigraph import Instance, MultiGraph, VertexId
from .paths import (
    PathConfig,
    all_path_configs,
    indpath6_match,
    path_configs,
    select_fivepath_rule,
)
from .rules import (
    FIVE_PATH_RULES,
    UNBOUNDED_K,
    CoNeighbors,
    RuleId,
    RuleMatch,
    apply_match,
    coneighbor_pairs,
    first_3deg3,
    iter_deg1,
    iter_deg2,
    iter_deg3double,
    iter_digon121,
    iter_digon31,
    iter_gamma,
    iter_loop,
    iter_meta_a,
    iter_meta_b,
    iter_triple,
    reject_bound,
    rule_order,
    scratch_coneighbors,
)

MODES = ("naive", "incremental")

ITERATORS = {
    RuleId.Loop: iter_loop,
    RuleId.Deg1: iter_deg1,
    RuleId.Deg2: iter_deg2,
    RuleId.Deg3Double: iter_deg3double,
    RuleId.Triple: iter_triple,
    RuleId.Gamma: iter_gamma,
    RuleId.Digon121: iter_digon121,
    RuleId.Digon31: iter_digon31,
    RuleId.MetaCaseA: iter_meta_a,
    RuleId.MetaCaseB: iter_meta_b,
}

# rules found from a single low-degree vertex, in priority order
LOCAL_RULES = (
    RuleId.Loop,
    RuleId.Deg1,
    RuleId.Deg2,
    RuleId.Deg3Double,
    RuleId.Gamma,
    RuleId.Digon121,
    RuleId.Digon31,
    RuleId.MetaCaseA,
    RuleId.MetaCaseB,
)


class NonPlanarInput(ValueError):
    """Input fails the Euler edge bound, so it cannot be planar."""


@dataclass(frozen=True)
class TraceEntry:
    rule: RuleId
    binding: tuple[tuple[str, VertexId], ...]
    k_after: int


@dataclass
class ReductionTrace:
    entries: list[TraceEntry] = field(default_factory=list)
    n_input: int = 0

    def add(self, m: RuleMatch, k_after: int) -> None:
        self.entries.append(TraceEntry(m.rule, m.binding, k_after))

    def name(self, v: VertexId) -> str:
        return str(v + 1) if v < self.n_input else f"g{v - self.n_input + 1}"

    def lines(self) -> list[str]:
        out = []
        for e in self.entries:
            parts = [e.rule.name] + [f"{k}={self.name(v)}" for k, v in e.binding]
            out.append(" ".join(parts))
        return out

    def rules(self) -> list[RuleId]:
        return [e.rule for e in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass
class KernelizeOutcome:
    status: str  # "kernel" or "no"
    instance: Instance  # the kernel, or the canonical no-instance
    trace: ReductionTrace
    mode: str
    ell: int
    stats: Counter = field(default_factory=Counter)

    @property
    def is_no(self) -> bool:
        return self.status == "no"


# -- terminal classification --------------------------------------------------


def classify_terminal(inst: Instance, ell: int = 5) -> str:
    """``yes-trivial``, ``no-trivial`` or ``open`` for a reduced instance."""
    if inst.k < 0:
        return "no-trivial"
    n = inst.graph.num_vertices()
    if n == 0:
        return "yes-trivial"
    if inst.k not in UNBOUNDED_K and n > reject_bound(ell, inst.k):
        return "no-trivial"
    return "open"


def euler_violation(g: MultiGraph) -> bool:
    """True if the simple underlying graph has more than 3|V| - 6 edges."""
    n = g.num_vertices()
    if n < 3:
        return False
    simple = sum(1 for u, v, _ in g.edges() if u != v)
    return simple > 3 * n - 6


# -- detection shared by both drivers ----------------------------------------


def iter_rule(g: MultiGraph, rule: RuleId, anchor: VertexId, cn: CoNeighbors) -> Iterator[RuleMatch]:
    return ITERATORS[rule](g, anchor, cn)


def naive_first_match(g: MultiGraph, ell: int, cn: CoNeighbors | None = None) -> RuleMatch | None:
    """Highest-priority applicable rule, scanning anchors in ascending handle order."""
    cn = cn or scratch_coneighbors(g)
    verts = list(g.vertices())
    for rule in rule_order(ell):
        if rule is RuleId.ThreeDeg3:
            m = first_3deg3(g)
            if m is not None:
                return m
        elif rule is RuleId.IndPath6:
            for v in verts:
                pc = next(path_configs(g, v, 6), None)
                if pc is not None:
                    return indpath6_match(g, pc)
        elif rule in FIVE_PATH_RULES:
            if rule is not RuleId.FiveDelW1:
                continue
            for v in verts:
                pc = next(path_configs(g, v, 5), None)
                if pc is not None:
                    return select_fivepath_rule(g, pc)
        else:
            it = ITERATORS[rule]
            for v in verts:
                m = next(it(g, v, cn), None)
                if m is not None:
                    return m
    return None


def first_rule_match(g: MultiGraph, rule: RuleId, ell: int = 5, cn: CoNeighbors | None = None) -> RuleMatch | None:
    """First match of one rule in ascending anchor order, ignoring priority.
    A five-path rule matches where the selector picks that rule."""
    cn = cn or scratch_coneighbors(g)
    if rule is RuleId.ThreeDeg3:
        return first_3deg3(g)
    if rule is RuleId.IndPath6:
        pc = next(all_path_configs(g, 6), None)
        return None if pc is None else indpath6_match(g, pc)
    if rule in FIVE_PATH_RULES:
        for pc in all_path_configs(g, 5):
            try:
                m = select_fivepath_rule(g, pc)
            except RuntimeError:
                continue
            if m.rule is rule:
                return m
        return None
    it = ITERATORS[rule]
    for v in list(g.vertices()):
        m = next(it(g, v, cn), None)
        if m is not None:
            return m
    return None


def all_configurations(g: MultiGraph, ell: int, cn: CoNeighbors | None = None) -> Iterator[RuleMatch]:
    """Every configuration of every rule (ThreeDeg3 and Triple excluded), used by
    the invariant checker.  Path configurations are reported with the rule
    the selector would pick."""
    cn = cn or scratch_coneighbors(g)
    for rule in LOCAL_RULES:
        for v in list(g.vertices()):
            yield from ITERATORS[rule](g, v, cn)
    length = 5 if ell == 5 else 6
    for pc in all_path_configs(g, length):
        yield _path_rule_match(g, pc, ell)


def _path_rule_match(g: MultiGraph, pc: PathConfig, ell: int) -> RuleMatch:
    if ell == 6:
        return indpath6_match(g, pc)
    try:
        return select_fivepath_rule(g, pc)
    except RuntimeError:
        # report the configuration itself; the selector runs only once the
        # local guard has ruled out earlier rules
        u, x1, x2, x3, v = pc.inner
        return RuleMatch(
            RuleId.FiveDelW1,
            (("u0", pc.end_a), ("u", u), ("x1", x1), ("x2", x2), ("x3", x3),
             ("v", v), ("v0", pc.end_b), ("w1", pc.w[0]), ("w2", pc.w[1])),
        )


def is_reduced(g: MultiGraph, ell: int) -> bool:
    """True if no rule detector fires anywhere (loops and triples included)."""
    return naive_first_match(g, ell) is None


# -- naive driver ---------------------------------------------------------------


def _run_naive(g: MultiGraph, k: int, ell: int, trace: ReductionTrace, stats: Counter) -> int:
    while k >= 0:
        m = naive_first_match(g, ell)
        stats["scans"] += 1
        if m is None:
            break
        k -= apply_match(g, m)
        trace.add(m, k)
        stats[m.rule.name] += 1
    return k


# -- incremental driver -------------------------------------------------------


class EngineState:
    """Indexes kept in sync with the graph through its mutation listener."""

    def __init__(self, g: MultiGraph, stats: Counter | None = None) -> None:
        self.g = g
        self.d1: dict[tuple[VertexId, VertexId], int] = {}
        self.d2: dict[tuple[VertexId, VertexId], set[VertexId]] = {}
        self.member: dict[VertexId, list[tuple[VertexId, VertexId]]] = {}
        self.q3plus: deque[tuple[VertexId, VertexId]] = deque()
        self.in_q3: set[tuple[VertexId, VertexId]] = set()
        self.qs: deque[VertexId] = deque()
        self.in_qs: set[VertexId] = set()
        # vertices with at most two neighbours whose edges changed: the only
        # places where Deg1, Deg2 or Deg3Double can start to apply
        self.qb: deque[VertexId] = deque()
        self.in_qb: set[VertexId] = set()
        self.pending_loops: set[VertexId] = set()
        self.pending_triples: set[tuple[VertexId, VertexId]] = set()
        self.stats: Counter = Counter() if stats is None else stats
        for u, v, m in g.edges():
            if u == v:
                self.pending_loops.add(u)
            else:
                self.d1[(u, v)] = m
                if m > 2:
                    self.pending_triples.add((u, v))
        for v in g.vertices():
            self.refresh(v)
        g.listener = self.on_event

    def detach(self) -> None:
        self.g.listener = None

    def coneighbors(self, x: VertexId, y: VertexId) -> list[VertexId]:
        if x > y:
            x, y = y, x
        s = self.d2.get((x, y))
        return sorted(s) if s else []

    def enqueue(self, v: VertexId) -> None:
        if v not in self.in_qs:
            self.in_qs.add(v)
            self.qs.append(v)
            self.stats["qs_insertions"] += 1

    def refresh(self, t: VertexId) -> None:
        """Recompute the D2 memberships of t and enqueue it if it is low-degree."""
        for p in self.member.pop(t, ()):
            s = self.d2[p]
            s.discard(t)
            if not s:
                del self.d2[p]
        g = self.g
        if t not in g:
            return
        nn = g.num_neighbors(t)
        if nn <= 4:
            self.enqueue(t)
            if nn <= 2 and t not in self.in_qb:
                self.in_qb.add(t)
                self.qb.append(t)
        pairs = coneighbor_pairs(g, t)
        if pairs:
            self.member[t] = pairs
            for p in pairs:
                s = self.d2.get(p)
                if s is None:
                    s = self.d2[p] = set()
                s.add(t)
                if len(s) >= 3 and p not in self.in_q3:
                    self.in_q3.add(p)
                    self.q3plus.append(p)
                    self.stats["q3_insertions"] += 1

    def on_event(self, ev: tuple) -> None:
        update_after_mutation(self, ev)


def update_after_mutation(st: EngineState, ev: tuple) -> None:
    """Bring D1, D2, Q3+ and Qs up to date after one primitive mutation."""
    kind = ev[0]
    g = st.g
    if kind == "edge":
        _, u, v, delta = ev
        p = (u, v) if u < v else (v, u)
        m = st.d1.get(p, 0) + delta
        if m != g.multiplicity(u, v) or m < 0:
            raise RuntimeError(f"D1 out of sync on pair {p}")
        if m:
            st.d1[p] = m
        else:
            st.d1.pop(p, None)
        st.refresh(u)
        st.refresh(v)
        if delta > 0:
            for z in st.d2.get(p, ()):
                st.enqueue(z)
            if m > 2:
                st.pending_triples.add(p)
    elif kind == "loop":
        _, v, delta = ev
        st.refresh(v)
        if g.loops(v):
            st.pending_loops.add(v)
    elif kind == "add":
        st.refresh(ev[1])
    elif kind == "del":
        _, v, nbrs = ev
        for w in nbrs:
            st.d1.pop((v, w) if v < w else (w, v), None)
        st.pending_loops.discard(v)
        st.refresh(v)
        for w in nbrs:
            st.refresh(w)
    else:
        raise RuntimeError(f"unknown mutation event {ev!r}")


def _anchors(g: MultiGraph, rule: RuleId, z: VertexId, cn: CoNeighbors) -> list[VertexId]:
    """Candidate anchor vertices for configurations in which z is black."""
    if rule in (RuleId.Loop, RuleId.Deg1, RuleId.Deg2, RuleId.Deg3Double, RuleId.Gamma):
        return [z]
    nbrs = sorted(g.neighbors(z))
    cands = {z}
    cands.update(nbrs)
    if rule in (RuleId.Digon121, RuleId.MetaCaseA):
        # z is v1, v2, or sits on the other side of the pair {w1, w2}
        if len(nbrs) <= 3:
            for a, b in itertools.combinations(nbrs, 2):
                cands.update(cn(a, b))
    else:
        # z is u1, u2 or u3 of a path-like configuration
        for t in nbrs:
            if g.num_neighbors(t) <= 4:
                cands.update(g.neighbors(t))
    return sorted(c for c in cands if g.num_neighbors(c) == 3)


def _local_match(g: MultiGraph, z: VertexId, cn: CoNeighbors, stats: Counter) -> RuleMatch | None:
    for rule in LOCAL_RULES:
        for a in _anchors(g, rule, z, cn):
            stats["detector_calls"] += 1
            for m in ITERATORS[rule](g, a, cn):
                if z in m.black:
                    return m
    return None


def _basic_match(g: MultiGraph, z: VertexId) -> RuleMatch | None:
    if z not in g:
        return None
    for it in (iter_deg1, iter_deg2, iter_deg3double):
        m = next(it(g, z), None)
        if m is not None:
            return m
    return None


def detect_around(st: EngineState, g: MultiGraph, z: VertexId, ell: int = 5) -> RuleMatch | None:
    """A configuration in which z is black, or None.  Requires an empty Q3+."""
    if st.q3plus:
        raise RuntimeError("detect_around requires an empty Q3+ queue")
    if z not in g or g.num_neighbors(z) > 4:
        raise ValueError(f"vertex {z!r} is not a low-degree vertex of the graph")
    cn = st.coneighbors
    m = _local_match(g, z, cn, st.stats)
    if m is not None:
        return m
    length = 5 if ell == 5 else 6
    for pc in path_configs(g, z, length):
        st.stats["path_configs"] += 1
        # earlier rules take precedence on the path's own vertices
        for x in pc.inner:
            if x != z:
                m = _local_match(g, x, cn, st.stats)
                if m is not None:
                    return m
        if ell == 6:
            return indpath6_match(g, pc)
        return select_fivepath_rule(g, pc)
    return None


def _normalize(st: EngineState, k: int, trace: ReductionTrace) -> int:
    g = st.g
    while (st.pending_loops or st.pending_triples) and k >= 0:
        if st.pending_loops:
            v = min(st.pending_loops)
            st.pending_loops.discard(v)
            if v in g and g.loops(v):
                m = RuleMatch(RuleId.Loop, (("v", v),))
                k -= apply_match(g, m)
                trace.add(m, k)
            continue
        p = min(st.pending_triples)
        st.pending_triples.discard(p)
        u, v = p
        if u in g and v in g and g.multiplicity(u, v) > 2:
            m = RuleMatch(RuleId.Triple, (("u", u), ("v", v)))
            apply_match(g, m)
            trace.add(m, k)
    return k


def _run_incremental(
    g: MultiGraph, k: int, ell: int, trace: ReductionTrace, stats: Counter, debug: bool = False
) -> int:
    st = EngineState(g, stats)
    try:
        k = _normalize(st, k, trace)
        while k >= 0 and (st.qb or st.q3plus or st.qs):
            if st.qb:
                # ThreeDeg3 is only sound once Loop..Triple are exhausted
                z = st.qb.popleft()
                st.in_qb.discard(z)
                m = _basic_match(g, z)
                if m is not None:
                    k -= apply_match(g, m)
                    trace.add(m, k)
                    stats[m.rule.name] += 1
                    k = _normalize(st, k, trace)
            elif st.q3plus:
                p = st.q3plus.popleft()
                st.in_q3.discard(p)
                s = st.coneighbors(*p)
                if len(s) >= 3 and p[0] in g and p[1] in g:
                    a, b, c = s[:3]
                    m = RuleMatch(
                        RuleId.ThreeDeg3, (("v", p[0]), ("w", p[1]), ("a", a), ("b", b), ("c", c))
                    )
                    k -= apply_match(g, m)
                    trace.add(m, k)
                    k = _normalize(st, k, trace)
            else:
                z = st.qs.popleft()
                st.in_qs.discard(z)
                if z not in g or g.num_neighbors(z) > 4:
                    continue
                m = detect_around(st, g, z, ell)
                if m is not None:
                    k -= apply_match(g, m)
                    trace.add(m, k)
                    stats[m.rule.name] += 1
                    k = _normalize(st, k, trace)
                    if z in g:
                        st.refresh(z)
            if debug and k >= 0:
                bad = check_invariants(st, ell)
                if bad:
                    raise AssertionError("; ".join(bad[:5]))
    finally:
        st.detach()
    return k


def check_invariants(st: EngineState, ell: int = 5) -> list[str]:
    """Full recomputation of D1, D2 and Q3+, plus a scan that every present
    configuration has a black vertex waiting in Qs."""
    g = st.g
    bad: list[str] = []
    d1 = {(u, v): m for u, v, m in g.edges() if u != v}
    if d1 != st.d1:
        bad.append("D1 differs from the adjacency")
    d2: dict[tuple[VertexId, VertexId], set[VertexId]] = {}
    for z in g.vertices():
        for p in coneighbor_pairs(g, z):
            d2.setdefault(p, set()).add(z)
    if d2 != st.d2:
        bad.append("D2 differs from recomputed co-neighbour sets")
    for p, s in d2.items():
        if len(s) >= 3 and p not in st.in_q3:
            bad.append(f"pair {p} has {len(s)} co-neighbours but is not in Q3+")
    if st.pending_loops or st.pending_triples or any(
        m > 2 or u == v for u, v, m in g.edges()
    ):
        bad.append("loops or triple edges left unnormalised")
    for v in g.vertices():
        if _basic_match(g, v) is not None and v not in st.in_qb:
            bad.append(f"vertex {v} admits Deg1/Deg2/Deg3Double but is not queued")
    for m in all_configurations(g, ell):
        if not any(b in st.in_qs for b in m.black):
            bad.append(f"{m.rule.name} {m.binding} has no black vertex in Qs")
    return bad


# -- entry points ---------------------------------------------------------------


def _finish(g: MultiGraph, k: int, ell: int, trace: ReductionTrace, mode: str, stats: Counter) -> KernelizeOutcome:
    if k < 0:
        return KernelizeOutcome("no", Instance.no_instance(), trace, mode, ell, stats)
    inst = Instance(g, k)
    if classify_terminal(inst, ell) == "no-trivial":
        trace.entries.append(TraceEntry(RuleId.Reject, (), k))
        return KernelizeOutcome("no", Instance.no_instance(), trace, mode, ell, stats)
    return KernelizeOutcome("kernel", inst, trace, mode, ell, stats)


def _reduce(g: MultiGraph, k: int, mode: str, ell: int, debug: bool, stats: Counter, trace: ReductionTrace) -> int:
    if mode == "naive":
        return _run_naive(g, k, ell, trace, stats)
    if mode == "incremental":
        return _run_incremental(g, k, ell, trace, stats, debug=debug)
    raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def kernelize(
    inst: Instance,
    mode: str = "incremental",
    ell: int = 5,
    *,
    debug: bool = False,
    check_planarity: bool = False,
) -> KernelizeOutcome:
    """Apply the rules exhaustively, then the size-based rejection.

    The input instance is not modified.  ``debug`` re-verifies the
    incremental indexes after every step.
    """
    rule_order(ell)
    if inst.k < 0:
        raise ValueError("kernelize expects k >= 0")
    if check_planarity and euler_violation(inst.graph):
        raise NonPlanarInput("simple underlying graph has more than 3|V|-6 edges")
    g = inst.graph.copy()
    trace = ReductionTrace(n_input=g.next_handle)
    stats: Counter = Counter()
    k = _reduce(g, inst.k, mode, ell, debug, stats, trace)
    return _finish(g, k, ell, trace, mode, stats)


def kernelize_budgets(
    graph: MultiGraph, ks: Sequence[int], mode: str = "incremental", ell: int = 5
) -> list[KernelizeOutcome]:
    """``[kernelize(Instance(graph, k)) for k in ks]`` computed from one run.

    Rules never read k except to stop once it is negative, so the run with
    the largest budget contains every other run as a prefix.  The returned
    kernels share one graph object; treat it as read-only.
    """
    if not ks:
        return []
    if min(ks) < 0:
        raise ValueError("kernelize expects k >= 0")
    top = max(ks)
    g = graph.copy()
    trace = ReductionTrace(n_input=g.next_handle)
    stats: Counter = Counter()
    k_end = _reduce(g, top, mode, ell, False, stats, trace)
    drops = [top - e.k_after for e in trace.entries]
    out = []
    for k in ks:
        cut = next((i for i, d in enumerate(drops) if d > k), None)
        shift = top - k
        entries = trace.entries if cut is None else trace.entries[: cut + 1]
        sub = ReductionTrace(
            [TraceEntry(e.rule, e.binding, e.k_after - shift) for e in entries], trace.n_input
        )
        if cut is not None:
            out.append(KernelizeOutcome("no", Instance.no_instance(), sub, mode, ell, stats))
        else:
            out.append(_finish(g, k_end - shift, ell, sub, mode, stats))
    return out
