"""Reduction rules for planar feedback vertex set: detectors, appliers, gadgets.

Detectors are generators ``iter_<rule>(g, anchor, cn)`` yielding every match
whose anchor role is bound to ``anchor``.  ``cn(x, y)`` returns the sorted
co-neighbour set S_{x,y}: vertices z adjacent to both x and y with at most one
edge leaving {x, y}.  The naive engine computes it from scratch, the
incremental engine reads it from its index.

Appliers mutate the graph and return the budget decrease.  Loops and triple
edges that an applier creates are left for the Loop and Triple rules.
"""

from __future__ import annotations

import enum
import functools
import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .multigraph import GraphError, MultiGraph, VertexId

CoNeighbors = Callable[[VertexId, VertexId], Sequence[VertexId]]


class RuleId(enum.IntEnum):
    Loop = 1
    Deg1 = 2
    Deg2 = 3
    Deg3Double = 4
    Triple = 5
    ThreeDeg3 = 6
    Gamma = 7
    Digon121 = 8
    Digon31 = 9
    MetaCaseA = 10
    MetaCaseB = 11
    IndPath6 = 12
    FiveDelW1 = 13
    FiveNW2 = 14
    FiveGadgetU = 15
    FiveGadgetUV = 16
    FiveGadget4 = 17
    Reject = 18


FIVE_PATH_RULES = (
    RuleId.FiveDelW1,
    RuleId.FiveNW2,
    RuleId.FiveGadgetU,
    RuleId.FiveGadgetUV,
    RuleId.FiveGadget4,
)

# Roles whose incident edges are all part of the configuration.  Every black
# vertex has at most four neighbours, which is what the incremental engine
# relies on to find configurations from its vertex queue.
BLACK_ROLES: dict[RuleId, tuple[str, ...]] = {
    RuleId.Loop: ("v",),
    RuleId.Deg1: ("v",),
    RuleId.Deg2: ("u",),
    RuleId.Deg3Double: ("u",),
    RuleId.Triple: (),
    RuleId.ThreeDeg3: ("a", "b", "c"),
    RuleId.Gamma: ("u",),
    RuleId.Digon121: ("v1", "v2", "u1"),
    RuleId.Digon31: ("u1", "u2", "u3"),
    RuleId.MetaCaseA: ("v1", "v2", "u"),
    RuleId.MetaCaseB: ("u1", "u2", "u3"),
    RuleId.IndPath6: ("v1", "v2", "v3", "v4", "v5", "v6"),
    **{r: ("u", "x1", "x2", "x3", "v") for r in FIVE_PATH_RULES},
    RuleId.Reject: (),
}


# The size bound needs at least three solution vertices.  For k <= 1 every
# reduced yes-instance is empty, so the negative bound is still sound; for k = 2
# it is not: a triangle of double edges is reduced, has a solution of size two
# and three vertices, while 13*2 - 24 = 2.
UNBOUNDED_K = frozenset({2})


def reject_bound(ell: int, k: int) -> int:
    """Largest vertex count a reduced planar yes-instance can have (k != 2)."""
    if ell == 5:
        return 13 * k - 24
    if ell == 6:
        return 15 * k - 28
    raise ValueError(f"ell must be 5 or 6, got {ell!r}")


@functools.lru_cache(maxsize=None)
def rule_order(ell: int) -> tuple[RuleId, ...]:
    """Application order of the graph-modifying rules (Reject is terminal)."""
    head = tuple(RuleId(i) for i in range(1, 12))
    if ell == 5:
        return head + FIVE_PATH_RULES
    if ell == 6:
        return head + (RuleId.IndPath6,)
    raise ValueError(f"ell must be 5 or 6, got {ell!r}")


@dataclass(frozen=True)
class RuleMatch:
    rule: RuleId
    binding: tuple[tuple[str, VertexId], ...]

    def __getitem__(self, name: str) -> VertexId:
        for key, v in self.binding:
            if key == name:
                return v
        raise KeyError(name)

    def as_dict(self) -> dict[str, VertexId]:
        return dict(self.binding)

    @property
    def vertices(self) -> tuple[VertexId, ...]:
        return tuple(v for _, v in self.binding)

    @property
    def black(self) -> tuple[VertexId, ...]:
        d = self.as_dict()
        return tuple(d[r] for r in BLACK_ROLES[self.rule] if r in d)


def _match(rule: RuleId, **binding: VertexId) -> RuleMatch:
    return RuleMatch(rule, tuple(binding.items()))


# -- helpers -----------------------------------------------------------------


def edges_outside(g: MultiGraph, z: VertexId, allowed: Iterable[VertexId]) -> int:
    """Edges at z whose other endpoint is not in ``allowed`` (a loop counts once)."""
    keep = set(allowed)
    return sum(m for w, m in g.adjacency(z).items() if w not in keep) + g.loops(z)


def in_coneighbor_set(g: MultiGraph, z: VertexId, x: VertexId, y: VertexId) -> bool:
    adj = g.adjacency(z)
    if x == y or z in (x, y) or x not in adj or y not in adj or len(adj) > 3:
        return False
    return edges_outside(g, z, (x, y)) <= 1


def coneighbor_pairs(g: MultiGraph, z: VertexId) -> list[tuple[VertexId, VertexId]]:
    """All pairs (x, y), x < y, with z in S_{x,y}."""
    adj = g.adjacency(z)
    if len(adj) > 3 or len(adj) < 2:
        return []
    nb = sorted(adj)
    total = sum(adj.values()) + g.loops(z)
    return [
        (x, y)
        for x, y in itertools.combinations(nb, 2)
        if total - adj[x] - adj[y] <= 1
    ]


def coneighbors(g: MultiGraph, x: VertexId, y: VertexId) -> list[VertexId]:
    """S_{x,y} computed from scratch."""
    if x == y or x not in g or y not in g:
        return []
    if g.num_neighbors(x) > g.num_neighbors(y):
        x, y = y, x
    return sorted(z for z in g.neighbors(x) if in_coneighbor_set(g, z, x, y))


def scratch_coneighbors(g: MultiGraph) -> CoNeighbors:
    return lambda x, y: coneighbors(g, x, y)


def _distinct(*vs: VertexId) -> bool:
    return len(set(vs)) == len(vs)


# -- Loop, Deg1, Deg2, Deg3Double, Triple ---------------------------------


def iter_loop(g: MultiGraph, v: VertexId, cn: CoNeighbors | None = None) -> Iterator[RuleMatch]:
    if g.loops(v):
        yield _match(RuleId.Loop, v=v)


def iter_deg1(g: MultiGraph, v: VertexId, cn: CoNeighbors | None = None) -> Iterator[RuleMatch]:
    if g.degree(v) <= 1:
        yield _match(RuleId.Deg1, v=v)


def iter_deg2(g: MultiGraph, u: VertexId, cn: CoNeighbors | None = None) -> Iterator[RuleMatch]:
    if g.loops(u) or g.degree(u) != 2:
        return
    ends = [w for w, m in g.adjacency(u).items() for _ in range(m)]
    a, b = sorted(ends)
    yield _match(RuleId.Deg2, u=u, v=a, w=b)


def iter_deg3double(g: MultiGraph, u: VertexId, cn: CoNeighbors | None = None) -> Iterator[RuleMatch]:
    adj = g.adjacency(u)
    if len(adj) != 2 or g.loops(u):
        return
    (a, ma), (b, mb) = sorted(adj.items())
    if ma == 2 and mb == 1:
        yield _match(RuleId.Deg3Double, u=u, v=a, w=b)
    elif mb == 2 and ma == 1:
        yield _match(RuleId.Deg3Double, u=u, v=b, w=a)


def iter_triple(g: MultiGraph, v: VertexId, cn: CoNeighbors | None = None) -> Iterator[RuleMatch]:
    for w, m in sorted(g.adjacency(v).items()):
        if m >= 3:
            yield _match(RuleId.Triple, u=min(v, w), v=max(v, w))


def detect_basic(g: MultiGraph, v: VertexId) -> RuleMatch | None:
    """Lowest-numbered rule among Loop..Triple whose configuration contains v."""
    for it in (iter_loop, iter_deg1, iter_deg2, iter_deg3double, iter_triple):
        m = next(it(g, v), None)
        if m is not None:
            return m
    return None


# -- ThreeDeg3 ---------------------------------------------------------------


def detect_3deg3(g: MultiGraph, pair: tuple[VertexId, VertexId], cn: CoNeighbors | None = None) -> RuleMatch | None:
    x, y = sorted(pair)
    s = list(cn(x, y)) if cn is not None else coneighbors(g, x, y)
    if len(s) < 3:
        return None
    a, b, c = s[:3]
    return _match(RuleId.ThreeDeg3, v=x, w=y, a=a, b=b, c=c)


def first_3deg3(g: MultiGraph) -> RuleMatch | None:
    """Lexicographically first pair with three co-neighbours."""
    sets: dict[tuple[VertexId, VertexId], list[VertexId]] = {}
    for z in g.vertices():
        for p in coneighbor_pairs(g, z):
            sets.setdefault(p, []).append(z)
    for p in sorted(sets):
        if len(sets[p]) >= 3:
            a, b, c = sorted(sets[p])[:3]
            return _match(RuleId.ThreeDeg3, v=p[0], w=p[1], a=a, b=b, c=c)
    return None


# -- Gamma -------------------------------------------------------------------


def iter_gamma(g: MultiGraph, u: VertexId, cn: CoNeighbors | None = None) -> Iterator[RuleMatch]:
    adj = g.adjacency(u)
    if len(adj) != 3 or g.loops(u):
        return
    nb = sorted(adj)
    for v in nb:
        w, x = (t for t in nb if t != v)
        if adj[w] == 1 and adj[x] == 1 and g.has_edge(v, w) and g.has_edge(v, x):
            yield _match(RuleId.Gamma, u=u, v=v, w=w, x=x)


# -- Digon121 ----------------------------------------------------------------


def _exact_nbrs(g: MultiGraph, z: VertexId, size: int) -> list[VertexId] | None:
    adj = g.adjacency(z)
    if len(adj) != size or g.loops(z):
        return None
    return sorted(adj)


def iter_digon121(g: MultiGraph, v1: VertexId, cn: CoNeighbors) -> Iterator[RuleMatch]:
    nb1 = _exact_nbrs(g, v1, 3)
    if nb1 is None:
        return
    for v2 in nb1:
        pair = [t for t in nb1 if t != v2]
        if g.degree(v2) != 3:
            continue
        nb2 = _exact_nbrs(g, v2, 3)
        if nb2 is None:
            continue
        shared = [t for t in pair if t in nb2]
        if len(shared) != 1:
            continue
        w1 = shared[0]
        w2 = pair[0] if pair[1] == w1 else pair[1]
        rest = [t for t in nb2 if t not in (v1, w1)]
        if len(rest) != 1:
            continue
        v3 = rest[0]
        if v3 == w2:
            continue
        for u1 in cn(min(w1, w2), max(w1, w2)):
            if u1 in (v1, v2, v3) or g.degree(u1) != 3:
                continue
            nbu = _exact_nbrs(g, u1, 3)
            if nbu is None:
                continue
            rest_u = [t for t in nbu if t not in (w1, w2)]
            if len(rest_u) != 1:
                continue
            u2 = rest_u[0]
            if _distinct(v1, v2, v3, u1, u2, w1, w2):
                yield _match(RuleId.Digon121, v1=v1, v2=v2, v3=v3, u1=u1, u2=u2, w1=w1, w2=w2)


# -- Digon31 -----------------------------------------------------------------


def iter_digon31(g: MultiGraph, u1: VertexId, cn: CoNeighbors | None = None) -> Iterator[RuleMatch]:
    nb1 = _exact_nbrs(g, u1, 3)
    if nb1 is None:
        return
    for u2 in nb1:
        ws = [t for t in nb1 if t != u2]
        nb2 = _exact_nbrs(g, u2, 3)
        if nb2 is None or u1 not in nb2:
            continue
        for w1 in ws:
            w2 = ws[0] if ws[1] == w1 else ws[1]
            if w1 not in nb2 or w2 in nb2:
                continue
            u3 = next(t for t in nb2 if t not in (u1, w1))
            if g.degree(u3) != 3:
                continue
            nb3 = _exact_nbrs(g, u3, 3)
            if nb3 is None or w2 not in nb3 or w1 in nb3:
                continue
            u4 = next(t for t in nb3 if t not in (u2, w2))
            if u4 in (u1, w1) or u4 in nb1 or u4 in nb2:
                continue
            if min(g.degree(u1), g.degree(u2)) != 3:
                continue
            if _distinct(u1, u2, u3, u4, w1, w2):
                yield _match(RuleId.Digon31, u1=u1, u2=u2, u3=u3, u4=u4, w1=w1, w2=w2)


# -- MetaCaseA and MetaCaseB -------------------------------------------------


def _acyclic_and_isolated(g: MultiGraph, A: Sequence[VertexId], W: Sequence[VertexId]) -> bool:
    """Sufficient test for "no cycle of G - W meets A".

    Each component of G[A] - W must be a simple tree with at most one edge
    leaving A ∪ W; then no cycle avoiding W can enter it.  Components with
    more exits are reported as failing (conservative).
    """
    aset, wset = set(A), set(W)
    seen: set[VertexId] = set()
    for s in A:
        if s in seen:
            continue
        comp, stack = [s], [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            for y in g.adjacency(x):
                if y in aset and y not in seen:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        inner = exits = 0
        for x in comp:
            if g.loops(x):
                return False
            for y, m in g.adjacency(x).items():
                if y in aset:
                    if m > 1:
                        return False
                    inner += 1
                elif y not in wset:
                    exits += m
        if inner // 2 != len(comp) - 1 or exits > 1:
            return False
    return True


def _subgraph_condition(g: MultiGraph, A: Sequence[VertexId], w1: VertexId, w2: VertexId) -> bool:
    """Exhaustive search for Q ⊆ G[A ∪ {w1, w2}] with deg_Q(x) <= |E(Q)| - |A| - 1
    for every vertex x of Q other than w1 (Q spans A ∪ {w1, w2})."""
    verts = list(A) + [w1, w2]
    idx = {v: i for i, v in enumerate(verts)}
    pairs, mults = [], []
    for a, b in itertools.combinations(verts, 2):
        m = g.multiplicity(a, b)
        if m:
            pairs.append((idx[a], idx[b]))
            mults.append(m)
    loops = [(idx[v], g.loops(v)) for v in verts if g.loops(v)]
    if not pairs and not loops:
        return False
    ranges = [np.arange(m + 1) for m in mults] + [np.arange(c + 1) for _, c in loops]
    grids = np.meshgrid(*ranges, indexing="ij")
    choice = np.stack([x.ravel() for x in grids], axis=1)
    inc = np.zeros((len(ranges), len(verts)), dtype=np.int64)
    for r, (a, b) in enumerate(pairs):
        inc[r, a] += 1
        inc[r, b] += 1
    for r, (a, _) in enumerate(loops, start=len(pairs)):
        inc[r, a] += 2
    n_edges = choice.sum(axis=1)
    deg = choice @ inc
    limit = (n_edges - len(A) - 1)[:, None]
    others = [i for i, v in enumerate(verts) if v != w1]
    ok = (deg[:, others] <= limit).all(axis=1)
    return bool(ok.any())


def meta_rule_holds(g: MultiGraph, A: Sequence[VertexId], w1: VertexId, w2: VertexId) -> bool:
    """Check both hypotheses of the remove-w1 rule for the given A, w1, w2."""
    if w1 in A or w2 in A or w1 == w2:
        return False
    return _acyclic_and_isolated(g, A, (w1, w2)) and _subgraph_condition(g, A, w1, w2)


def iter_meta_a(g: MultiGraph, v1: VertexId, cn: CoNeighbors) -> Iterator[RuleMatch]:
    """Two-component configuration: v1 with neighbours {v2, w1, w2}, and u
    attached to both w's.  A = {u, v1, v2}; w1 is taken adjacent to v2 first."""
    nb1 = _exact_nbrs(g, v1, 3)
    if nb1 is None:
        return
    for v2 in nb1:
        wa, wb = (t for t in nb1 if t != v2)
        if edges_outside(g, v2, (wa, wb, v1)) > 1:
            continue
        for u in cn(wa, wb):
            if u in (v1, v2):
                continue
            orients = [(wa, wb), (wb, wa)]
            if not g.has_edge(v2, wa) and g.has_edge(v2, wb):
                orients.reverse()
            for w1, w2 in orients:
                if meta_rule_holds(g, (u, v1, v2), w1, w2):
                    yield _match(RuleId.MetaCaseA, v1=v1, v2=v2, u=u, w1=w1, w2=w2)
                    break


def iter_meta_b(g: MultiGraph, u1: VertexId, cn: CoNeighbors | None = None) -> Iterator[RuleMatch]:
    """Path-like configuration u1-u2-u3 hanging off w1, w2; A = {u1, u2, u3}."""
    nb1 = _exact_nbrs(g, u1, 3)
    if nb1 is None:
        return
    for u2 in nb1:
        wa, wb = (t for t in nb1 if t != u2)
        adj2 = g.adjacency(u2)
        if g.loops(u2) or g.multiplicity(u1, u2) != 1:
            continue
        rest = [t for t in adj2 if t not in (u1, wa, wb)]
        if len(rest) != 1:
            continue
        u3 = rest[0]
        if adj2[u3] != 1 or edges_outside(g, u3, (wa, wb, u2)) > 1:
            continue
        for w1, w2 in ((wa, wb), (wb, wa)):
            if meta_rule_holds(g, (u1, u2, u3), w1, w2):
                yield _match(RuleId.MetaCaseB, u1=u1, u2=u2, u3=u3, w1=w1, w2=w2)
                break


def detect_gamma(g: MultiGraph, v: VertexId) -> RuleMatch | None:
    return next(iter_gamma(g, v), None)


def detect_digon121(g: MultiGraph, v: VertexId) -> RuleMatch | None:
    return next(iter_digon121(g, v, scratch_coneighbors(g)), None)


def detect_digon31(g: MultiGraph, v: VertexId) -> RuleMatch | None:
    return next(iter_digon31(g, v), None)


def detect_meta_cases(g: MultiGraph, v: VertexId) -> RuleMatch | None:
    cn = scratch_coneighbors(g)
    return next(iter_meta_a(g, v, cn), None) or next(iter_meta_b(g, v), None)


# -- appliers ----------------------------------------------------------------


def _apply_deg2(g: MultiGraph, m: RuleMatch) -> int:
    u, a, b = m["u"], m["v"], m["w"]
    g.delete_vertex(u)
    g.add_edge(a, b)
    return 0


def _apply_triple(g: MultiGraph, m: RuleMatch) -> int:
    g.set_multiplicity(m["u"], m["v"], 2)
    return 0


def _apply_3deg3(g: MultiGraph, m: RuleMatch) -> int:
    g.delete_vertices([m["a"], m["b"], m["c"], m["v"], m["w"]])
    return 2


def _apply_gamma(g: MultiGraph, m: RuleMatch) -> int:
    u, v, w, x = m["u"], m["v"], m["w"], m["x"]
    g.contract_edge(u, v)
    g.add_edge(w, x)
    return 0


def _apply_digon121(g: MultiGraph, m: RuleMatch) -> int:
    # contract v1v2 into v1, which plays the role of the new vertex y
    g.contract_edge(m["v2"], m["v1"])
    g.add_edge(m["w1"], m["v3"])
    return 0


def _apply_digon31(g: MultiGraph, m: RuleMatch) -> int:
    u3, w1, w2 = m["u3"], m["w1"], m["w2"]
    g.delete_vertices([m["u1"], m["u2"]])
    y = g.add_vertex()
    g.add_edge(y, u3)
    g.add_edge(u3, w1)
    g.add_edge(y, w1, 2)
    g.add_edge(y, w2, 2)
    return 0


def _delete(*roles: str, cost: int) -> Callable[[MultiGraph, RuleMatch], int]:
    def apply(g: MultiGraph, m: RuleMatch) -> int:
        g.delete_vertices([m[r] for r in roles])
        return cost

    return apply


APPLIERS: dict[RuleId, Callable[[MultiGraph, RuleMatch], int]] = {
    RuleId.Loop: _delete("v", cost=1),
    RuleId.Deg1: _delete("v", cost=0),
    RuleId.Deg2: _apply_deg2,
    RuleId.Deg3Double: _delete("v", "u", cost=1),
    RuleId.Triple: _apply_triple,
    RuleId.ThreeDeg3: _apply_3deg3,
    RuleId.Gamma: _apply_gamma,
    RuleId.Digon121: _apply_digon121,
    RuleId.Digon31: _apply_digon31,
    RuleId.MetaCaseA: _delete("w1", cost=1),
    RuleId.MetaCaseB: _delete("w1", cost=1),
    RuleId.IndPath6: _delete("w1", cost=1),
    RuleId.FiveDelW1: _delete("w1", cost=1),
    RuleId.FiveNW2: _delete("w1", cost=1),
}


def apply_match(g: MultiGraph, m: RuleMatch) -> int:
    """Apply a match to g in place; returns how much the budget decreases."""
    if m.rule in APPLIERS:
        return APPLIERS[m.rule](g, m)
    if m.rule in (RuleId.FiveGadgetU, RuleId.FiveGadgetUV, RuleId.FiveGadget4):
        from .paths import apply_fivepath_gadget

        apply_fivepath_gadget(g, m.rule, m)
        return 0
    raise GraphError(f"rule {m.rule.name} has no applier")


# -- gadget replacement ------------------------------------------------------

Endpoint = "VertexId | str"


@dataclass(frozen=True)
class GadgetReplacement:
    """Remove X and the edges of G[N[X]], insert fresh vertices Y and edges E_I.

    Fresh vertices are named by string labels; E_I endpoints are either
    existing handles (which must lie in N(X)) or labels from Y.
    """

    X: frozenset[VertexId]
    Y: tuple[str, ...]
    E_I: tuple[tuple[VertexId | str, VertexId | str], ...]


def closed_neighborhood(g: MultiGraph, X: Iterable[VertexId]) -> set[VertexId]:
    out = set(X)
    for x in list(out):
        out.update(g.neighbors(x))
    return out


def apply_gadget(g: MultiGraph, r: GadgetReplacement) -> dict[str, VertexId]:
    """Perform the replacement; returns label -> new handle for Y."""
    for x in r.X:
        if x not in g:
            raise GraphError(f"gadget removes unknown vertex {x!r}")
    if len(set(r.Y)) != len(r.Y):
        raise GraphError("gadget labels must be distinct")
    closed = closed_neighborhood(g, r.X)
    boundary = closed - set(r.X)
    labels = set(r.Y)
    for a, b in r.E_I:
        for e in (a, b):
            if isinstance(e, str):
                if e not in labels:
                    raise GraphError(f"unknown gadget label {e!r}")
            elif e not in boundary:
                raise GraphError(f"gadget edge endpoint {e!r} is not in N(X)")
    inner = sorted(boundary)
    for i, a in enumerate(inner):
        if g.loops(a):
            g.remove_edge(a, a, None)
        for b in inner[i + 1 :]:
            if g.has_edge(a, b):
                g.remove_edge(a, b, None)
    g.delete_vertices(sorted(r.X))
    new = {lab: g.add_vertex() for lab in r.Y}
    touched = set()
    for a, b in r.E_I:
        ha = new[a] if isinstance(a, str) else a
        hb = new[b] if isinstance(b, str) else b
        g.add_edge(ha, hb)
        touched.add((min(ha, hb), max(ha, hb)))
    for a, b in touched:
        if a != b and g.multiplicity(a, b) > 2:
            g.set_multiplicity(a, b, 2)
    return new


def inverse_gadget(
    before: MultiGraph, r: GadgetReplacement, new: dict[str, VertexId]
) -> tuple[GadgetReplacement, dict[VertexId, str]]:
    """The replacement (Y, X, E(A[N_A[X]])) that undoes ``r``.

    ``before`` is the graph A prior to applying ``r``; ``new`` maps Y labels to
    the handles created in B.  Returns the inverse and the labels used for X.
    """
    closed = sorted(closed_neighborhood(before, r.X))
    xlab = {x: f"x{x}" for x in sorted(r.X)}
    name = lambda v: xlab.get(v, v)  # noqa: E731
    edges = []
    for i, a in enumerate(closed):
        for _ in range(before.loops(a)):
            edges.append((name(a), name(a)))
        for b in closed[i + 1 :]:
            for _ in range(before.multiplicity(a, b)):
                edges.append((name(a), name(b)))
    inv = GadgetReplacement(
        X=frozenset(new.values()), Y=tuple(xlab[x] for x in sorted(r.X)), E_I=tuple(edges)
    )
    return inv, xlab


# -- reachability partitions ------------------------------------------------


@dataclass(frozen=True)
class ReachPartition:
    ground: frozenset[VertexId]
    classes: tuple[frozenset[VertexId], ...]

    def same(self, a: VertexId, b: VertexId) -> bool:
        return any(a in c and b in c for c in self.classes)

    def as_sets(self) -> set[frozenset[VertexId]]:
        return set(self.classes)


def reach_partition(h: MultiGraph, s: Iterable[VertexId]) -> ReachPartition:
    """Connectivity classes of ``s`` in h; members absent from h are singletons."""
    ground = frozenset(s)
    comp_of: dict[VertexId, int] = {}
    for i, comp in enumerate(h.components()):
        for v in comp:
            comp_of[v] = i
    groups: dict[object, set[VertexId]] = {}
    for a in sorted(ground):
        key = comp_of.get(a, ("absent", a))
        groups.setdefault(key, set()).add(a)
    classes = tuple(sorted((frozenset(c) for c in groups.values()), key=lambda c: min(c)))
    return ReachPartition(ground, classes)
