"""Induced-path rules: the six-internal-vertex rule and the five-path rules.

A path configuration is an induced path ``end_a, p_1, ..., p_L, end_b`` whose
internal vertices see exactly two vertices ``w1, w2`` besides the endpoints.
Internal vertices have at most four neighbours, so the search only walks
through low-degree vertices and is bounded for a fixed seed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .multigraph import GraphError, MultiGraph, VertexId
from .rules import (
    FIVE_PATH_RULES,
    GadgetReplacement,
    RuleId,
    RuleMatch,
    apply_gadget,
)


@dataclass(frozen=True)
class PathConfig:
    end_a: VertexId
    inner: tuple[VertexId, ...]
    end_b: VertexId
    w: tuple[VertexId, VertexId]


def _inner_ok(g: MultiGraph, x: VertexId) -> bool:
    return g.num_neighbors(x) <= 4 and not g.loops(x)


def _close(g: MultiGraph, seq: list[VertexId]) -> Iterator[PathConfig]:
    inside = set(seq)
    outside: set[VertexId] = set()
    for s in seq:
        outside.update(t for t in g.neighbors(s) if t not in inside)
    if len(outside) > 4:
        return
    first, last = seq[0], seq[-1]

    def private_ends(end: VertexId) -> list[VertexId]:
        out = []
        for t, m in g.adjacency(end).items():
            if t in inside or m != 1:
                continue
            if any(t in g.adjacency(s) for s in seq if s != end):
                continue
            out.append(t)
        return sorted(out)

    for a in private_ends(first):
        for b in private_ends(last):
            if a == b:
                continue
            w = outside - {a, b}
            if len(w) == 2:
                w1, w2 = sorted(w)
                yield PathConfig(a, tuple(seq), b, (w1, w2))


def _step(g: MultiGraph, seq: list[VertexId], end: VertexId) -> Iterator[VertexId]:
    inside = set(seq)
    for t, m in g.adjacency(end).items():
        if t in inside or m != 1 or not _inner_ok(g, t):
            continue
        # no chords back into the sequence
        if any(s in g.adjacency(t) for s in seq if s != end):
            continue
        outside = set()
        for s in seq + [t]:
            outside.update(x for x in g.neighbors(s) if x not in inside and x != t)
        if len(outside) <= 4:
            yield t


def path_configs(g: MultiGraph, z: VertexId, length: int) -> Iterator[PathConfig]:
    """Induced-path configurations with ``length`` internal vertices, one of
    which is z.  Each path is reported once, oriented so that its first
    internal vertex has the smaller handle."""
    if z not in g or not _inner_ok(g, z):
        return
    # two endpoints and two attachment vertices besides the path
    if g.num_vertices() < length + 4:
        return

    def grow(seq: list[VertexId], right: int, left: int) -> Iterator[list[VertexId]]:
        if right:
            for t in _step(g, seq, seq[-1]):
                yield from grow(seq + [t], right - 1, left)
        elif left:
            for t in _step(g, seq, seq[0]):
                yield from grow([t] + seq, 0, left - 1)
        else:
            yield seq

    for pos in range(length):
        for seq in grow([z], length - 1 - pos, pos):
            if seq[0] > seq[-1]:
                continue
            yield from _close(g, seq)


def all_path_configs(g: MultiGraph, length: int) -> Iterator[PathConfig]:
    for z in g.vertices():
        for pc in path_configs(g, z, length):
            if pc.inner[0] == z:
                yield pc


def _count(g: MultiGraph, w: VertexId, inner: Sequence[VertexId]) -> int:
    adj = g.adjacency(w)
    return sum(1 for x in inner if x in adj)


# -- six internal vertices ---------------------------------------------------


def indpath6_match(g: MultiGraph, pc: PathConfig) -> RuleMatch:
    w1, w2 = pc.w
    if _count(g, w2, pc.inner) > _count(g, w1, pc.inner):
        w1, w2 = w2, w1
    names = {f"v{i + 1}": x for i, x in enumerate(pc.inner)}
    return RuleMatch(
        RuleId.IndPath6,
        (("u", pc.end_a), *names.items(), ("v", pc.end_b), ("w1", w1), ("w2", w2)),
    )


def iter_indpath6(g: MultiGraph, z: VertexId) -> Iterator[RuleMatch]:
    for pc in path_configs(g, z, 6):
        yield indpath6_match(g, pc)


def detect_indpath6(g: MultiGraph, v: VertexId) -> RuleMatch | None:
    return next(iter_indpath6(g, v), None)


# -- five internal vertices --------------------------------------------------

# local indices inside Q
U, X1, X2, X3, V, W1, W2 = range(7)
BOUNDARY = (U, V, W1, W2)


def _local_graph(g: MultiGraph, order: Sequence[VertexId]) -> tuple[list[tuple[int, int, int]], list[int]]:
    edges = []
    for i, j in itertools.combinations(range(len(order)), 2):
        m = g.multiplicity(order[i], order[j])
        if m:
            edges.append((i, j, m))
    loops = [g.loops(x) for x in order]
    return edges, loops


def _components(n: int, keep: int, edges: list[tuple[int, int, int]]) -> list[int] | None:
    """Union-find labels for vertices in ``keep`` (bitmask); None if a cycle remains."""
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j, m in edges:
        if not (keep >> i) & 1 or not (keep >> j) & 1:
            continue
        if m > 1:
            return None
        ri, rj = find(i), find(j)
        if ri == rj:
            return None
        parent[ri] = rj
    return [find(i) for i in range(n)]


def enumerate_fvs_family(q: MultiGraph, order: Sequence[VertexId] | None = None) -> list[frozenset[VertexId]]:
    """All vertex subsets S of q (at most 7 vertices) with q - S a forest."""
    verts = list(order) if order is not None else list(q.vertices())
    if len(verts) > 7:
        raise GraphError("feedback family enumeration is limited to 7 vertices")
    edges, loops = _local_graph(q, verts)
    n = len(verts)
    out = []
    full = (1 << n) - 1
    for removed in range(1 << n):
        keep = full ^ removed
        if any(loops[i] and (keep >> i) & 1 for i in range(n)):
            continue
        if _components(n, keep, edges) is not None:
            out.append(frozenset(verts[i] for i in range(n) if (removed >> i) & 1))
    return out


def _conditions(edges: list[tuple[int, int, int]], loops: list[int]) -> list[tuple[bool, ...]]:
    """For each feedback set of Q (local indices), the truth values of
    conditions (1)-(7) as a tuple indexed 1..7 (entry 0 unused)."""
    full = (1 << 7) - 1
    rows = []
    for removed in range(1 << 7):
        keep = full ^ removed
        if any(loops[i] and (keep >> i) & 1 for i in range(7)):
            continue
        lab = _components(7, keep, edges)
        if lab is None:
            continue
        alive = lambda i: (keep >> i) & 1  # noqa: E731
        same = lambda a, b: alive(a) and alive(b) and lab[a] == lab[b]  # noqa: E731
        c1 = bin(removed).count("1") >= 3
        c2 = bool(same(U, V))
        c3 = not alive(W1)
        c4 = not alive(W2)
        c5 = bool(same(U, W1) and same(U, W2) and not same(U, V))
        c6 = bool(same(V, W1) and same(V, W2) and not same(U, V))
        c7 = bool(same(U, W2) and same(V, W1) and not same(U, V))
        rows.append((False, c1, c2, c3, c4, c5, c6, c7))
    return rows


def _rule_applies(rule: RuleId, rows: list[tuple[bool, ...]], n_w2: int) -> bool:
    base = lambda r: r[1] or r[2] or r[3] or r[4]  # noqa: E731
    if rule is RuleId.FiveDelW1:
        return all(base(r) for r in rows)
    if rule is RuleId.FiveNW2:
        return n_w2 <= 2
    if rule is RuleId.FiveGadgetU:
        return all(base(r) or r[5] for r in rows)
    if rule is RuleId.FiveGadgetUV:
        return all(base(r) or r[5] or r[6] for r in rows)
    if rule is RuleId.FiveGadget4:
        return all(base(r) or r[5] or r[7] for r in rows)
    raise ValueError(rule)


def fivepath_orientations(g: MultiGraph, pc: PathConfig) -> list[tuple[tuple[VertexId, ...], VertexId, VertexId]]:
    """(path u..v, w1, w2) variants allowed by the majority convention on w1."""
    wa, wb = pc.w
    ca, cb = _count(g, wa, pc.inner), _count(g, wb, pc.inner)
    ws = [(wa, wb)] if ca > cb else [(wb, wa)] if cb > ca else [(wa, wb), (wb, wa)]
    out = []
    for w1, w2 in ws:
        out.append((pc.inner, w1, w2))
        out.append((pc.inner[::-1], w1, w2))
    return out


def _binding(pc: PathConfig, path: Sequence[VertexId], w1: VertexId, w2: VertexId) -> tuple:
    u0, v0 = (pc.end_a, pc.end_b) if path[0] == pc.inner[0] else (pc.end_b, pc.end_a)
    u, x1, x2, x3, v = path
    return (
        ("u0", u0), ("u", u), ("x1", x1), ("x2", x2), ("x3", x3),
        ("v", v), ("v0", v0), ("w1", w1), ("w2", w2),
    )


def select_fivepath_rule(g: MultiGraph, pc: PathConfig) -> RuleMatch:
    """First applicable five-path rule; for each rule every admissible
    orientation is tried before moving to the next rule."""
    variants = []
    for path, w1, w2 in fivepath_orientations(g, pc):
        order = list(path) + [w1, w2]
        edges, loops = _local_graph(g, order)
        variants.append((path, w1, w2, _conditions(edges, loops), _count(g, w2, path)))
    for rule in FIVE_PATH_RULES:
        for path, w1, w2, rows, n_w2 in variants:
            if _rule_applies(rule, rows, n_w2):
                return RuleMatch(rule, _binding(pc, path, w1, w2))
    raise RuntimeError(f"no five-path rule applies to {pc}; a rule precondition was violated")


def iter_fivepath(g: MultiGraph, z: VertexId) -> Iterator[PathConfig]:
    yield from path_configs(g, z, 5)


GADGET_EDGES: dict[RuleId, tuple[tuple[str, ...], tuple[tuple[str, str], ...]]] = {
    RuleId.FiveGadgetU: (
        ("y",),
        (("u", "y"), ("y", "v"), ("u", "w1"), ("u", "w2"),
         ("v", "w1"), ("v", "w1"), ("v", "w2"), ("v", "w2"),
         ("y", "w1"), ("y", "w1"), ("y", "w2"), ("y", "w2")),
    ),
    RuleId.FiveGadgetUV: (
        ("y",),
        (("u", "y"), ("y", "v"), ("u", "w1"), ("u", "w2"), ("v", "w1"), ("v", "w2"),
         ("y", "w1"), ("y", "w1"), ("y", "w2"), ("y", "w2")),
    ),
    RuleId.FiveGadget4: (
        ("y1", "y2"),
        (("u", "y1"), ("y1", "y2"), ("y2", "v"), ("u", "w2"), ("y1", "w2"),
         ("y2", "w2"), ("y2", "w1"), ("v", "w1"), ("y1", "w1"), ("y1", "w1")),
    ),
}


def fivepath_gadget(rule: RuleId, m: RuleMatch) -> GadgetReplacement:
    labels, edges = GADGET_EDGES[rule]
    role = lambda r: r if r in labels else m[r]  # noqa: E731
    return GadgetReplacement(
        X=frozenset((m["x1"], m["x2"], m["x3"])),
        Y=labels,
        E_I=tuple((role(a), role(b)) for a, b in edges),
    )


def apply_fivepath_gadget(g: MultiGraph, rule: RuleId, m: RuleMatch) -> dict[str, VertexId]:
    if rule not in GADGET_EDGES:
        raise GraphError(f"{rule.name} is not a gadget rule")
    boundary = set()
    for x in (m["x1"], m["x2"], m["x3"]):
        boundary.update(g.neighbors(x))
    boundary -= {m["x1"], m["x2"], m["x3"]}
    if boundary != {m["u"], m["v"], m["w1"], m["w2"]}:
        raise GraphError("five-path gadget needs N({x1,x2,x3}) = {u, v, w1, w2}")
    return apply_gadget(g, fivepath_gadget(rule, m))
