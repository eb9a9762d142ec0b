"""Exact feedback vertex set oracles for small instances.

``min_fvs`` enumerates vertex subsets by increasing size in lexicographic
order after forcing loop vertices and pruning vertices of degree at most one.
``batch_min_fvs`` evaluates many graphs on at most six vertices at once with a
precomputed forest table; it is used for the exhaustive corpora and is
cross-checked against ``min_fvs``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .multigraph import Instance, MultiGraph, VertexId

ORACLE_MAX_N = 20


class OracleBudgetError(ValueError):
    """The instance is larger than the oracle is allowed to handle."""


@dataclass(frozen=True)
class FvsSolution:
    vertices: frozenset[VertexId]

    @property
    def size(self) -> int:
        return len(self.vertices)


def is_fvs(g: MultiGraph, s: Iterable[VertexId]) -> bool:
    """True if removing ``s`` from g leaves a forest."""
    drop = set(s)
    return g.induced_subgraph(v for v in g.vertices() if v not in drop).is_forest()


def _core(g: MultiGraph) -> tuple[list[VertexId], MultiGraph]:
    """Loop vertices (forced) and the remaining graph with degree <= 1
    vertices pruned away."""
    forced = g.loop_vertices()
    h = g.induced_subgraph(v for v in g.vertices() if v not in set(forced))
    stack = [v for v in h.vertices() if h.degree(v) <= 1]
    while stack:
        v = stack.pop()
        if v not in h or h.degree(v) > 1:
            continue
        nbrs = list(h.neighbors(v))
        h.delete_vertex(v)
        stack.extend(w for w in nbrs if h.degree(w) <= 1)
    return forced, h


def _forest_checker(h: MultiGraph) -> tuple[list[VertexId], Callable[[int], bool]]:
    verts = list(h.vertices())
    idx = {v: i for i, v in enumerate(verts)}
    edges = [(idx[u], idx[v], m) for u, v, m in h.edges()]

    def forest_without(removed: int) -> bool:
        parent = list(range(len(verts)))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i, j, m in edges:
            if (removed >> i) & 1 or (removed >> j) & 1:
                continue
            if m > 1:
                return False
            ri, rj = find(i), find(j)
            if ri == rj:
                return False
            parent[ri] = rj
        return True

    return verts, forest_without


def _search(g: MultiGraph, limit: int | None, max_n: int) -> FvsSolution | None:
    if g.num_vertices() > max_n:
        raise OracleBudgetError(f"oracle budget is {max_n} vertices, got {g.num_vertices()}")
    forced, h = _core(g)
    verts, forest_without = _forest_checker(h)
    top = len(verts) if limit is None else min(len(verts), limit - len(forced))
    for size in range(0, top + 1):
        for combo in itertools.combinations(range(len(verts)), size):
            mask = 0
            for i in combo:
                mask |= 1 << i
            if forest_without(mask):
                return FvsSolution(frozenset(forced) | frozenset(verts[i] for i in combo))
    return None


def min_fvs(g: MultiGraph, max_n: int = ORACLE_MAX_N) -> FvsSolution:
    """A minimum feedback vertex set (lexicographically first among the
    minimum ones of the pruned core)."""
    sol = _search(g, None, max_n)
    assert sol is not None
    return sol


def decision(g: MultiGraph, k: int, max_n: int = ORACLE_MAX_N) -> bool:
    """True iff g has a feedback vertex set of size at most k."""
    if k < 0:
        return False
    return _search(g, k, max_n) is not None


# -- batch oracle on at most six vertices -------------------------------------

N6 = 6
PAIRS6 = list(itertools.combinations(range(N6), 2))
PAIR_INDEX6 = {p: i for i, p in enumerate(PAIRS6)}


@lru_cache(maxsize=None)
def _tables() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Forest table over simple edge masks, pair masks per vertex subset, and
    subset sizes."""
    forest = np.zeros(1 << len(PAIRS6), dtype=bool)
    for mask in range(1 << len(PAIRS6)):
        parent = list(range(N6))
        ok = True
        for e, (i, j) in enumerate(PAIRS6):
            if not (mask >> e) & 1:
                continue
            while parent[i] != i:
                i = parent[i]
            while parent[j] != j:
                j = parent[j]
            if i == j:
                ok = False
                break
            parent[i] = j
        forest[mask] = ok
    inside = np.zeros(1 << N6, dtype=np.int64)
    for keep in range(1 << N6):
        m = 0
        for e, (i, j) in enumerate(PAIRS6):
            if (keep >> i) & 1 and (keep >> j) & 1:
                m |= 1 << e
        inside[keep] = m
    sizes = np.array([bin(k).count("1") for k in range(1 << N6)], dtype=np.int64)
    return forest, inside, sizes


def encode6(g: MultiGraph) -> tuple[np.ndarray, int]:
    """Pair multiplicities (length 15) and loop mask of a graph on <= 6 vertices."""
    verts = list(g.vertices())
    if len(verts) > N6:
        raise OracleBudgetError("encode6 handles at most six vertices")
    idx = {v: i for i, v in enumerate(verts)}
    mult = np.zeros(len(PAIRS6), dtype=np.uint8)
    loops = 0
    for u, v, m in g.edges():
        if u == v:
            loops |= 1 << idx[u]
        else:
            a, b = sorted((idx[u], idx[v]))
            mult[PAIR_INDEX6[(a, b)]] = min(m, 255)
    return mult, loops


def batch_min_fvs(mults: np.ndarray, loops: np.ndarray | None = None, chunk: int = 1 << 16) -> np.ndarray:
    """Minimum FVS sizes for a batch of graphs on six (padded) vertices.

    ``mults`` has shape (N, 15) with pair multiplicities in ``PAIRS6`` order;
    ``loops`` is an optional length-N array of 6-bit loop masks.
    """
    forest, inside, sizes = _tables()
    mults = np.asarray(mults)
    n = mults.shape[0]
    if loops is None:
        loops = np.zeros(n, dtype=np.int64)
    weights = (1 << np.arange(len(PAIRS6), dtype=np.int64))
    out = np.empty(n, dtype=np.int64)
    keeps = np.arange(1 << N6, dtype=np.int64)
    for lo in range(0, n, chunk):
        m = mults[lo : lo + chunk].astype(np.int64)
        simple = (m >= 1).astype(np.int64) @ weights
        multi = (m >= 2).astype(np.int64) @ weights
        lp = np.asarray(loops[lo : lo + chunk], dtype=np.int64)
        ok = (
            forest[simple[:, None] & inside[None, :]]
            & ((multi[:, None] & inside[None, :]) == 0)
            & ((lp[:, None] & keeps[None, :]) == 0)
        )
        best = np.where(ok, sizes[None, :], -1).max(axis=1)
        out[lo : lo + chunk] = N6 - best
    return out


# -- rule soundness harness ----------------------------------------------------


@dataclass
class SoundnessReport:
    rule: str
    checked: int = 0
    fired: int = 0
    failures: list[tuple[str, int, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_rule_soundness(
    rule_name: str,
    corpus: Iterable[Instance],
    detect: Callable[[MultiGraph], object | None],
    apply: Callable[[MultiGraph, object], int],
    max_n: int = ORACLE_MAX_N,
) -> SoundnessReport:
    """Apply ``rule`` once wherever ``detect`` fires and compare oracle decisions.

    ``detect(g)`` returns a match or None; ``apply(g, match)`` mutates g and
    returns the budget decrease.  A failure is recorded when the decision
    changes or the budget grows.
    """
    rep = SoundnessReport(rule_name)
    for inst in corpus:
        rep.checked += 1
        m = detect(inst.graph)
        if m is None:
            continue
        rep.fired += 1
        h = inst.graph.copy()
        drop = apply(h, m)
        k2 = inst.k - drop
        if k2 > inst.k:
            rep.failures.append((_describe(inst.graph), inst.k, "budget increased"))
            continue
        before = decision(inst.graph, inst.k, max_n)
        after = decision(h, k2, max_n)
        if before != after:
            rep.failures.append((_describe(inst.graph), inst.k, f"decision {before} -> {after}"))
    return rep


def _describe(g: MultiGraph) -> str:
    return f"n={g.num_vertices()} edges={g.edge_list()}"
