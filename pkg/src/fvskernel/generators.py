"""Instance factories: the tight family, exhaustive small corpora, planted
planar yes-instances and grids."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import networkx as nx
import numpy as np

from .multigraph import Instance, MultiGraph

# -- tight family -----------------------------------------------------------------


def gen_tight(m: int, chain: int = 4) -> Instance:
    """Rule-free planar instance with ``m`` solution vertices on a cycle of
    double edges and about ``3 * chain + 1`` vertices per solution vertex.

    Solution vertices ``a_0..a_{m-1}``.  On each side of the cycle (inner and
    outer) there is a forest: a spine ``b_1 .. b_{m-2}`` whose consecutive
    vertices are joined through chains of ``chain`` vertices, a pendant
    ``c_g`` on every spine vertex sitting in gap g (between a_g and a_{g+1}),
    and two extra pendants on the spine ends sitting in the gaps next to a_0.
    Pendants see the two solution vertices of their gap; chain vertices
    between b_{g-1} and b_g see a_g and the far vertex a_0.
    """
    if m < 4:
        raise ValueError("gen_tight needs a cycle of length at least 4")
    g = MultiGraph()
    a = [g.add_vertex() for _ in range(m)]
    for i in range(m):
        g.add_edge(a[i], a[(i + 1) % m], 2)

    def side() -> None:
        spine = {}
        for gap in range(1, m - 1):
            b = spine[gap] = g.add_vertex()
            c = g.add_vertex()
            g.add_edge(b, c)
            g.add_edge(c, a[gap])
            g.add_edge(c, a[gap + 1])
        for gap, b in ((0, spine[1]), (m - 1, spine[m - 2])):
            c = g.add_vertex()
            g.add_edge(b, c)
            g.add_edge(c, a[gap])
            g.add_edge(c, a[(gap + 1) % m])
        for gap in range(2, m - 1):
            prev = spine[gap - 1]
            for _ in range(chain):
                s = g.add_vertex()
                g.add_edge(prev, s)
                g.add_edge(s, a[gap])
                g.add_edge(s, a[0])
                prev = s
            g.add_edge(prev, spine[gap])

    side()
    side()
    return Instance(g, m)


# -- exhaustive small corpus --------------------------------------------------------


@dataclass(frozen=True)
class CorpusBlock:
    """All corpus graphs on ``n`` vertices: one row of pair multiplicities per
    graph, pairs in ``itertools.combinations(range(n), 2)`` order."""

    n: int
    mults: np.ndarray

    def graph(self, row: int) -> MultiGraph:
        return graph_from_code(self.n, self.mults[row])


def graph_from_code(n: int, mults) -> MultiGraph:
    g = MultiGraph()
    vs = [g.add_vertex() for _ in range(n)]
    for (i, j), m in zip(itertools.combinations(range(n), 2), mults):
        if m:
            g.add_edge(vs[i], vs[j], int(m))
    return g


def _edge_automorphisms(G: nx.Graph, edges: list[tuple[int, int]]) -> np.ndarray:
    index = {e: i for i, e in enumerate(edges)}
    perms = []
    for iso in nx.algorithms.isomorphism.GraphMatcher(G, G).isomorphisms_iter():
        perms.append([index[tuple(sorted((iso[a], iso[b])))] for a, b in edges])
    return np.array(perms, dtype=np.int64).reshape(len(perms), len(edges))


def _subset_orbit_reps(items: list[int], group: np.ndarray) -> list[tuple[int, np.ndarray]]:
    """Orbit representatives of subsets of ``items`` (edge indices) under a
    group of edge permutations that maps ``items`` onto itself.  Returns each
    representative as a bitmask over positions in ``items`` plus its
    stabiliser."""
    t = len(items)
    pos = {e: i for i, e in enumerate(items)}
    masks = np.arange(1 << t, dtype=np.int64)
    images = []
    for h in group:
        target = [pos[int(h[e])] for e in items]
        img = np.zeros_like(masks)
        for i, j in enumerate(target):
            img |= ((masks >> i) & 1) << j
        images.append(img)
    images = np.stack(images) if images else masks[None, :]
    canon = images.min(axis=0)
    reps = np.nonzero(canon == masks)[0]
    out = []
    for r in reps:
        stab = group[images[:, r] == r] if len(group) else group
        out.append((int(r), stab))
    return out


def _multiplicity_codes(edges: list[tuple[int, int]], group: np.ndarray, max_mult: int) -> list[list[int]]:
    """Orbit representatives of edge multiplicity assignments 1..max_mult."""
    codes = []

    def rec(level_set: list[int], grp: np.ndarray, mult: list[int], level: int) -> None:
        if level > max_mult or not level_set:
            codes.append(list(mult))
            return
        for mask, stab in _subset_orbit_reps(level_set, grp):
            chosen = [e for i, e in enumerate(level_set) if (mask >> i) & 1]
            nxt = list(mult)
            for e in chosen:
                nxt[e] += 1
            rec(chosen, stab, nxt, level + 1)

    rec(list(range(len(edges))), group, [1] * len(edges), 2)
    return codes


@lru_cache(maxsize=None)
def corpus_blocks(max_n: int, max_mult: int) -> tuple[CorpusBlock, ...]:
    """Connected multigraphs on 1..max_n vertices with multiplicities up to
    ``max_mult``, one per isomorphism class."""
    if not 1 <= max_n <= 7:
        raise ValueError("max_n must be in 1..7")
    if max_mult < 1:
        raise ValueError("max_mult must be positive")
    rows: dict[int, list[list[int]]] = {n: [] for n in range(1, max_n + 1)}
    for G in nx.graph_atlas_g():
        n = G.number_of_nodes()
        if n == 0 or n > max_n or not nx.is_connected(G):
            continue
        edges = sorted(tuple(sorted(e)) for e in G.edges())
        group = _edge_automorphisms(G, edges)
        pairs = {p: i for i, p in enumerate(itertools.combinations(range(n), 2))}
        for code in _multiplicity_codes(edges, group, max_mult):
            row = [0] * len(pairs)
            for e, m in zip(edges, code):
                row[pairs[e]] = m
            rows[n].append(row)
    return tuple(
        CorpusBlock(n, np.array(r, dtype=np.uint8).reshape(len(r), n * (n - 1) // 2))
        for n, r in rows.items()
    )


def corpus_size(max_n: int, max_mult: int) -> int:
    return sum(len(b.mults) for b in corpus_blocks(max_n, max_mult))


def gen_corpus_small(max_n: int, max_mult: int, ks: range | None = None) -> Iterator[Instance]:
    """Every corpus graph paired with every k in ``ks`` (default 0..max_n)."""
    ks = range(0, max_n + 1) if ks is None else ks
    for block in corpus_blocks(max_n, max_mult):
        for row in range(len(block.mults)):
            g = block.graph(row)
            for k in ks:
                yield Instance(g.copy(), k)


# -- planted planar yes-instances ----------------------------------------------------


def gen_planted_planar(k: int, size_factor: float, seed: int) -> Instance:
    """Planar graph with a feedback vertex set of size at most k.

    The forest is drawn with its vertices on a horizontal line in DFS order and
    its edges as non-crossing arcs above the line.  The k solution vertices sit
    below the line, each attached to part of its own interval of the line, and
    consecutive solution vertices may be joined by single or double edges.
    Every such drawing is crossing-free.
    """
    return _planted(k, size_factor, seed)[0]


def planted_solution(k: int, size_factor: float, seed: int) -> list[int]:
    """Handles of the planted solution vertices of ``gen_planted_planar``."""
    return _planted(k, size_factor, seed)[1]


def _planted(k: int, size_factor: float, seed: int) -> tuple[Instance, list[int]]:
    if k < 2:
        raise ValueError("gen_planted_planar needs k >= 2")
    rng = random.Random(seed)
    n_forest = max(k, int(round(size_factor * k)))
    parent: list[int | None] = [None]
    stack = [0]
    for v in range(1, n_forest):
        # parent on the rightmost root path keeps DFS order and planarity
        if rng.random() < 0.1:
            stack = []
            parent.append(None)
        else:
            depth = rng.randrange(len(stack))
            stack = stack[: depth + 1]
            parent.append(stack[-1])
        stack.append(v)
    cuts = sorted(rng.sample(range(1, n_forest), k - 1))
    bounds = [0] + cuts + [n_forest]
    edges: list[tuple[int, int]] = []
    for v, p in enumerate(parent):
        if p is not None:
            edges.append((p, v))
    for i in range(k):
        s = n_forest + i
        span = list(range(bounds[i], bounds[i + 1]))
        picked = [x for x in span if rng.random() < 0.8] or [rng.choice(span)]
        for x in picked:
            edges.extend([(s, x)] * (2 if rng.random() < 0.25 else 1))
        if i + 1 < k:
            edges.extend([(s, s + 1)] * rng.choice((0, 1, 1, 2)))
    n = n_forest + k
    perm = list(range(n))
    rng.shuffle(perm)
    edges = sorted(tuple(sorted((perm[a], perm[b]))) for a, b in edges)
    solution = sorted(perm[n_forest + i] for i in range(k))
    return Instance(MultiGraph.from_edges(n, edges), k), solution


# -- grids ------------------------------------------------------------------------


def gen_grid(rows: int, cols: int, k: int | None = None) -> Instance:
    """rows x cols grid graph; k defaults to the number of vertices."""
    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be positive")
    n = rows * cols
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Instance(MultiGraph.from_edges(n, edges), n if k is None else k)


def grid_for_size(n: int, k: int | None = None) -> Instance:
    """Near-square grid with about n vertices."""
    rows = max(1, int(round(n ** 0.5)))
    cols = max(1, -(-n // rows))
    return gen_grid(rows, cols, k)
