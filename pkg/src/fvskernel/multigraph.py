"""Undirected multigraph with loops and stable integer vertex handles.

Degree counts a loop twice, so ``len(neighbors(v)) <= degree(v)`` always holds.
Handles are allocated from a monotone counter and never reused, which makes
ascending handle order a deterministic scan order across deletions.
"""

from __future__ import annotations

from typing import Callable, Iterable, Iterator

VertexId = int

# Mutation events passed to an optional listener:
#   ("add", v)                 vertex created
#   ("del", v, {nbr: mult})    vertex deleted together with these edges
#   ("edge", u, v, delta)      multiplicity of uv changed by delta (u != v)
#   ("loop", v, delta)         loop count at v changed by delta
Event = tuple


class GraphError(ValueError):
    """Raised on invalid graph operations (unknown handles, missing edges)."""


class MultiGraph:
    __slots__ = ("_adj", "_loops", "_next", "_m", "listener")

    def __init__(self) -> None:
        self._adj: dict[VertexId, dict[VertexId, int]] = {}
        self._loops: dict[VertexId, int] = {}
        self._next = 0
        self._m = 0
        self.listener: Callable[[Event], None] | None = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "MultiGraph":
        """Build a graph on handles ``0..n-1``; repeated pairs add multiplicity."""
        g = cls()
        for _ in range(n):
            g.add_vertex()
        for u, v in edges:
            g.add_edge(u, v)
        return g

    # -- queries ---------------------------------------------------------

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    def vertices(self) -> Iterator[VertexId]:
        """Vertices in ascending handle order."""
        return iter(self._adj)

    def num_vertices(self) -> int:
        return len(self._adj)

    def num_edges(self) -> int:
        """Number of edges counted with multiplicity (a loop is one edge)."""
        return self._m

    @property
    def next_handle(self) -> int:
        return self._next

    def _check(self, v: VertexId) -> dict[VertexId, int]:
        try:
            return self._adj[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def neighbors(self, v: VertexId):
        """Distinct neighbours of v other than v itself (a live dict view)."""
        return self._check(v).keys()

    def num_neighbors(self, v: VertexId) -> int:
        return len(self._check(v))

    def adjacency(self, v: VertexId) -> dict[VertexId, int]:
        """Mapping neighbour -> multiplicity. Do not mutate."""
        return self._check(v)

    def multiplicity(self, u: VertexId, v: VertexId) -> int:
        if u == v:
            self._check(u)
            return self._loops.get(u, 0)
        return self._check(u).get(v, 0)

    def has_edge(self, u: VertexId, v: VertexId) -> bool:
        return self.multiplicity(u, v) > 0

    def loops(self, v: VertexId) -> int:
        self._check(v)
        return self._loops.get(v, 0)

    def degree(self, v: VertexId) -> int:
        return sum(self._check(v).values()) + 2 * self._loops.get(v, 0)

    def edges(self) -> Iterator[tuple[VertexId, VertexId, int]]:
        """Yield ``(u, v, multiplicity)`` with ``u <= v``; loops as ``(v, v, count)``."""
        for u, nbrs in self._adj.items():
            c = self._loops.get(u, 0)
            if c:
                yield u, u, c
            for v, m in nbrs.items():
                if u < v:
                    yield u, v, m

    def edge_list(self) -> list[tuple[VertexId, VertexId, int]]:
        return sorted(self.edges())

    def loop_vertices(self) -> list[VertexId]:
        return sorted(v for v, c in self._loops.items() if c)

    # -- mutation --------------------------------------------------------

    def _emit(self, ev: Event) -> None:
        if self.listener is not None:
            self.listener(ev)

    def add_vertex(self) -> VertexId:
        v = self._next
        self._next += 1
        self._adj[v] = {}
        self._emit(("add", v))
        return v

    def add_edge(self, u: VertexId, v: VertexId, count: int = 1) -> None:
        if count < 0:
            raise GraphError("negative edge count")
        if count == 0:
            self._check(u), self._check(v)
            return
        if u == v:
            self._check(u)
            self._loops[u] = self._loops.get(u, 0) + count
            self._m += count
            self._emit(("loop", u, count))
            return
        au, av = self._check(u), self._check(v)
        au[v] = au.get(v, 0) + count
        av[u] = av.get(u, 0) + count
        self._m += count
        self._emit(("edge", u, v, count))

    def remove_edge(self, u: VertexId, v: VertexId, count: int | None = 1) -> int:
        """Remove ``count`` copies of uv (all copies if None); returns the number removed."""
        have = self.multiplicity(u, v)
        if have == 0:
            raise GraphError(f"no edge between {u} and {v}")
        k = have if count is None else count
        if k > have:
            raise GraphError(f"edge {u}-{v} has multiplicity {have} < {k}")
        if k <= 0:
            return 0
        if u == v:
            if k == have:
                del self._loops[u]
            else:
                self._loops[u] = have - k
            self._m -= k
            self._emit(("loop", u, -k))
            return k
        au, av = self._adj[u], self._adj[v]
        if k == have:
            del au[v]
            del av[u]
        else:
            au[v] = have - k
            av[u] = have - k
        self._m -= k
        self._emit(("edge", u, v, -k))
        return k

    def set_multiplicity(self, u: VertexId, v: VertexId, m: int) -> None:
        have = self.multiplicity(u, v)
        if m > have:
            self.add_edge(u, v, m - have)
        elif m < have:
            self.remove_edge(u, v, have - m)

    def delete_vertex(self, v: VertexId) -> None:
        nbrs = self._check(v)
        for w, m in nbrs.items():
            del self._adj[w][v]
            self._m -= m
        self._m -= self._loops.pop(v, 0)
        del self._adj[v]
        self._emit(("del", v, nbrs))

    def delete_vertices(self, vs: Iterable[VertexId]) -> None:
        for v in vs:
            self.delete_vertex(v)

    def contract_edge(self, u: VertexId, v: VertexId) -> VertexId:
        """Contract uv into v. Copies of uv beyond the first become loops at v;
        loops at u move to v. Returns the surviving handle v."""
        m_uv = self.multiplicity(u, v)
        if u == v or m_uv == 0:
            raise GraphError(f"cannot contract non-edge {u}-{v}")
        moved = [(w, m) for w, m in self._adj[u].items() if w != v]
        loops_u = self._loops.get(u, 0)
        self.delete_vertex(u)
        for w, m in moved:
            self.add_edge(v, w, m)
        if m_uv - 1 + loops_u:
            self.add_edge(v, v, m_uv - 1 + loops_u)
        return v

    def copy(self) -> "MultiGraph":
        h = MultiGraph()
        h._adj = {v: dict(n) for v, n in self._adj.items()}
        h._loops = dict(self._loops)
        h._next = self._next
        h._m = self._m
        return h

    def induced_subgraph(self, vs: Iterable[VertexId]) -> "MultiGraph":
        """Copy restricted to ``vs``; handles are preserved."""
        keep = set(vs)
        h = MultiGraph()
        h._next = self._next
        for v in self._adj:
            if v in keep:
                h._adj[v] = {w: m for w, m in self._adj[v].items() if w in keep}
                c = self._loops.get(v, 0)
                if c:
                    h._loops[v] = c
        h._m = sum(m for _, _, m in h.edges())
        return h

    # -- structure -------------------------------------------------------

    def components(self) -> list[list[VertexId]]:
        seen: set[VertexId] = set()
        out = []
        for s in self._adj:
            if s in seen:
                continue
            seen.add(s)
            comp, stack = [s], [s]
            while stack:
                x = stack.pop()
                for y in self._adj[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.append(y)
                        stack.append(y)
            out.append(sorted(comp))
        return out

    def is_forest(self) -> bool:
        """True iff the graph has no loops, no parallel edges and no cycles."""
        if self._loops:
            return False
        if any(m > 1 for _, _, m in self.edges()):
            return False
        return self._m == len(self._adj) - len(self.components())

    def canonical_key(self) -> tuple:
        """Handle-relabelled (order-preserving) edge list; equal keys mean
        identical graphs up to an order-preserving renaming."""
        idx = {v: i for i, v in enumerate(self._adj)}
        return (len(idx), tuple(sorted((idx[u], idx[v], m) for u, v, m in self.edges())))

    def __repr__(self) -> str:
        return f"MultiGraph(n={len(self._adj)}, m={self._m})"


class Instance:
    """A graph together with the solution-size budget k."""

    __slots__ = ("graph", "k")

    def __init__(self, graph: MultiGraph, k: int) -> None:
        self.graph = graph
        self.k = k

    def copy(self) -> "Instance":
        return Instance(self.graph.copy(), self.k)

    @classmethod
    def no_instance(cls) -> "Instance":
        """Canonical trivial no-instance: the empty graph with k = -1."""
        return cls(MultiGraph(), -1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return self.k == other.k and self.graph.canonical_key() == other.graph.canonical_key()

    def __repr__(self) -> str:
        return f"Instance({self.graph!r}, k={self.k})"
