"""Immutable simple undirected graphs over dense vertex ids ``0..n-1``.

Edges are stored canonically as ``(u, v)`` with ``u < v``.  Adjacency rows are
kept as Python ints used as bitsets, which is what the exact clique search
and the support enumeration in :mod:`isadversary.compression` rely on.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import InvalidParameter

Edge = tuple[int, int]


def canon(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=True)
class Graph:
    n: int
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InvalidParameter(f"vertex count must be >= 0, got {self.n}")
        if not isinstance(self.edges, frozenset):
            object.__setattr__(self, "edges", frozenset(self.edges))
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise InvalidParameter(f"edge {(u, v)} is not canonical or out of range for n={self.n}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]] = ()) -> Graph:
        """Build a graph from arbitrary-orientation pairs; duplicates are merged."""
        out = set()
        for u, v in edges:
            if u == v:
                raise InvalidParameter(f"self-loop at {u}")
            out.add(canon(int(u), int(v)))
        return cls(n, frozenset(out))

    @classmethod
    def _trusted(cls, n: int, edges: frozenset[Edge]) -> Graph:
        # Skips validation; callers guarantee canonical in-range edges.
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "edges", edges)
        return g

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, frozenset())

    @classmethod
    def complete(cls, n: int, vertices: Iterable[int] | None = None) -> Graph:
        vs = sorted(range(n) if vertices is None else set(vertices))
        return cls(n, frozenset((vs[i], vs[j]) for i in range(len(vs)) for j in range(i + 1, len(vs))))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adj(self) -> tuple[int, ...]:
        rows = [0] * self.n
        for u, v in self.edges:
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return tuple(rows)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(row.bit_count() for row in self.adj)

    def degree(self, v: int) -> int:
        return self.degrees[v]

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return canon(u, v) in self.edges

    def neighbors(self, v: int) -> list[int]:
        row = self.adj[v]
        return [u for u in range(self.n) if row >> u & 1]

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def complement(self) -> Graph:
        return Graph._trusted(
            self.n,
            frozenset((u, v) for u in range(self.n) for v in range(u + 1, self.n) if (u, v) not in self.edges),
        )

    def non_isolated(self) -> frozenset[int]:
        return frozenset(v for v, d in enumerate(self.degrees) if d)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.sorted_edges())

    def __or__(self, other: Graph) -> Graph:
        return graph_union(self, other)

    def __sub__(self, other: Graph) -> Graph:
        return graph_difference(self, other)

    def __le__(self, other: Graph) -> bool:
        _same_universe(self, other)
        return self.edges <= other.edges

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def to_edgelist(self) -> str:
        lines = [f"{self.n} {self.m}"]
        lines.extend(f"{u} {v}" for u, v in self.sorted_edges())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edgelist(cls, text: str) -> Graph:
        tokens = text.split("\n")
        header = tokens[0].split()
        if len(header) != 2:
            raise InvalidParameter("edge-list header must be 'n m'")
        n, m = int(header[0]), int(header[1])
        rows = [line.split() for line in tokens[1:] if line.strip()]
        if len(rows) != m:
            raise InvalidParameter(f"header declares {m} edges, found {len(rows)}")
        edges = []
        for row in rows:
            u, v = int(row[0]), int(row[1])
            if not u < v:
                raise InvalidParameter(f"edge line '{u} {v}' must satisfy u < v")
            edges.append((u, v))
        g = cls(n, frozenset(edges))
        if g.m != m:
            raise InvalidParameter("duplicate edges in edge list")
        return g

    def digest(self) -> str:
        return hashlib.sha256(self.to_edgelist().encode()).hexdigest()


def _same_universe(*graphs: Graph) -> int:
    ns = {g.n for g in graphs}
    if len(ns) > 1:
        raise InvalidParameter(f"graphs have mismatched vertex counts {sorted(ns)}")
    return ns.pop() if ns else 0


def _check_vertices(n: int, vertices: Iterable[int]) -> frozenset[int]:
    vs = frozenset(vertices)
    bad = [v for v in vs if not 0 <= v < n]
    if bad:
        raise InvalidParameter(f"vertices {sorted(bad)} outside 0..{n - 1}")
    return vs


def partition_fixed(S: Iterable[int], g: int) -> list[frozenset[int]]:
    """Split ``S`` into consecutive groups of ``g`` ids, ascending; the last may be short."""
    if g < 1:
        raise InvalidParameter(f"group size must be >= 1, got {g}")
    items = sorted(set(S))
    return [frozenset(items[i:i + g]) for i in range(0, len(items), g)]


def induced_subgraph(G: Graph, T: Iterable[int]) -> Graph:
    """Edges of ``G`` with both endpoints in ``T``; the vertex universe is kept."""
    ts = _check_vertices(G.n, T)
    return Graph._trusted(G.n, frozenset(e for e in G.edges if e[0] in ts and e[1] in ts))


def graph_union(A: Graph, B: Graph) -> Graph:
    n = _same_universe(A, B)
    return Graph._trusted(n, A.edges | B.edges)


def graph_difference(A: Graph, B: Graph) -> Graph:
    n = _same_universe(A, B)
    return Graph._trusted(n, A.edges - B.edges)


def union_all(n: int, graphs: Iterable[Graph]) -> Graph:
    out: set[Edge] = set()
    for g in graphs:
        _same_universe(g, Graph._trusted(n, frozenset()))
        out |= g.edges
    return Graph._trusted(n, frozenset(out))


def are_edge_disjoint(graphs: Sequence[Graph]) -> bool:
    if graphs:
        _same_universe(*graphs)
    seen: set[Edge] = set()
    for g in graphs:
        if seen & g.edges:
            return False
        seen |= g.edges
    return True


def edges_touching(G: Graph, vertices: Iterable[int]) -> frozenset[Edge]:
    vs = frozenset(vertices)
    return frozenset(e for e in G.edges if e[0] in vs or e[1] in vs)
