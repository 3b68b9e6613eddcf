"""Exact desk-scale solvers used to certify every claim the adversary makes."""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import ResourceLimitError
from .graph import Graph

DEFAULT_CLIQUE_CAP = int(os.environ.get("ISADV_CLIQUE_CAP", "64"))


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _color_bound(adj: tuple[int, ...], cand: int) -> int:
    # Greedy colouring of the candidate set; the class count bounds any clique inside it.
    colors = 0
    rest = cand
    while rest:
        colors += 1
        avail = rest
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            rest &= ~low
            avail &= ~low & ~adj[v]
    return colors


def max_clique(G: Graph, cap: int | None = None) -> frozenset[int]:
    """Maximum clique of ``G``; ties go to the lexicographically smallest vertex set.

    Branching always takes the lowest candidate id and tries including it
    before excluding it, so cliques are visited in lexicographic order and the
    first maximum found is the smallest one.  The colouring bound only prunes
    branches that cannot strictly beat the incumbent.
    """
    cap = DEFAULT_CLIQUE_CAP if cap is None else cap
    if G.n > cap:
        raise ResourceLimitError(f"exact clique search capped at n <= {cap}, got n={G.n}")
    if G.n == 0:
        return frozenset()
    adj = G.adj
    best: list[int] = [1 << 0]
    best_size = [1]

    def expand(clique: int, size: int, cand: int) -> None:
        while cand:
            if size + cand.bit_count() <= best_size[0]:
                return
            if size + _color_bound(adj, cand) <= best_size[0]:
                return
            low = cand & -cand
            v = low.bit_length() - 1
            new_clique = clique | low
            if size + 1 > best_size[0]:
                best_size[0] = size + 1
                best[0] = new_clique
            expand(new_clique, size + 1, cand & adj[v])
            cand &= ~low

    expand(0, 0, (1 << G.n) - 1)
    return frozenset(_bits(best[0]))


def clique_number(G: Graph, cap: int | None = None) -> int:
    return len(max_clique(G, cap))


def max_independent_set(G: Graph, cap: int | None = None) -> frozenset[int]:
    return max_clique(G.complement(), cap)


def maximal_cliques(G: Graph) -> Iterator[frozenset[int]]:
    """Bron-Kerbosch enumeration of all maximal cliques with Tomita pivoting."""
    adj = G.adj

    def bk(r: int, p: int, x: int) -> Iterator[int]:
        if not p and not x:
            yield r
            return
        px = p | x
        pivot = max(_bits(px), key=lambda u: (p & adj[u]).bit_count())
        for v in _bits(p & ~adj[pivot]):
            bit = 1 << v
            yield from bk(r | bit, p & adj[v], x & adj[v])
            p &= ~bit
            x |= bit

    if G.n == 0:
        return
    for r in bk(0, (1 << G.n) - 1, 0):
        yield frozenset(_bits(r))


def greedy_mis(G: Graph, order: Iterable[int] | None = None) -> frozenset[int]:
    """Maximal independent set by scanning ``order`` (ascending ids by default)."""
    chosen = 0
    blocked = 0
    adj = G.adj
    for v in (range(G.n) if order is None else order):
        bit = 1 << v
        if not blocked & bit:
            chosen |= bit
            blocked |= bit | adj[v]
    return frozenset(_bits(chosen))


def caro_wei_sum(G: Graph) -> Fraction:
    return sum((Fraction(1, 1 + d) for d in G.degrees), Fraction(0))


def is_independent(G: Graph, A: Iterable[int]) -> bool:
    mask = 0
    for v in A:
        mask |= 1 << v
    return all(not (G.adj[v] & mask) for v in _bits(mask))


def is_clique(G: Graph, A: Iterable[int]) -> bool:
    vs = set(A)
    mask = 0
    for v in vs:
        mask |= 1 << v
    return all((G.adj[v] | (1 << v)) & mask == mask for v in vs)


def edge_inside(G: Graph, A: Iterable[int]) -> tuple[int, int] | None:
    """Lexicographically first edge of ``G`` with both ends in ``A``, if any."""
    mask = 0
    for v in A:
        mask |= 1 << v
    for u in _bits(mask):
        hit = G.adj[u] & mask & ~((1 << (u + 1)) - 1)
        if hit:
            return (u, (hit & -hit).bit_length() - 1)
    return None
