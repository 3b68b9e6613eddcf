"""Destroying large cliques in missing graphs by removing few, low-degree edge sets.

Every randomized step here is Las Vegas: candidates are checked with the
exact clique oracle, so a returned removal always meets its bounds.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .compression import (
    GraphDistribution,
    SummaryClasses,
    SummaryFn,
    classify,
    compression_bound,
    find_light_summary,
    support_max_degree,
)
from .errors import InternalConsistencyError, InvalidParameter, LasVegasFailure, ParameterDomainError
from .graph import Graph, edges_touching, induced_subgraph, partition_fixed, union_all
from .oracles import clique_number
from .protocol import Message

DEFAULT_LV_TRIALS = int(os.environ.get("ISADV_LV_TRIALS", "1000"))


def clique_bound(n: int, delta: float, d: float) -> float:
    """Clique-size ceiling left after a degree-``d`` removal from a max-degree-``delta`` graph."""
    return 16 * math.log(n) * delta / d + 10 if n > 1 else 10.0


@dataclass(frozen=True)
class Removal:
    H: Graph
    trials: int
    branch: str


def remove_cliques_low_degree(
    G: Graph,
    d: float,
    rng: np.random.Generator,
    *,
    max_trials: int | None = None,
    force_sampling: bool = False,
) -> Removal:
    """Find ``H <= G`` with max degree ``<= d`` such that ``G - H`` has no large clique.

    The shortcuts are tried first: ``H = G`` when ``G`` already has degree at
    most ``d``, and ``H`` empty when ``d <= 16 ln n`` or ``n <= 10``.  Otherwise
    every edge is kept with probability ``d / (2 * maxdeg)`` until a sample
    passes both checks.  ``force_sampling`` skips the shortcuts.
    """
    if d <= 0:
        raise InvalidParameter(f"removal degree must be positive, got {d}")
    max_trials = DEFAULT_LV_TRIALS if max_trials is None else max_trials
    n = G.n
    delta = G.max_degree
    limit = clique_bound(n, delta, d)

    def ok(H: Graph) -> bool:
        return H.max_degree <= d and clique_number(G - H) <= limit

    if not force_sampling:
        if delta <= d:
            candidate, branch = G, "all-edges"
        elif d <= 16 * math.log(n):
            candidate, branch = Graph.empty(n), "small-d"
        elif n <= 10:
            candidate, branch = Graph.empty(n), "tiny-n"
        else:
            candidate = None
        if candidate is not None:
            if not ok(candidate):
                raise InternalConsistencyError(f"shortcut {branch} failed its own bound")
            return Removal(candidate, 1, branch)
    if delta == 0:
        return Removal(Graph.empty(n), 1, "sampled")
    prob = min(1.0, d / (2 * delta))
    edges = G.sorted_edges()
    for trial in range(1, max_trials + 1):
        keep = rng.random(len(edges)) < prob
        H = Graph._trusted(n, frozenset(e for e, k in zip(edges, keep) if k))
        if ok(H):
            return Removal(H, trial, "sampled")
    raise LasVegasFailure(f"no valid removal in {max_trials} trials (n={n}, maxdeg={delta}, d={d})")


@dataclass(frozen=True)
class SplitResult:
    P: frozenset[int]
    Q: frozenset[int]


def split(G: Graph, b: float, vertices: Sequence[int] | frozenset[int] | None = None) -> SplitResult:
    """Low-degree vertices (degree ``<= b``) versus the rest, over ``vertices``."""
    if b <= 0:
        raise InvalidParameter(f"split threshold must be positive, got {b}")
    vs = range(G.n) if vertices is None else vertices
    P = frozenset(v for v in vs if G.degrees[v] <= b)
    Q = frozenset(vs) - P
    return SplitResult(P, Q)


@dataclass(frozen=True)
class CompressSetup:
    vertices: frozenset[int]
    groups: list[frozenset[int]]
    H_base: Graph
    dist: GraphDistribution
    phi: Message
    parts: list[frozenset[int]]
    Q: frozenset[int]
    H_miss: Graph
    classes: SummaryClasses
    checks: dict[str, bool]

    @property
    def L(self) -> frozenset[int]:
        return self.vertices - self.Q


SummaryProvider = Callable[[GraphDistribution], SummaryFn]


def partition_and_compress(
    G_base: Graph,
    g: int,
    s: int,
    d_comp: float,
    d_filter: float,
    summary_provider: SummaryProvider,
    *,
    vertices: frozenset[int] | None = None,
    strict: bool = False,
    e_max: int | None = None,
    method: str = "exhaustive",
    rng: np.random.Generator | None = None,
    samples: int = 10_000,
) -> CompressSetup:
    """Group the vertices, compress the within-group subgraph, and split off heavy vertices.

    ``vertices`` is the vertex set of ``G_base`` (default: every id).  The
    returned ``checks`` map records each structural guarantee; any false entry
    raises, except the ``|Q|`` bound outside strict mode, which depends on the
    compression bound's hypotheses.
    """
    if g < 1:
        raise InvalidParameter(f"group size must be >= 1, got {g}")
    V = frozenset(range(G_base.n)) if vertices is None else frozenset(vertices)
    n = G_base.n
    if strict:
        bad = []
        if d_comp < 4 * math.log(2 * n):
            bad.append(f"d_comp >= 4 ln(2n) ({d_comp} < {4 * math.log(2 * n):.6g})")
        if d_filter < 1:
            bad.append(f"d_filter >= 1 ({d_filter})")
        if bad:
            raise ParameterDomainError(bad)
    groups = partition_fixed(V, g)
    H_base = union_all(n, (induced_subgraph(G_base, S) for S in groups))
    if d_comp < g:
        dist = GraphDistribution(H_base, d_comp / g, g)
    else:
        dist = GraphDistribution(H_base, 1.0, max(1, len(V)))
    f = summary_provider(dist)
    classes = classify(dist, f, s=s, e_max=e_max, method=method, rng=rng, samples=samples)
    if dist.is_point:
        phi = classes.lightest()
        H_miss = classes.missing_graph(phi)
        parts = [S for S in groups if S]
        Q: frozenset[int] = frozenset()
    else:
        phi, H_miss = find_light_summary(dist, f, s, strict=strict, classes=classes)
        low = split(H_miss, d_filter, V)
        L, Q = low.P, low.Q
        parts = [S & L for S in groups if S & L]

    checks = {
        "support_degree": support_max_degree(classes) <= 2 * d_comp,
        "parts_match_base": all(induced_subgraph(G_base, P) == induced_subgraph(H_base, P) for P in parts),
        "parts_filtered": all(induced_subgraph(H_miss, P).max_degree <= d_filter for P in parts),
        "part_count": len(parts) <= math.ceil(len(V) / g),
        "remainder_size": len(Q) <= 2 * compression_bound(s, 1.0) * g / (d_comp * d_filter),
        "partition": frozenset().union(*parts, Q) == V and sum(map(len, parts)) + len(Q) == len(V),
    }
    for name, passed in checks.items():
        if not passed and (name != "remainder_size" or strict):
            raise InternalConsistencyError(f"partition-and-compress guarantee {name} failed")
    return CompressSetup(V, groups, H_base, dist, phi, parts, Q, H_miss, classes, checks)


def remove_cliques_partitioned(
    H_miss: Graph,
    parts: Sequence[frozenset[int]],
    Q: frozenset[int],
    d_filter: float,
    d_remove: float,
    rng: np.random.Generator,
    *,
    max_trials: int | None = None,
) -> tuple[Graph, list[Removal]]:
    """Per-part clique removal; returns the union ``R`` and the per-part removals."""
    if d_remove <= 0:
        raise InvalidParameter("removal degree must be positive")
    for P in parts:
        if induced_subgraph(H_miss, P).max_degree > d_filter:
            raise InvalidParameter(f"part {sorted(P)} exceeds filter degree {d_filter}")
    streams = rng.spawn(len(parts)) if parts else []
    removals = [
        remove_cliques_low_degree(induced_subgraph(H_miss, P), d_remove, r, max_trials=max_trials)
        for P, r in zip(parts, streams)
    ]
    R = union_all(H_miss.n, (rem.H for rem in removals))
    limit = clique_bound(H_miss.n, d_filter, d_remove)
    if R.max_degree > d_remove:
        raise InternalConsistencyError("removal exceeds its degree bound")
    if edges_touching(R, Q):
        raise InternalConsistencyError("removal touches the remainder set")
    for P in parts:
        if clique_number(induced_subgraph(H_miss - R, P)) > limit:
            raise InternalConsistencyError(f"part {sorted(P)} keeps a clique above {limit:.4g}")
    return R, removals
