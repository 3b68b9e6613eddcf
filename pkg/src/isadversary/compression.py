"""Degree-capped random subgraph distributions, summaries, and missing graphs.

A distribution keeps each base edge independently with probability ``p`` and
rejects samples whose max degree is not strictly below ``2*p*d``.  A summary
function maps each support graph to a :class:`~isadversary.protocol.Message`;
the missing graph of a message is the set of base edges that no support graph
in that message's class contains.

Support enumeration is exhaustive and works on edge bitmasks (bit ``i`` is the
``i``-th base edge in lexicographic order), so it is guarded by ``e_max``.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
import os
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from .errors import (
    BudgetViolation,
    EmptyClassError,
    InternalConsistencyError,
    InvalidParameter,
    ParameterDomainError,
    ResourceLimitError,
    SamplingFailure,
)
from .graph import Edge, Graph
from .protocol import Message

DEFAULT_E_MAX = int(os.environ.get("ISADV_E_MAX", "20"))
DEFAULT_SAMPLE_RETRIES = int(os.environ.get("ISADV_SAMPLE_RETRIES", str(10**6)))

SummaryFn = Callable[[Graph], Message]


@dataclass(frozen=True)
class GraphDistribution:
    base: Graph
    p: float
    d: float

    def __post_init__(self) -> None:
        if not 0 < self.p <= 1:
            raise InvalidParameter(f"p must lie in (0, 1], got {self.p}")
        if self.d < 1:
            raise InvalidParameter(f"d must be >= 1, got {self.d}")

    @property
    def degree_cap(self) -> float:
        """Support graphs have max degree strictly below this value."""
        return 2 * self.p * self.d

    @property
    def is_point(self) -> bool:
        return self.p == 1

    def contains(self, G: Graph) -> bool:
        if G.n != self.base.n or not G.edges <= self.base.edges:
            return False
        if self.is_point and G.edges != self.base.edges:
            return False
        return G.max_degree < self.degree_cap


def sample(dist: GraphDistribution, rng: np.random.Generator, max_retries: int | None = None) -> tuple[Graph, int]:
    """Rejection-sample one graph; returns it with the number of attempts used."""
    max_retries = DEFAULT_SAMPLE_RETRIES if max_retries is None else max_retries
    edges = dist.base.sorted_edges()
    for attempt in range(1, max_retries + 1):
        keep = rng.random(len(edges)) < dist.p
        G = Graph._trusted(dist.base.n, frozenset(e for e, k in zip(edges, keep) if k))
        if G.max_degree < dist.degree_cap:
            return G, attempt
    raise SamplingFailure(f"no support graph after {max_retries} attempts (cap {dist.degree_cap})")


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a.astype(np.uint64)).astype(np.int64)


def support_masks(dist: GraphDistribution, e_max: int | None = None) -> np.ndarray:
    """Edge bitmasks of every support graph, ascending."""
    e_max = DEFAULT_E_MAX if e_max is None else e_max
    edges = dist.base.sorted_edges()
    m = len(edges)
    full = (1 << m) - 1
    if dist.is_point:
        ok = dist.base.max_degree < dist.degree_cap
        return np.array([full] if ok else [], dtype=np.int64)
    if m > e_max:
        raise ResourceLimitError(f"exhaustive support needs 2^{m} subsets; e_max is {e_max}")
    masks = np.arange(1 << m, dtype=np.int64)
    if dist.base.max_degree < dist.degree_cap:
        return masks
    incident: dict[int, int] = {}
    for i, (u, v) in enumerate(edges):
        incident[u] = incident.get(u, 0) | (1 << i)
        incident[v] = incident.get(v, 0) | (1 << i)
    ok = np.ones(masks.shape, dtype=bool)
    for inc in incident.values():
        ok &= _popcount(masks & inc) < dist.degree_cap
    return masks[ok]


def mask_to_graph(n: int, edges: list[Edge], mask: int) -> Graph:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(edges[i])
        mask >>= 1
        i += 1
    return Graph._trusted(n, frozenset(out))


def enumerate_support(dist: GraphDistribution, e_max: int | None = None) -> Iterator[Graph]:
    edges = dist.base.sorted_edges()
    for mask in support_masks(dist, e_max).tolist():
        yield mask_to_graph(dist.base.n, edges, mask)


@dataclass
class SummaryClasses:
    """Support graphs bucketed by summary, with per-class edge unions.

    ``exhaustive`` is False when the classes were built from samples; the
    missing graphs are then supersets of the true ones.
    """

    dist: GraphDistribution
    edges: list[Edge]
    masks: np.ndarray
    class_of: np.ndarray
    messages: list[Message]
    exhaustive: bool = True
    unions: list[int] = field(default_factory=list)
    sizes: list[int] = field(default_factory=list)
    _index: dict[Message, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self._index = {msg: i for i, msg in enumerate(self.messages)}
        k = len(self.messages)
        unions = [0] * k
        sizes = [0] * k
        for mask, c in zip(self.masks.tolist(), self.class_of.tolist()):
            unions[c] |= mask
            sizes[c] += 1
        self.unions = unions
        self.sizes = sizes

    @property
    def full_mask(self) -> int:
        return (1 << len(self.edges)) - 1

    def class_index(self, msg: Message) -> int:
        try:
            return self._index[msg]
        except KeyError:
            raise EmptyClassError(f"summary {msg.digest()[:12]} has no preimage in the support") from None

    def missing_mask(self, msg: Message) -> int:
        return self.full_mask & ~self.unions[self.class_index(msg)]

    def missing_count(self, msg: Message) -> int:
        return self.missing_mask(msg).bit_count()

    def missing_graph(self, msg: Message) -> Graph:
        return mask_to_graph(self.dist.base.n, self.edges, self.missing_mask(msg))

    def lightest(self) -> Message:
        """Summary with the fewest missing edges; ties go to the first class seen."""
        counts = [(self.full_mask & ~u).bit_count() for u in self.unions]
        return self.messages[int(np.argmin(counts))]

    def member_masks(self, msg: Message) -> np.ndarray:
        return self.masks[self.class_of == self.class_index(msg)]

    def members(self, msg: Message) -> list[Graph]:
        return [mask_to_graph(self.dist.base.n, self.edges, m) for m in self.member_masks(msg).tolist()]

    def witness(self, msg: Message, edge: Edge) -> Graph:
        """First class member (ascending mask) containing ``edge``."""
        try:
            bit = 1 << self.edges.index(edge)
        except ValueError:
            raise InvalidParameter(f"{edge} is not a base edge") from None
        for mask in self.member_masks(msg).tolist():
            if mask & bit:
                return mask_to_graph(self.dist.base.n, self.edges, mask)
        raise EmptyClassError(f"no graph in class contains {edge}; it is a missing edge")

    def weights(self, masks: np.ndarray) -> np.ndarray:
        if self.dist.is_point:
            return np.ones(len(masks))
        k = _popcount(masks)
        m = len(self.edges)
        logw = k * math.log(self.dist.p) + (m - k) * math.log1p(-self.dist.p)
        return np.exp(logw - logw.max()) if len(logw) else logw

    def sample_member(self, msg: Message, rng: np.random.Generator) -> Graph:
        """Draw from the distribution conditioned on the summary equal to ``msg``."""
        masks = self.member_masks(msg)
        if self.exhaustive:
            w = self.weights(masks)
        else:
            w = np.ones(len(masks))
        pick = int(rng.choice(len(masks), p=w / w.sum()))
        return mask_to_graph(self.dist.base.n, self.edges, int(masks[pick]))

    def class_probabilities(self) -> dict[Message, float]:
        w = self.weights(self.masks) if self.exhaustive else np.ones(len(self.masks))
        totals = np.bincount(self.class_of, weights=w, minlength=len(self.messages))
        totals = totals / totals.sum()
        return {msg: float(t) for msg, t in zip(self.messages, totals)}

    def histogram_rows(self) -> list[tuple[str, int, int]]:
        return [
            (msg.digest(), self.sizes[i], (self.full_mask & ~self.unions[i]).bit_count())
            for i, msg in enumerate(self.messages)
        ]

    def histogram_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["summary_sha256", "class_size", "missing_edges"])
        writer.writerows(self.histogram_rows())
        return buf.getvalue()


def classify(
    dist: GraphDistribution,
    f: SummaryFn,
    *,
    s: int | None = None,
    e_max: int | None = None,
    method: str = "exhaustive",
    samples: int = 10_000,
    rng: np.random.Generator | None = None,
) -> SummaryClasses:
    """Evaluate ``f`` on the support and bucket graphs by their summary.

    ``method="monte_carlo"`` buckets ``samples`` rejection samples instead of
    the whole support.  Its missing graphs over-approximate the true ones.
    """
    edges = dist.base.sorted_edges()
    n = dist.base.n
    if method == "exhaustive":
        masks = support_masks(dist, e_max)
    elif method == "monte_carlo":
        if rng is None:
            raise InvalidParameter("monte_carlo classification needs an rng")
        index = {e: i for i, e in enumerate(edges)}
        drawn = set()
        for _ in range(samples):
            G, _ = sample(dist, rng)
            drawn.add(sum(1 << index[e] for e in G.edges))
        masks = np.array(sorted(drawn), dtype=np.int64)
    else:
        raise InvalidParameter(f"unknown classification method {method!r}")
    index_of: dict[Message, int] = {}
    messages: list[Message] = []
    class_of = np.empty(len(masks), dtype=np.int64)
    for j, mask in enumerate(masks.tolist()):
        msg = f(mask_to_graph(n, edges, mask))
        if s is not None and msg.nbits > s:
            raise BudgetViolation(msg.nbits, s, "summary")
        c = index_of.get(msg)
        if c is None:
            c = index_of[msg] = len(messages)
            messages.append(msg)
        class_of[j] = c
    return SummaryClasses(dist, edges, masks, class_of, messages, exhaustive=(method == "exhaustive"))


def support_max_degree(classes: SummaryClasses) -> int:
    """Largest vertex degree over every classified support graph."""
    if len(classes.masks) == 0:
        return 0
    incident: dict[int, int] = {}
    for i, (u, v) in enumerate(classes.edges):
        incident[u] = incident.get(u, 0) | (1 << i)
        incident[v] = incident.get(v, 0) | (1 << i)
    return max((int(_popcount(classes.masks & inc).max()) for inc in incident.values()), default=0)


def missing_graph(dist: GraphDistribution, f: SummaryFn, phi: Message, e_max: int | None = None) -> Graph:
    return classify(dist, f, e_max=e_max).missing_graph(phi)


def constant_summary(G: Graph) -> Message:
    return Message(b"\x00", 1)


def parity_summary(G: Graph) -> Message:
    """One bit: the parity of the edge count."""
    return Message(bytes([G.m & 1]), 1)


def hash_summary(bits: int) -> SummaryFn:
    """First ``bits`` bits of the SHA-256 of the edge list."""
    if bits < 1:
        raise InvalidParameter("hash summary needs at least one bit")

    def f(G: Graph) -> Message:
        value = int.from_bytes(hashlib.sha256(G.to_edgelist().encode()).digest(), "big") >> (256 - bits)
        return Message(value.to_bytes((bits + 7) // 8, "little"), bits)

    return f


def state_summary(alg, prefix: tuple[Edge, ...] = ()) -> SummaryFn:
    """Serialized state of a streaming algorithm after ``prefix`` then the graph's edges."""

    def f(G: Graph) -> Message:
        return Message.of_bytes(alg.serialize(alg.run(prefix + tuple(G.sorted_edges()))))

    return f


def compression_bound(s: int, p: float) -> float:
    """Guaranteed missing-edge count of the lightest summary."""
    return math.log(2) * (s + 1) / p


def compression_preconditions(dist: GraphDistribution) -> list[str]:
    """Violated hypotheses of the compression bound, as readable inequalities."""
    violated = []
    p, d, n = dist.p, dist.d, dist.base.n
    if not 0 < p < 1:
        violated.append(f"p in (0,1) (p={p})")
    if d < dist.base.max_degree:
        violated.append(f"d >= max degree of base ({d} < {dist.base.max_degree})")
    if n >= 1 and d < 4 * math.log(2 * n) / p:
        violated.append(f"d >= 4 ln(2n)/p ({d} < {4 * math.log(2 * n) / p:.6g})")
    return violated


def find_light_summary(
    dist: GraphDistribution,
    f: SummaryFn,
    s: int,
    *,
    strict: bool = False,
    e_max: int | None = None,
    classes: SummaryClasses | None = None,
) -> tuple[Message, Graph]:
    """Exact minimiser of the missing-edge count over all realised summaries.

    With ``strict=True`` the distribution must satisfy the compression bound's
    hypotheses and the result is checked against ``ln 2 * (s + 1) / p``.
    """
    if strict:
        violated = compression_preconditions(dist)
        if violated:
            raise ParameterDomainError(violated)
    if classes is None:
        classes = classify(dist, f, s=s, e_max=e_max)
    if not classes.messages:
        raise EmptyClassError("distribution has an empty support")
    phi = classes.lightest()
    missing = classes.missing_graph(phi)
    if strict:
        if not classes.exhaustive:
            raise InvalidParameter("strict mode requires exhaustive classification")
        if missing.m > compression_bound(s, dist.p):
            raise InternalConsistencyError(
                f"lightest summary misses {missing.m} edges > bound {compression_bound(s, dist.p):.6g}"
            )
    return phi, missing
