import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import graphs
from isadversary.compression import (
    GraphDistribution,
    classify,
    compression_bound,
    compression_preconditions,
    constant_summary,
    enumerate_support,
    find_light_summary,
    hash_summary,
    missing_graph,
    parity_summary,
    sample,
    state_summary,
    support_masks,
)
from isadversary.errors import (
    BudgetViolation,
    EmptyClassError,
    InvalidParameter,
    ParameterDomainError,
    ResourceLimitError,
)
from isadversary.graph import Graph
from isadversary.protocol import Message
from isadversary.streaming import DetSubsample


def naive_support(base, cap):
    edges = base.sorted_edges()
    out = []
    for r in range(len(edges) + 1):
        for sub in itertools.combinations(edges, r):
            deg = [0] * base.n
            for u, v in sub:
                deg[u] += 1
                deg[v] += 1
            if max(deg, default=0) < cap:
                out.append(frozenset(sub))
    return set(out)


def identity_summary(G):
    return Message.of_bytes(G.to_edgelist().encode())


def test_point_distribution_samples_base():
    base = Graph.complete(5)
    dist = GraphDistribution(base, 1.0, 5)
    G, tries = sample(dist, np.random.default_rng(0))
    assert G == base and tries == 1
    assert list(enumerate_support(dist)) == [base]


def test_edgeless_base():
    dist = GraphDistribution(Graph.empty(4), 0.3, 2)
    for seed in range(5):
        assert sample(dist, np.random.default_rng(seed))[0].m == 0


def test_support_examples():
    e = Graph.from_edges(2, [(0, 1)])
    assert {G.edges for G in enumerate_support(GraphDistribution(e, 0.5, 2))} == {frozenset(), frozenset({(0, 1)})}
    K3 = Graph.complete(3)
    assert [G.m for G in enumerate_support(GraphDistribution(K3, 0.5, 1))] == [0]
    assert sorted(G.m for G in enumerate_support(GraphDistribution(K3, 0.5, 2))) == [0, 1, 1, 1]


def test_k4_sampler_matches_exhaustive_conditional():
    base = Graph.complete(4)
    dist = GraphDistribution(base, 0.5, 3)
    edges = base.sorted_edges()
    # Oracle: conditional edge marginals given max degree < 3, uniform over the 2^6 masks.
    support = naive_support(base, 3)
    probs = {e: sum(e in S for S in support) / len(support) for e in edges}
    rng = np.random.default_rng(2024)
    N = 100_000
    count = {e: 0 for e in edges}
    for _ in range(N):
        G, _ = sample(dist, rng)
        for e in G.edges:
            count[e] += 1
    for e in edges:
        sigma = math.sqrt(probs[e] * (1 - probs[e]) / N)
        assert abs(count[e] / N - probs[e]) <= 3 * sigma


@given(graphs(max_n=6).filter(lambda G: G.m <= 10), st.sampled_from([0.25, 0.5, 0.75]), st.integers(1, 6))
def test_support_matches_naive_filter(base, p, d):
    dist = GraphDistribution(base, p, d)
    assert {G.edges for G in enumerate_support(dist)} == naive_support(base, 2 * p * d)


def test_enumeration_guard():
    with pytest.raises(ResourceLimitError):
        support_masks(GraphDistribution(Graph.complete(7), 0.5, 3), e_max=20)


def test_missing_examples():
    K3 = Graph.complete(3)
    dist = GraphDistribution(K3, 0.5, 2)
    c = classify(dist, parity_summary)
    even, odd = Message(b"\x00", 1), Message(b"\x01", 1)
    assert [G.m for G in c.members(even)] == [0]
    assert c.missing_graph(even) == K3
    assert c.missing_count(odd) == 0
    assert find_light_summary(dist, parity_summary, 1) == (odd, Graph.empty(3))

    big = GraphDistribution(K3, 0.5, 4)
    assert missing_graph(big, constant_summary, Message(b"\x00", 1)).m == 0
    assert find_light_summary(big, constant_summary, 1) == (Message(b"\x00", 1), Graph.empty(3))
    single = Graph.from_edges(3, [(0, 1)])
    assert missing_graph(big, identity_summary, identity_summary(single)) == K3 - single
    phi, miss = find_light_summary(big, identity_summary, 10_000)
    assert phi == identity_summary(K3) and miss.m == 0


def test_light_summary_when_base_not_in_support():
    dist = GraphDistribution(Graph.complete(3), 0.5, 2)
    phi, miss = find_light_summary(dist, identity_summary, 10_000)
    assert miss.m == 2


def test_budget_and_empty_class_errors():
    dist = GraphDistribution(Graph.complete(3), 0.5, 2)
    with pytest.raises(BudgetViolation):
        classify(dist, identity_summary, s=8)
    c = classify(dist, parity_summary)
    with pytest.raises(EmptyClassError):
        c.missing_graph(Message(b"\x07", 3))
    with pytest.raises(EmptyClassError):
        c.witness(Message(b"\x00", 1), (0, 1))
    with pytest.raises(InvalidParameter):
        GraphDistribution(Graph.complete(3), 0.0, 2)


def test_strict_preconditions():
    base = Graph.complete(4)
    assert compression_preconditions(GraphDistribution(base, 1.0, 30))
    bad = GraphDistribution(base, 0.5, 5)
    assert any("4 ln(2n)/p" in v for v in compression_preconditions(bad))
    with pytest.raises(ParameterDomainError):
        find_light_summary(bad, parity_summary, 1, strict=True)
    ok = GraphDistribution(base, 0.5, math.ceil(8 * math.log(8)))
    assert compression_preconditions(ok) == []
    phi, miss = find_light_summary(ok, hash_summary(2), 2, strict=True)
    assert miss.m <= compression_bound(2, 0.5)


@given(graphs(max_n=6).filter(lambda G: 1 <= G.m <= 9), st.integers(1, 3), st.integers(1, 4))
def test_witness_and_minimizer(base, d, bits):
    dist = GraphDistribution(base, 0.5, d)
    c = classify(dist, hash_summary(bits))
    counts = [c.missing_count(m) for m in c.messages]
    phi = c.lightest()
    assert c.missing_count(phi) == min(counts)
    for msg in c.messages:
        miss = c.missing_graph(msg)
        for e in base.edges - miss.edges:
            W = c.witness(msg, e)
            assert e in W.edges and dist.contains(W) and hash_summary(bits)(W) == msg
        for e in miss.edges:
            assert all(e not in G.edges for G in c.members(msg))


def test_class_frequencies_chi_square():
    base = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 2)])
    dist = GraphDistribution(base, 0.4, 3)
    f = hash_summary(2)
    c = classify(dist, f)
    expected = c.class_probabilities()
    rng = np.random.default_rng(11)
    N = 20_000
    observed = {m: 0 for m in expected}
    for _ in range(N):
        observed[f(sample(dist, rng)[0])] += 1
    chi2 = sum((observed[m] - N * q) ** 2 / (N * q) for m, q in expected.items())
    # 99.9% quantile of chi-square with 3 degrees of freedom
    assert len(expected) == 4 and chi2 < 16.27


def test_sample_member_is_conditional():
    base = Graph.complete(4)
    dist = GraphDistribution(base, 0.5, 3)
    c = classify(dist, parity_summary)
    rng = np.random.default_rng(1)
    odd = Message(b"\x01", 1)
    draws = [c.sample_member(odd, rng) for _ in range(300)]
    assert all(G.m % 2 == 1 and dist.contains(G) for G in draws)


def test_monte_carlo_over_approximates():
    base = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
    dist = GraphDistribution(base, 0.5, 2)
    exact = classify(dist, parity_summary)
    mc = classify(dist, parity_summary, method="monte_carlo", samples=50, rng=np.random.default_rng(0))
    for msg in mc.messages:
        assert exact.missing_graph(msg) <= mc.missing_graph(msg)
    with pytest.raises(InvalidParameter):
        classify(dist, parity_summary, method="monte_carlo")


def test_state_summary_and_histogram():
    alg = DetSubsample(6, 2)
    dist = GraphDistribution(Graph.complete(3), 0.5, 2)
    c = classify(dist, state_summary(alg))
    assert len(c.messages) == 4
    rows = c.histogram_csv().splitlines()
    assert rows[0] == "summary_sha256,class_size,missing_edges"
    assert len(rows) == 5
