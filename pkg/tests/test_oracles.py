import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from conftest import brute_clique_number, cycle, graphs, random_graph, star
from isadversary.errors import ResourceLimitError
from isadversary.graph import Graph
from isadversary.oracles import (
    caro_wei_sum,
    clique_number,
    edge_inside,
    greedy_mis,
    is_clique,
    is_independent,
    max_clique,
    max_independent_set,
    maximal_cliques,
)


def test_clique_examples():
    assert len(max_clique(Graph.complete(5))) == 5
    assert len(max_clique(Graph.empty(7))) == 1
    assert len(max_clique(cycle(5))) == 2
    assert max_clique(Graph.empty(0)) == frozenset()


def test_independent_set_examples():
    assert len(max_independent_set(Graph.complete(5))) == 1
    assert len(max_independent_set(Graph.empty(7))) == 7
    assert len(max_independent_set(cycle(5))) == 2


def test_greedy_examples():
    assert greedy_mis(Graph.empty(4)) == {0, 1, 2, 3}
    assert greedy_mis(Graph.complete(4)) == {0}
    assert greedy_mis(Graph.from_edges(3, [(0, 1), (1, 2)])) == {0, 2}
    assert greedy_mis(Graph.from_edges(3, [(0, 1), (1, 2)]), order=[1, 0, 2]) == {1}


def test_caro_wei_examples():
    assert caro_wei_sum(Graph.empty(6)) == 6
    assert caro_wei_sum(Graph.complete(3)) == 1
    assert caro_wei_sum(star(4)) == Fraction(11, 5)


def test_membership_examples():
    G = cycle(5)
    for A in [set(), {3}]:
        assert is_independent(G, A) and is_clique(G, A)
    K3 = Graph.complete(3)
    assert is_clique(K3, {0, 1, 2}) and not is_independent(K3, {0, 1, 2})
    assert is_independent(G, {0, 2})
    assert edge_inside(K3, {0, 1, 2}) == (0, 1)
    assert edge_inside(G, {0, 2}) is None


def test_clique_cap():
    with pytest.raises(ResourceLimitError):
        max_clique(Graph.empty(10), cap=9)


def test_lexicographic_tie_break():
    G = Graph.from_edges(6, [(3, 4), (4, 5), (3, 5), (0, 1), (1, 2), (0, 2)])
    assert max_clique(G) == {0, 1, 2}


@given(graphs(max_n=8))
def test_clique_matches_brute_force(G):
    C = max_clique(G)
    assert is_clique(G, C)
    assert len(C) == brute_clique_number(G)


@given(graphs(max_n=12, p=0.5))
def test_clique_complement_duality(G):
    assert clique_number(G) == len(max_independent_set(G.complement()))
    assert is_independent(G, max_independent_set(G))


@given(graphs(max_n=10))
def test_greedy_guarantee_and_maximality(G):
    A = greedy_mis(G)
    assert is_independent(G, A)
    assert len(A) * (G.max_degree + 1) >= G.n
    for v in set(range(G.n)) - A:
        assert not is_independent(G, A | {v})


@given(graphs(max_n=9))
def test_maximal_cliques_match_brute_force(G):
    found = set(maximal_cliques(G))
    expect = set()
    for size in range(1, G.n + 1):
        for sub in itertools.combinations(range(G.n), size):
            S = frozenset(sub)
            if is_clique(G, S) and all(not is_clique(G, S | {v}) for v in range(G.n) if v not in S):
                expect.add(S)
    assert found == expect


def test_clique_scales_to_cap():
    G = random_graph(np.random.default_rng(5), 64, 0.5)
    C = max_clique(G)
    assert is_clique(G, C)
    assert len(C) == max(len(c) for c in maximal_cliques(G))
