import itertools

import pytest
from hypothesis import given, strategies as st

from conftest import graphs
from isadversary.errors import BudgetViolation, InvalidParameter, ProtocolViolation
from isadversary.graph import Graph
from isadversary.protocol import (
    Message,
    decode_vertex_set,
    encode_vertex_set,
    run_protocol,
    streaming_to_protocol,
)
from isadversary.streaming import ALGORITHMS, DetSubsample, make_algorithm


class ClaimEverything:
    def __init__(self, n):
        self.n = n

    def respond(self, edges, prior):
        return encode_vertex_set(frozenset(range(self.n)), self.n)


def test_single_trivial_player():
    t = run_protocol([ClaimEverything(5)], [Graph.empty(5)], n=5, budget=5)
    assert t.final_output == frozenset(range(5))


def test_empty_inputs_decode_to_empty_graph_output():
    alg = DetSubsample(12, 3)
    for k in (1, 2, 4):
        t = run_protocol(streaming_to_protocol(alg, k, 64), [Graph.empty(12)] * k, n=12, budget=64)
        assert t.final_output == alg.output([])
        again = run_protocol(streaming_to_protocol(alg, k, 64), [Graph.empty(12)] * k, n=12, budget=64)
        assert again == t


def test_k4_split_matches_concatenated_stream():
    alg = DetSubsample(12, 3)
    first = [(0, 1), (0, 2), (0, 3)]
    second = [(1, 2), (1, 3), (2, 3)]
    t = run_protocol(streaming_to_protocol(alg, 2, 128), [first, second], n=12, budget=128)
    assert t.final_output == alg.output(first + second)


def test_det_subsample_every_two_way_split():
    alg = DetSubsample(12, 3)
    edges = [(0, 1), (2, 3), (1, 2), (5, 9), (3, 11)]
    for mask in range(1 << len(edges)):
        a = [e for i, e in enumerate(edges) if mask >> i & 1]
        b = [e for i, e in enumerate(edges) if not mask >> i & 1]
        t = run_protocol(streaming_to_protocol(alg, 2, 256), [a, b], n=12, budget=256)
        assert t.final_output == alg.output(a + b)


@given(graphs(min_n=2, max_n=7), st.integers(1, 4), st.sampled_from(sorted(ALGORITHMS)), st.integers(0, 2**16))
def test_reduction_equals_concatenated_run(G, k, name, seed):
    alg = make_algorithm(name, G.n, max(1, min(G.max_degree, G.n - 1)), seed)
    edges = G.sorted_edges()
    owners = [(seed >> i) % k for i in range(len(edges))]
    parts = [[e for e, o in zip(edges, owners) if o == j] for j in range(k)]
    budget = 8 * 64
    t = run_protocol(streaming_to_protocol(alg, k, budget), parts, n=G.n, budget=budget)
    assert t.final_output == alg.output([e for p in parts for e in p])


def test_prefix_property():
    alg = DetSubsample(10, 3)
    players = streaming_to_protocol(alg, 3, 256)
    base = [[(0, 1)], [(1, 2)], [(2, 3)]]
    changed = [[(0, 1)], [(1, 2)], [(0, 3), (5, 6)]]
    a = run_protocol(players, base, n=10, budget=256)
    b = run_protocol(players, changed, n=10, budget=256)
    assert a.messages[:2] == b.messages[:2]


def test_rejects_overlapping_and_duplicate_inputs():
    players = streaming_to_protocol(DetSubsample(6, 2), 2, 64)
    with pytest.raises(InvalidParameter):
        run_protocol(players, [[(0, 1)], [(0, 1)]], n=6, budget=64)
    with pytest.raises(InvalidParameter):
        run_protocol(players, [[(0, 1), (1, 0)], []], n=6, budget=64)
    with pytest.raises(InvalidParameter):
        run_protocol(players, [[(0, 1), (0, 2)], [(0, 3)]], n=6, budget=64, max_degree=2)


def test_budget_enforced():
    with pytest.raises(InvalidParameter):
        streaming_to_protocol(DetSubsample(12, 3), 2, 11)
    players = streaming_to_protocol(DetSubsample(12, 3), 2, 16)
    with pytest.raises(BudgetViolation):
        run_protocol(players, [[(0, 1), (1, 2)], []], n=12, budget=16)


def test_bitmap_encoding():
    m = encode_vertex_set({0, 3, 9}, 10)
    assert m.nbits == 10 and m.data == bytes([0b1001, 0b10])
    assert decode_vertex_set(m, 10) == {0, 3, 9}
    with pytest.raises(ProtocolViolation):
        decode_vertex_set(Message(b"\x00", 8), 10)
    with pytest.raises(ProtocolViolation):
        decode_vertex_set(Message(b"\xff\xff", 10), 10)
    with pytest.raises(ProtocolViolation):
        encode_vertex_set({10}, 10)
