"""Deterministic bounded-memory streaming algorithms with bit-exact state accounting.

An algorithm is a small state machine.  Its state must round-trip through
:meth:`StreamingAlgorithm.serialize`, and the serialized form must be
self-delimiting; memory is charged as ``8 * len(serialize(state))`` bits.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import InvalidParameter, ProtocolViolation
from .graph import Edge, Graph, canon
from .oracles import greedy_mis


def encode_varint(x: int) -> bytes:
    if x < 0:
        raise InvalidParameter("varint must be non-negative")
    out = bytearray()
    while True:
        byte = x & 0x7F
        x >>= 7
        if x:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def decode_varint(data: bytes, pos: int = 0) -> tuple[int, int]:
    shift = 0
    value = 0
    while True:
        if pos >= len(data):
            raise ProtocolViolation("truncated varint")
        byte = data[pos]
        pos += 1
        value |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return value, pos
        shift += 7


class StreamingAlgorithm(ABC):
    """Single-pass edge-stream algorithm for graphs on ``n`` vertices with max degree ``delta``."""

    name = "abstract"

    def __init__(self, n: int, delta: int):
        self.n = n
        self.delta = delta

    @abstractmethod
    def init(self) -> Any: ...

    @abstractmethod
    def process_edge(self, state: Any, u: int, v: int) -> Any: ...

    @abstractmethod
    def serialize(self, state: Any) -> bytes: ...

    @abstractmethod
    def deserialize(self, data: bytes) -> Any: ...

    @abstractmethod
    def finalize(self, state: Any) -> frozenset[int]: ...

    def state_bits(self, state: Any) -> int:
        return 8 * len(self.serialize(state))

    def run(self, stream: Iterable[Sequence[int]], state: Any = None) -> Any:
        state = self.init() if state is None else state
        for u, v in stream:
            state = self.process_edge(state, u, v)
        return state

    def output(self, stream: Iterable[Sequence[int]]) -> frozenset[int]:
        return self.finalize(self.run(stream))


class DetSubsample(StreamingAlgorithm):
    """Keep the ``ceil(n/delta)`` lowest ids and every edge among them; output a greedy MIS.

    State is the set of stored edges, encoded as a varint count followed by
    varint endpoint pairs.
    """

    name = "det-subsample"

    def __init__(self, n: int, delta: int):
        if not 1 <= delta < n:
            raise InvalidParameter(f"det-subsample needs 1 <= delta < n, got delta={delta}, n={n}")
        super().__init__(n, delta)
        self.sample_size = math.ceil(n / delta)

    def init(self) -> frozenset[Edge]:
        return frozenset()

    def process_edge(self, state: frozenset[Edge], u: int, v: int) -> frozenset[Edge]:
        t = self.sample_size
        if u < t and v < t:
            return state | {canon(u, v)}
        return state

    def serialize(self, state: frozenset[Edge]) -> bytes:
        parts = [encode_varint(len(state))]
        for u, v in sorted(state):
            parts.append(encode_varint(u))
            parts.append(encode_varint(v))
        return b"".join(parts)

    def deserialize(self, data: bytes) -> frozenset[Edge]:
        count, pos = decode_varint(data)
        edges = []
        for _ in range(count):
            u, pos = decode_varint(data, pos)
            v, pos = decode_varint(data, pos)
            edges.append((u, v))
        if pos != len(data):
            raise ProtocolViolation("trailing bytes in det-subsample state")
        return frozenset(edges)

    def finalize(self, state: frozenset[Edge]) -> frozenset[int]:
        stored = Graph(self.n, state)
        return greedy_mis(stored, order=range(self.sample_size))


class RandPermutation(StreamingAlgorithm):
    """Randomized baseline: mark the later endpoint of each edge under a seeded vertex order.

    The state holds the seed (8 bytes) and the marked-vertex bitmap; the
    permutation itself is regenerated from the seed.
    """

    name = "rand-perm"

    def __init__(self, n: int, seed: int, delta: int = 0):
        super().__init__(n, delta)
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        perm = np.random.default_rng(self.seed).permutation(n)
        rank = np.empty(n, dtype=np.int64)
        rank[perm] = np.arange(n)
        self.rank = rank.tolist()

    def init(self) -> int:
        return 0

    def process_edge(self, state: int, u: int, v: int) -> int:
        later = u if self.rank[u] > self.rank[v] else v
        return state | (1 << later)

    def serialize(self, state: int) -> bytes:
        return self.seed.to_bytes(8, "little") + state.to_bytes((self.n + 7) // 8, "little")

    def deserialize(self, data: bytes) -> int:
        if len(data) != 8 + (self.n + 7) // 8:
            raise ProtocolViolation("rand-perm state has wrong length")
        if int.from_bytes(data[:8], "little") != self.seed:
            raise ProtocolViolation("rand-perm state carries a different seed")
        return int.from_bytes(data[8:], "little")

    def finalize(self, state: int) -> frozenset[int]:
        return frozenset(v for v in range(self.n) if not state >> v & 1)


class _Strawman(StreamingAlgorithm):
    """Zero-memory algorithms used as adversary targets; they ignore the stream."""

    def init(self) -> None:
        return None

    def process_edge(self, state: None, u: int, v: int) -> None:
        return None

    def serialize(self, state: None) -> bytes:
        return b""

    def deserialize(self, data: bytes) -> None:
        if data:
            raise ProtocolViolation("strawman state must be empty")
        return None


class LowestVertex(_Strawman):
    name = "lowest-vertex"

    def finalize(self, state: None) -> frozenset[int]:
        return frozenset({0}) if self.n else frozenset()


class ClaimAll(_Strawman):
    name = "claim-all"

    def finalize(self, state: None) -> frozenset[int]:
        return frozenset(range(self.n))


class ClaimFixedSet(_Strawman):
    """Always claims the same set (the even ids unless told otherwise)."""

    name = "claim-fixed"

    def __init__(self, n: int, delta: int, claim: Iterable[int] | None = None):
        super().__init__(n, delta)
        self.claim = frozenset(range(0, n, 2) if claim is None else claim)

    def finalize(self, state: None) -> frozenset[int]:
        return self.claim


class ParityGuess(StreamingAlgorithm):
    """One-byte state: parity of edges seen per residue class mod 8.

    Outputs the residue classes whose parity bit is even.  It is wrong on most
    inputs, but unlike the zero-memory strawmen its messages split the
    adversary's support into several classes.
    """

    name = "parity-guess"

    def init(self) -> int:
        return 0

    def process_edge(self, state: int, u: int, v: int) -> int:
        return state ^ (1 << ((u + v) % 8))

    def serialize(self, state: int) -> bytes:
        return bytes([state])

    def deserialize(self, data: bytes) -> int:
        if len(data) != 1:
            raise ProtocolViolation("parity-guess state is one byte")
        return data[0]

    def finalize(self, state: int) -> frozenset[int]:
        return frozenset(v for v in range(self.n) if not state >> (v % 8) & 1)


def det_subsample_algorithm(n: int, delta: int) -> DetSubsample:
    return DetSubsample(n, delta)


def rand_permutation_algorithm(n: int, seed: int) -> RandPermutation:
    return RandPermutation(n, seed)


def measure_peak_state(alg: StreamingAlgorithm, stream: Iterable[Sequence[int]]) -> int:
    """Largest serialized state, in bits, over every prefix of ``stream`` including the empty one."""
    state = alg.init()
    peak = alg.state_bits(state)
    for u, v in stream:
        state = alg.process_edge(state, u, v)
        peak = max(peak, alg.state_bits(state))
    return peak


def prefix_state_bits(alg: StreamingAlgorithm, stream: Iterable[Sequence[int]]) -> list[int]:
    state = alg.init()
    sizes = [alg.state_bits(state)]
    for u, v in stream:
        state = alg.process_edge(state, u, v)
        sizes.append(alg.state_bits(state))
    return sizes


ALGORITHMS = {
    "det-subsample": lambda n, delta, seed=0: DetSubsample(n, delta),
    "rand-perm": lambda n, delta, seed=0: RandPermutation(n, seed, delta),
    "lowest-vertex": lambda n, delta, seed=0: LowestVertex(n, delta),
    "claim-all": lambda n, delta, seed=0: ClaimAll(n, delta),
    "claim-fixed": lambda n, delta, seed=0: ClaimFixedSet(n, delta),
    "parity-guess": lambda n, delta, seed=0: ParityGuess(n, delta),
}


def make_algorithm(name: str, n: int, delta: int, seed: int = 0) -> StreamingAlgorithm:
    """Instantiate a registered algorithm, or load ``module:attr`` as a plugin factory."""
    if name in ALGORITHMS:
        return ALGORITHMS[name](n, delta, seed)
    if ":" in name:
        import importlib

        module, attr = name.split(":", 1)
        factory = getattr(importlib.import_module(module), attr)
        alg = factory(n, delta)
        if not isinstance(alg, StreamingAlgorithm):
            raise InvalidParameter(f"plugin {name} did not return a StreamingAlgorithm")
        return alg
    raise InvalidParameter(f"unknown algorithm {name!r}; known: {sorted(ALGORITHMS)}")
