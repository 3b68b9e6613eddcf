"""One-way k-player independent-set game and the streaming-to-protocol reduction.

Players speak once, in order, each seeing every earlier message.  The last
player's message is an ``n``-bit bitmap of the claimed independent set (bit
``v`` of the little-endian integer marks vertex ``v``).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Protocol, Sequence, Union

from .errors import BudgetViolation, InvalidParameter, ProtocolViolation
from .graph import Edge, Graph, are_edge_disjoint, canon, union_all
from .streaming import StreamingAlgorithm


@dataclass(frozen=True)
class Message:
    data: bytes
    nbits: int

    def __post_init__(self) -> None:
        if self.nbits > 8 * len(self.data):
            raise InvalidParameter("message declares more bits than its payload holds")

    @classmethod
    def of_bytes(cls, data: bytes) -> Message:
        return cls(bytes(data), 8 * len(data))

    def digest(self) -> str:
        return hashlib.sha256(self.nbits.to_bytes(8, "little") + self.data).hexdigest()

    def __len__(self) -> int:
        return self.nbits


def encode_vertex_set(A: frozenset[int] | set[int], n: int) -> Message:
    mask = 0
    for v in A:
        if not 0 <= v < n:
            raise ProtocolViolation(f"output vertex {v} outside 0..{n - 1}")
        mask |= 1 << v
    return Message(mask.to_bytes((n + 7) // 8, "little"), n)


def decode_vertex_set(msg: Message, n: int) -> frozenset[int]:
    if msg.nbits != n or len(msg.data) != (n + 7) // 8:
        raise ProtocolViolation(f"final message is not an {n}-bit vertex bitmap")
    mask = int.from_bytes(msg.data, "little")
    if mask >> n:
        raise ProtocolViolation("final bitmap has bits beyond n")
    return frozenset(v for v in range(n) if mask >> v & 1)


class Player(Protocol):
    def respond(self, edges: Sequence[Edge], prior: Sequence[Message]) -> Message: ...


PlayerInput = Union[Graph, Sequence[Edge]]


@dataclass(frozen=True)
class Transcript:
    messages: tuple[Message, ...]
    final_output: frozenset[int]

    @property
    def k(self) -> int:
        return len(self.messages)

    def digests(self) -> list[str]:
        return [m.digest() for m in self.messages]

    def to_record(self) -> dict:
        return {
            "rounds": [{"bits": m.nbits, "sha256": m.digest()} for m in self.messages],
            "output": sorted(self.final_output),
        }


class StreamingPlayer:
    """Player ``index`` (0-based) of ``k`` running ``alg`` on its edges in the given order."""

    def __init__(self, alg: StreamingAlgorithm, index: int, k: int, budget: int):
        self.alg = alg
        self.index = index
        self.k = k
        self.budget = budget

    @property
    def last(self) -> bool:
        return self.index == self.k - 1

    def start_state(self, prior: Sequence[Message]):
        if self.index == 0:
            return self.alg.init()
        return self.alg.deserialize(prior[-1].data)

    def respond(self, edges: Sequence[Edge], prior: Sequence[Message]) -> Message:
        return self.finish(self.alg.run(edges, self.start_state(prior)))

    def finish(self, state) -> Message:
        raw = self.alg.serialize(state)
        if 8 * len(raw) > self.budget:
            raise BudgetViolation(8 * len(raw), self.budget, f"player {self.index + 1} state")
        if not self.last:
            return Message.of_bytes(raw)
        return encode_vertex_set(self.alg.finalize(state), self.alg.n)


def streaming_to_protocol(alg: StreamingAlgorithm, k: int, budget: int) -> list[StreamingPlayer]:
    """Players who pass the algorithm's memory along the blackboard."""
    if k < 1:
        raise InvalidParameter("need at least one player")
    if alg.n > budget:
        raise InvalidParameter(f"final bitmap needs n={alg.n} bits but budget is {budget}")
    return [StreamingPlayer(alg, i, k, budget) for i in range(k)]


def ordered_edges(inp: PlayerInput) -> tuple[Edge, ...]:
    if isinstance(inp, Graph):
        return tuple(inp.sorted_edges())
    return tuple(inp)


def run_protocol(
    players: Sequence[Player],
    inputs: Sequence[PlayerInput],
    *,
    n: int,
    budget: int,
    max_degree: int | None = None,
) -> Transcript:
    """Run the game.  Graph inputs are fed in lexicographic edge order; sequences as given."""
    if len(players) != len(inputs):
        raise InvalidParameter(f"{len(players)} players but {len(inputs)} inputs")
    if not players:
        raise InvalidParameter("need at least one player")
    streams = [ordered_edges(x) for x in inputs]
    graphs = [Graph.from_edges(n, s) for s in streams]
    if any(len({canon(u, v) for u, v in s}) != len(s) for s in streams) or not are_edge_disjoint(graphs):
        raise InvalidParameter("player inputs must be pairwise edge-disjoint")
    if max_degree is not None and union_all(n, graphs).max_degree > max_degree:
        raise InvalidParameter(f"union of inputs exceeds max degree {max_degree}")
    messages: list[Message] = []
    for player, stream in zip(players, streams):
        msg = player.respond(stream, tuple(messages))
        if msg.nbits > budget:
            raise BudgetViolation(msg.nbits, budget, f"message {len(messages) + 1}")
        messages.append(msg)
    return Transcript(tuple(messages), decode_vertex_set(messages[-1], n))
