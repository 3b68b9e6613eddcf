"""Adaptive adversary against deterministic players of the independent-set game.

Round ``i`` groups the current base graph, lets player ``i``'s own summary
function pick the lightest message class, strips heavy missing-graph vertices
into the next round, and schedules clique-destroying edges for player
``i + 1``.  Afterwards every player gets a graph from its chosen class, the
protocol is replayed, and the output is either certified small or refuted
with a concrete edge inside it.

``mode="strict"`` enforces the asymptotic parameter regime under which the
size bound is guaranteed.  ``mode="structural"`` runs the same machinery with
explicit desk-scale parameters and checks only the structural invariants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence, Union

import numpy as np

from .cliques import CompressSetup, Removal, partition_and_compress, remove_cliques_partitioned
from .compression import DEFAULT_E_MAX, GraphDistribution, SummaryClasses
from .errors import InternalConsistencyError, InvalidParameter, ParameterDomainError
from .graph import Edge, Graph, are_edge_disjoint, edges_touching, induced_subgraph, union_all
from .oracles import edge_inside
from .protocol import Message, Player, StreamingPlayer, Transcript, run_protocol, streaming_to_protocol
from .streaming import StreamingAlgorithm

ETA = math.e ** 2
ETA0 = 128
R_CONST = 128 * math.e * math.log(2)


def regime_violations(n: int, delta: float, s: int) -> list[str]:
    """Which asymptotic-regime parameter inequalities fail (empty when all hold)."""
    bad = []
    if not ETA < n:
        bad.append(f"e^2 < n (n={n})")
    if not n <= s:
        bad.append(f"n <= s (n={n}, s={s})")
    if n > 1:
        lo = max(ETA0 * s * math.log(n) / n, ETA0 * math.log(n) ** 2)
        if not lo < delta:
            bad.append(f"max(128 s ln(n)/n, 128 ln^2 n) < delta ({lo:.6g} >= {delta})")
    if not delta < math.sqrt(n):
        bad.append(f"delta < sqrt(n) ({delta} >= {math.sqrt(n):.6g})")
    return bad


def derive_params(n: int, delta: float, s: int, *, strict: bool = True) -> tuple[int, int]:
    """Clique-removal slack ``ell`` and player count ``k`` for an ``n``-vertex, ``s``-bit instance."""
    if n < 1 or s < 1:
        raise InvalidParameter("n and s must be positive")
    if strict:
        bad = regime_violations(n, delta, s)
        if bad:
            raise ParameterDomainError(bad)
    ell = max(math.ceil(2 * math.e * math.log(2) * (s + 1) / n), math.ceil(8 * math.log(n)))
    k = math.ceil(math.log(n)) + 1
    if strict and not ell < delta / (4 * math.log(2 * n)):
        raise InternalConsistencyError(f"ell={ell} is not below delta/(4 ln 2n)={delta / (4 * math.log(2 * n)):.6g}")
    return ell, k


def threshold(n: int, delta: float, k: int, ell: float) -> float:
    """Largest output size the adversary cannot always refute."""
    base = n / delta ** 2
    return base + base * k * (96 * ell ** 2 * math.log(n) + 30)


def simplified_threshold(n: int, delta: float, s: int) -> float:
    return 1152 * R_CONST ** 2 * math.log(n) ** 4 * s ** 2 / (n * delta ** 2)


@dataclass(frozen=True)
class AdversaryConfig:
    n: int
    delta: int
    s: int
    mode: str = "structural"
    ell: float | None = None
    k: int | None = None
    group_size: int | None = None
    d_comp: float | None = None
    d_filter: float | None = None
    d_remove: float | None = None
    e_max: int | None = None
    seed: int = 0
    compression: str = "exhaustive"
    mc_samples: int = 10_000
    lv_max_trials: int | None = None

    OVERRIDES = ("ell", "k", "group_size", "d_comp", "d_filter", "d_remove")

    def __post_init__(self) -> None:
        if self.mode not in ("strict", "structural"):
            raise InvalidParameter(f"mode must be strict or structural, got {self.mode!r}")
        if self.n < 2 or self.delta < 1 or self.s < 1:
            raise InvalidParameter("need n >= 2, delta >= 1, s >= 1")
        if self.mode == "strict":
            given = [name for name in self.OVERRIDES if getattr(self, name) is not None]
            if given:
                raise InvalidParameter(f"strict mode derives {given} itself; drop the overrides")
            if self.compression != "exhaustive":
                raise InvalidParameter("strict mode needs exhaustive compression")
        for name in self.OVERRIDES:
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise InvalidParameter(f"{name} must be positive, got {value}")

    @property
    def strict(self) -> bool:
        return self.mode == "strict"

    def resolve(self) -> "Params":
        if self.strict:
            ell, k = derive_params(self.n, self.delta, self.s, strict=True)
        else:
            ell0, k0 = derive_params(self.n, self.delta, self.s, strict=False)
            ell = ell0 if self.ell is None else self.ell
            k = k0 if self.k is None else self.k
        return Params(
            ell=ell,
            k=int(k),
            d_comp=self.delta / ell if self.d_comp is None else self.d_comp,
            d_filter=ell ** 2 * self.delta if self.d_filter is None else self.d_filter,
            d_remove=self.delta / 2 if self.d_remove is None else self.d_remove,
            group_size=self.group_size,
        )

    @classmethod
    def from_mapping(cls, data: dict) -> AdversaryConfig:
        known = {f for f in cls.__dataclass_fields__}
        extra = set(data) - known
        if extra:
            raise InvalidParameter(f"unknown config keys {sorted(extra)}")
        return cls(**data)

    def to_mapping(self) -> dict:
        return {name: getattr(self, name) for name in self.__dataclass_fields__}


@dataclass(frozen=True)
class Params:
    ell: float
    k: int
    d_comp: float
    d_filter: float
    d_remove: float
    group_size: int | None

    def group_size_for(self, n_i: int, n: int, delta: float) -> int:
        if self.group_size is not None:
            return int(self.group_size)
        return max(1, math.floor(n_i * delta ** 2 / n))


@dataclass(frozen=True)
class RoundRecord:
    i: int
    n_i: int
    vertices: frozenset[int]
    G_base: Graph
    terminated: bool
    R_in: Graph
    M: Message
    H: Graph
    R_next: Graph
    group_size: int = 0
    H_base: Graph | None = None
    dist: GraphDistribution | None = None
    parts: tuple[frozenset[int], ...] = ()
    Q: frozenset[int] = frozenset()
    H_miss: Graph | None = None
    classes: SummaryClasses | None = field(default=None, repr=False)
    removals: tuple[Removal, ...] = field(default=(), repr=False)
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def L(self) -> frozenset[int]:
        return frozenset().union(*self.parts)

    def next_vertices(self) -> frozenset[int]:
        return self.vertices if self.terminated else self.Q

    def to_record(self) -> dict:
        rec = {
            "round": self.i,
            "n_i": self.n_i,
            "terminated": self.terminated,
            "message_bits": self.M.nbits,
            "message_sha256": self.M.digest(),
            "G_base_sha256": self.G_base.digest(),
            "H_edges": self.H.sorted_edges(),
            "R_in_edges": self.R_in.sorted_edges(),
            "R_next_edges": self.R_next.sorted_edges(),
        }
        if not self.terminated:
            rec.update(
                group_size=self.group_size,
                p=self.dist.p,
                d=self.dist.d,
                support_size=int(len(self.classes.masks)),
                summary_classes=len(self.classes.messages),
                H_base_sha256=self.H_base.digest(),
                H_base_edges=self.H_base.m,
                missing_edges=self.H_miss.m,
                Q_size=len(self.Q),
                parts=len(self.parts),
                removal_branches=sorted({r.branch for r in self.removals}),
                checks=self.checks,
            )
        return rec


@dataclass(frozen=True)
class SmallOutput:
    threshold: float
    size: int
    kind = "SmallOutput"

    def to_record(self) -> dict:
        return {"kind": self.kind, "threshold": self.threshold, "size": self.size}


@dataclass(frozen=True)
class Unbroken:
    """Output above the size threshold with no refuting pair, possible only outside the asymptotic regime."""

    threshold: float
    size: int
    kind = "Unbroken"

    def to_record(self) -> dict:
        return {"kind": self.kind, "threshold": self.threshold, "size": self.size}


@dataclass(frozen=True)
class AlreadyWrong:
    edge: Edge
    kind = "AlreadyWrong"

    def to_record(self) -> dict:
        return {"kind": self.kind, "edge": list(self.edge)}


@dataclass(frozen=True)
class Broken:
    edge: Edge
    round: int
    witness: Graph
    G_input: Graph
    inputs: tuple[tuple[Edge, ...], ...]
    transcript: Transcript
    kind = "Broken"

    def to_record(self) -> dict:
        return {
            "kind": self.kind,
            "edge": list(self.edge),
            "round": self.round,
            "witness_edges": self.witness.sorted_edges(),
            "G_input_sha256": self.G_input.digest(),
            "replay": self.transcript.digests(),
        }


Verdict = Union[SmallOutput, Unbroken, AlreadyWrong, Broken]


@dataclass
class AdversaryResult:
    config: AdversaryConfig
    params: Params
    rounds: list[RoundRecord]
    inputs: tuple[tuple[Edge, ...], ...]
    G_input: Graph
    transcript: Transcript
    players: Sequence[Player] = field(repr=False)
    threshold: float = 0.0
    verdict: Verdict | None = None

    @property
    def A(self) -> frozenset[int]:
        return self.transcript.final_output

    def to_report(self) -> dict:
        return {
            "config": self.config.to_mapping(),
            "params": {
                "ell": self.params.ell,
                "k": self.params.k,
                "d_comp": self.params.d_comp,
                "d_filter": self.params.d_filter,
                "d_remove": self.params.d_remove,
                "group_size": self.params.group_size,
            },
            "rounds": [r.to_record() for r in self.rounds],
            "G_input_sha256": self.G_input.digest(),
            "G_input_edges": self.G_input.sorted_edges(),
            "transcript": self.transcript.to_record(),
            "threshold": self.threshold,
            "output": sorted(self.A),
            "verdict": self.verdict.to_record() if self.verdict else None,
        }


def _summary_provider(player: Player, prefix: Sequence[Edge], prior: tuple[Message, ...]):
    if isinstance(player, StreamingPlayer):
        # Resume from the serialized post-prefix state; replay later checks this
        # agrees with running the player from scratch.
        alg = player.alg
        saved = alg.serialize(alg.run(prefix, player.start_state(prior)))

        def f(H: Graph) -> Message:
            return player.finish(alg.run(H.sorted_edges(), alg.deserialize(saved)))
    else:
        def f(H: Graph) -> Message:
            return player.respond(tuple(prefix) + tuple(H.sorted_edges()), prior)

    return lambda dist: f


def run_adversary(
    config: AdversaryConfig,
    alg: StreamingAlgorithm | Sequence[Player],
) -> AdversaryResult:
    params = config.resolve()
    n, delta, s, k = config.n, config.delta, config.s, params.k
    if isinstance(alg, StreamingAlgorithm):
        if alg.n != n:
            raise InvalidParameter(f"algorithm is for n={alg.n}, config has n={n}")
        players: Sequence[Player] = streaming_to_protocol(alg, k, s)
    else:
        players = list(alg)
        if len(players) != k:
            raise InvalidParameter(f"config needs {k} players, got {len(players)}")
    e_max = DEFAULT_E_MAX if config.e_max is None else config.e_max
    round_seeds = np.random.SeedSequence(config.seed).spawn(k)
    floor_size = n / delta ** 2

    vertices = frozenset(range(n))
    G_base = Graph.complete(n)
    R_in = Graph.empty(n)
    messages: list[Message] = []
    rounds: list[RoundRecord] = []
    for i in range(1, k + 1):
        rng_compress, rng_remove, rng_choose = (np.random.default_rng(x) for x in round_seeds[i - 1].spawn(3))
        player = players[i - 1]
        prior = tuple(messages)
        prefix = tuple(R_in.sorted_edges())
        n_i = len(vertices)
        if n_i < floor_size:
            H = Graph.empty(n)
            M = player.respond(prefix, prior)
            rec = RoundRecord(i, n_i, vertices, G_base, True, R_in, M, H, Graph.empty(n))
        else:
            g = params.group_size_for(n_i, n, delta)
            setup: CompressSetup = partition_and_compress(
                G_base,
                g,
                s,
                params.d_comp,
                params.d_filter,
                _summary_provider(player, prefix, prior),
                vertices=vertices,
                strict=config.strict,
                e_max=e_max,
                method=config.compression,
                rng=rng_compress,
                samples=config.mc_samples,
            )
            M = setup.phi
            R_next, removals = remove_cliques_partitioned(
                setup.H_miss,
                setup.parts,
                setup.Q,
                params.d_filter,
                params.d_remove,
                rng_remove,
                max_trials=config.lv_max_trials,
            )
            H = setup.classes.sample_member(M, rng_choose)
            rec = RoundRecord(
                i, n_i, vertices, G_base, False, R_in, M, H, R_next,
                group_size=g,
                H_base=setup.H_base,
                dist=setup.dist,
                parts=tuple(setup.parts),
                Q=setup.Q,
                H_miss=setup.H_miss,
                classes=setup.classes,
                removals=tuple(removals),
                checks=dict(setup.checks),
            )
            G_base = induced_subgraph(G_base - (setup.H_base - setup.H_miss), setup.Q)
            vertices = setup.Q
        messages.append(M)
        rounds.append(rec)
        R_in = rec.R_next

    inputs = tuple(tuple(r.R_in.sorted_edges()) + tuple(r.H.sorted_edges()) for r in rounds)
    G_input = union_all(n, (r.H | r.R_in for r in rounds))
    transcript = run_protocol(players, inputs, n=n, budget=s, max_degree=delta if config.strict else None)
    if list(transcript.messages) != messages:
        raise InternalConsistencyError("replaying the assembled input changed the transcript")
    result = AdversaryResult(
        config, params, rounds, inputs, G_input, transcript, players,
        threshold=threshold(n, delta, k, params.ell),
    )
    result.verdict = classify_output(result)
    return result


def classify_output(result: AdversaryResult) -> Verdict:
    A = result.A
    hit = edge_inside(result.G_input, A)
    if hit is not None:
        return AlreadyWrong(hit)
    broken = breaking_graph(result, A)
    if broken is not None:
        return broken
    if len(A) > result.threshold:
        if result.config.strict:
            raise InternalConsistencyError(f"output of size {len(A)} exceeds threshold but no breaking pair exists")
        return Unbroken(result.threshold, len(A))
    return SmallOutput(result.threshold, len(A))


def _located_pairs(result: AdversaryResult, A: frozenset[int]) -> list[Edge]:
    # Pigeonhole route: the round whose kept vertices meet A most, then its
    # part meeting A most.
    best_round = max(result.rounds, key=lambda r: len(r.L & A), default=None)
    if best_round is None or not best_round.parts:
        return []
    part = max(best_round.parts, key=lambda P: len(P & A))
    hits = sorted(part & A)
    return [(u, v) for x, u in enumerate(hits) for v in hits[x + 1:]]


def breaking_round(result: AdversaryResult, edge: Edge) -> int | None:
    """First round whose class for its message contains ``edge`` in some graph."""
    for r in result.rounds:
        if r.terminated:
            continue
        if edge in r.H_base.edges and edge not in r.H_miss.edges:
            return r.i
    return None


def substitute(result: AdversaryResult, j: int, H_new: Graph) -> tuple[tuple[tuple[Edge, ...], ...], Graph]:
    rounds = result.rounds
    inputs = tuple(
        tuple(r.R_in.sorted_edges()) + tuple((H_new if r.i == j else r.H).sorted_edges()) for r in rounds
    )
    G = union_all(result.config.n, ((H_new if r.i == j else r.H) | r.R_in for r in rounds))
    return inputs, G


def breaking_graph(result: AdversaryResult, A: frozenset[int]) -> AlreadyWrong | Broken | None:
    """Refute ``A`` with an input that yields the same transcript but has an edge inside ``A``.

    When ``A`` is above the threshold the pair is looked for in the part the
    counting argument points to; every other pair of ``A`` is tried after.
    Returns ``None`` when no pair of ``A`` can be refuted.
    """
    cfg = result.config
    hits = sorted(A)
    located = _located_pairs(result, A) if len(A) > result.threshold else []
    everything = [(u, v) for x, u in enumerate(hits) for v in hits[x + 1:]]
    seen: set[Edge] = set()
    for e in located + everything:
        if e in seen:
            continue
        seen.add(e)
        if e in result.G_input.edges:
            return AlreadyWrong(e)
        j = breaking_round(result, e)
        if j is None:
            continue
        rec = result.rounds[j - 1]
        witness = rec.classes.witness(rec.M, e)
        inputs, G_new = substitute(result, j, witness)
        replay = run_protocol(
            result.players, inputs, n=cfg.n, budget=cfg.s, max_degree=cfg.delta if cfg.strict else None
        )
        if replay.messages != result.transcript.messages:
            raise InternalConsistencyError(f"substituting round {j} changed the transcript")
        if e not in G_new.edges or not set(e) <= replay.final_output:
            raise InternalConsistencyError("breaking edge missing from the substituted input")
        if cfg.strict and located and e not in located:
            raise InternalConsistencyError("counting argument pointed at a part with no refutable pair")
        return Broken(e, j, witness, G_new, inputs, replay)
    if cfg.strict and located:
        raise InternalConsistencyError("output exceeds threshold but no pair could be refuted")
    return None


@dataclass
class VerificationReport:
    checks: dict[str, bool]
    required: dict[str, bool]
    details: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks[name] for name, req in self.required.items() if req)

    def lines(self) -> list[str]:
        out = []
        for name, passed in self.checks.items():
            tag = "PASS" if passed else ("FAIL" if self.required[name] else "info")
            extra = f"  {self.details[name]}" if name in self.details else ""
            out.append(f"{tag:4s} {name}{extra}")
        return out


def verify_result(result: AdversaryResult, config: AdversaryConfig | None = None) -> VerificationReport:
    """Re-check validity of the constructed input, replay fidelity, and the verdict."""
    cfg = result.config if config is None else config
    params = result.params
    n, delta = cfg.n, cfg.delta
    strict = cfg.strict
    rounds = result.rounds
    checks: dict[str, bool] = {}
    required: dict[str, bool] = {}
    details: dict[str, str] = {}

    def put(name: str, passed: bool, req: bool = True, detail: str | None = None) -> None:
        checks[name] = bool(passed)
        required[name] = req
        if detail:
            details[name] = detail

    sent = [r.H for r in rounds] + [r.R_in for r in rounds] + ([rounds[-1].R_next] if rounds else [])
    put("edge_disjoint", are_edge_disjoint(sent) if sent else True)
    rebuilt = union_all(n, (r.H | r.R_in for r in rounds))
    put("input_assembly", rebuilt == result.G_input)

    deg_ok = True
    for v in range(n):
        h_parts = [r.H.degrees[v] for r in rounds]
        r_parts = [r.R_in.degrees[v] for r in rounds]
        if result.G_input.degrees[v] != sum(h_parts) + sum(r_parts):
            deg_ok = False
        if any(d > 2 * params.d_comp for d in h_parts) or any(d > params.d_remove for d in r_parts):
            deg_ok = False
        if sum(1 for d in r_parts if d) > 1:
            deg_ok = False
    put("degree_decomposition", deg_ok)
    put("max_degree", result.G_input.max_degree <= delta, req=strict,
        detail=f"max degree {result.G_input.max_degree} vs delta {delta}")

    round_ok = True
    for idx, r in enumerate(rounds):
        if r.terminated:
            round_ok &= r.H.m == 0 and r.R_next.m == 0
            continue
        round_ok &= r.dist.contains(r.H)
        round_ok &= r.R_next <= r.H_miss and not edges_touching(r.R_next, r.Q)
        round_ok &= not (r.H.edges & r.H_miss.edges)
        if idx + 1 < len(rounds):
            nxt = rounds[idx + 1]
            expect = induced_subgraph(r.G_base - (r.H_base - r.H_miss), r.Q)
            round_ok &= nxt.G_base == expect and nxt.vertices == r.Q
    put("round_invariants", round_ok)

    floor_size = n / delta ** 2
    n_k = rounds[-1].n_i if rounds else 0
    put("final_base_small", n_k <= floor_size, req=strict, detail=f"n_k={n_k}, n/delta^2={floor_size:.4g}")
    max_parts = max((len(r.parts) for r in rounds), default=0)
    put("part_count", max_parts <= 3 * n / delta ** 2, req=strict,
        detail=f"max parts {max_parts}, 3n/delta^2={3 * n / delta ** 2:.4g}")
    shrink = all(
        rounds[i].n_i <= max(floor_size, n / math.e ** i) + 1e-9 for i in range(1, len(rounds))
    )
    put("shrinkage", shrink, req=strict)

    replay = run_protocol(result.players, result.inputs, n=n, budget=cfg.s,
                          max_degree=delta if strict else None)
    same = replay.messages == result.transcript.messages and all(
        m == r.M for m, r in zip(replay.messages, rounds)
    )
    put("replay", same)

    v = result.verdict
    A = result.A
    if isinstance(v, SmallOutput):
        sound = len(A) <= v.threshold
    elif isinstance(v, AlreadyWrong):
        sound = v.edge in result.G_input.edges and set(v.edge) <= A
    elif isinstance(v, Broken):
        again = run_protocol(result.players, v.inputs, n=n, budget=cfg.s, max_degree=delta if strict else None)
        graphs = [Graph.from_edges(n, x) for x in v.inputs]
        sound = (
            again.messages == result.transcript.messages
            and v.edge in v.G_input.edges
            and set(v.edge) <= again.final_output
            and are_edge_disjoint(graphs)
        )
    elif isinstance(v, Unbroken):
        sound = not strict
    else:
        sound = False
    put("verdict_sound", sound, detail=v.kind if v else "missing")

    report = VerificationReport(checks, required, details)
    if strict and not report.ok:
        failed = [name for name in checks if required[name] and not checks[name]]
        raise InternalConsistencyError(f"strict-mode checks failed: {failed}")
    return report


def corrupt_round(result: AdversaryResult, i: int, **changes) -> AdversaryResult:
    """Copy of ``result`` with round ``i`` fields replaced; for negative-control tests."""
    rounds = list(result.rounds)
    rounds[i - 1] = replace(rounds[i - 1], **changes)
    return replace(result, rounds=rounds)
