"""Graph generators, seeded experiments, and CSV/JSON reporting."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import networkx as nx
import numpy as np

from .adversary import AdversaryConfig, run_adversary, threshold, verify_result
from .errors import AdversaryError, InvalidParameter
from .graph import Graph
from .oracles import caro_wei_sum, is_independent
from .protocol import ProtocolViolation
from .streaming import make_algorithm, measure_peak_state


def turan(n: int, r: int) -> Graph:
    """Complete ``r``-partite graph on ``n`` vertices with near-equal parts (part of ``v`` is ``v % r``)."""
    if r < 1:
        raise InvalidParameter(f"turan needs r >= 1, got {r}")
    return Graph.from_edges(n, ((u, v) for u in range(n) for v in range(u + 1, n) if u % r != v % r))


def gnp(n: int, p: float, rng: np.random.Generator) -> Graph:
    if not 0 <= p <= 1:
        raise InvalidParameter(f"edge probability must be in [0, 1], got {p}")
    iu, iv = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    return Graph(n, frozenset(zip(iu[keep].tolist(), iv[keep].tolist())))


def random_regular(n: int, d: int, rng: np.random.Generator) -> Graph:
    if (n * d) % 2 or d >= n or d < 0:
        raise InvalidParameter(f"no simple {d}-regular graph on {n} vertices")
    seed = int(rng.integers(0, 2**32))
    g = nx.random_regular_graph(d, n, seed=seed)
    return Graph.from_edges(n, g.edges())


def generate(spec: dict[str, Any], seed: int | np.random.SeedSequence = 0) -> Graph:
    """Build a graph from ``{"kind": ..., "n": ..., ...}``; randomness comes only from ``seed``."""
    rng = np.random.default_rng(seed)
    kind = spec.get("kind")
    if kind == "clique":
        return Graph.complete(int(spec["n"]))
    if kind == "empty":
        return Graph.empty(int(spec["n"]))
    if kind == "turan":
        return turan(int(spec["n"]), int(spec["r"]))
    if kind == "gnp":
        return gnp(int(spec["n"]), float(spec["p"]), rng)
    if kind == "regular":
        return random_regular(int(spec["n"]), int(spec["d"]), rng)
    if kind == "file":
        return Graph.from_edgelist(Path(spec["path"]).read_text())
    raise InvalidParameter(f"unknown generator kind {kind!r}")


def parse_generator(text: str) -> dict[str, Any]:
    """``"turan:n=12,r=4"`` -> ``{"kind": "turan", "n": 12, "r": 4}``."""
    kind, _, rest = text.partition(":")
    spec: dict[str, Any] = {"kind": kind}
    for item in filter(None, rest.split(",")):
        key, _, value = item.partition("=")
        spec[key] = _scalar(value)
    return spec


def _scalar(value: str) -> Any:
    try:
        return json.loads(value)
    except json.JSONDecodeError:
        return value


def load_config(path: str | Path) -> dict[str, Any]:
    """Flat key-value config: a JSON object, or ``key = value`` lines with ``#`` comments."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return json.loads(text)
    out: dict[str, Any] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise InvalidParameter(f"config line is not key = value: {raw!r}")
        out[key.strip()] = _scalar(value.strip())
    return out


@dataclass
class ExperimentSpec:
    generator: dict[str, Any]
    algorithm: str
    budget: int
    delta: int | None = None
    repetitions: int = 1
    seed: int = 0
    adversary: dict[str, Any] | None = None
    name: str = "exp"

    def __post_init__(self) -> None:
        if self.repetitions < 1:
            raise InvalidParameter("repetitions must be >= 1")


ROW_FIELDS = [
    "experiment", "repetition", "n", "m", "max_degree", "algorithm", "output_size",
    "bound_n_over_delta_plus_1", "bound_n_over_delta_sq", "threshold", "caro_wei",
    "peak_state_bits", "verdict", "status",
]


@dataclass
class Report:
    rows: list[dict[str, Any]] = field(default_factory=list)
    timing: bool = False

    @property
    def ok(self) -> bool:
        return all(r["status"] == "ok" for r in self.rows)

    def mean_output_size(self, experiment: str | None = None) -> float:
        sizes = [r["output_size"] for r in self.rows if experiment in (None, r["experiment"])]
        return float(np.mean(sizes))

    def to_csv(self) -> str:
        fields = ROW_FIELDS + (["wall_time_s"] if self.timing else [])
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n", extrasaction="ignore")
        writer.writeheader()
        writer.writerows(self.rows)
        return buf.getvalue()

    def aggregate(self) -> list[dict[str, Any]]:
        out = []
        for name in dict.fromkeys(r["experiment"] for r in self.rows):
            rows = [r for r in self.rows if r["experiment"] == name]
            out.append({
                "experiment": name,
                "repetitions": len(rows),
                "mean_output_size": float(np.mean([r["output_size"] for r in rows])),
                "mean_caro_wei": float(np.mean([r["caro_wei"] for r in rows])),
                "all_ok": all(r["status"] == "ok" for r in rows),
            })
        return out


def run_experiment(spec: ExperimentSpec, *, timing: bool = False) -> Report:
    """Run ``spec.repetitions`` seeded repetitions, validating every claimed set.

    Repetition ``r`` draws from child ``r`` of the experiment's seed sequence,
    so adding repetitions does not change earlier rows.
    """
    report = Report(timing=timing)
    children = np.random.SeedSequence(spec.seed).spawn(spec.repetitions)
    for rep, child in enumerate(children):
        graph_seed, alg_seed, adv_seed = child.spawn(3)
        t0 = time.perf_counter()
        G = generate(spec.generator, graph_seed)
        delta = spec.delta if spec.delta is not None else max(1, G.max_degree)
        row: dict[str, Any] = {
            "experiment": spec.name,
            "repetition": rep,
            "n": G.n,
            "m": G.m,
            "max_degree": G.max_degree,
            "algorithm": spec.algorithm,
            "bound_n_over_delta_plus_1": G.n / (delta + 1),
            "bound_n_over_delta_sq": G.n / delta ** 2,
            "caro_wei": float(caro_wei_sum(G)),
            "verdict": "",
        }
        status = "ok"
        try:
            seed_int = int(alg_seed.generate_state(1, np.uint64)[0])
            if spec.adversary is not None:
                cfg = AdversaryConfig.from_mapping(
                    {"n": G.n, "delta": delta, "s": spec.budget,
                     "seed": int(adv_seed.generate_state(1)[0]), **spec.adversary}
                )
                alg = make_algorithm(spec.algorithm, G.n, delta, seed_int)
                result = run_adversary(cfg, alg)
                if not verify_result(result).ok:
                    status = "verification-failed"
                row.update(output_size=len(result.A), threshold=result.threshold,
                           verdict=result.verdict.kind, peak_state_bits=max(m.nbits for m in result.transcript.messages))
            else:
                alg = make_algorithm(spec.algorithm, G.n, delta, seed_int)
                stream = G.sorted_edges()
                peak = measure_peak_state(alg, stream)
                A = alg.output(stream)
                ell = max(math.ceil(2 * math.e * math.log(2) * (spec.budget + 1) / G.n), math.ceil(8 * math.log(G.n)))
                k = math.ceil(math.log(G.n)) + 1
                row.update(output_size=len(A), threshold=threshold(G.n, delta, k, ell), peak_state_bits=peak)
                if peak > spec.budget:
                    status = "budget-violation"
                elif not is_independent(G, A):
                    status = "not-independent"
        except (AdversaryError, ProtocolViolation) as exc:
            status = f"error: {type(exc).__name__}"
            row.setdefault("output_size", 0)
            row.setdefault("threshold", "")
            row.setdefault("peak_state_bits", "")
        row["status"] = status
        if timing:
            row["wall_time_s"] = round(time.perf_counter() - t0, 6)
        report.rows.append(row)
    return report


def spec_from_mapping(data: dict[str, Any]) -> ExperimentSpec:
    data = dict(data)
    gen = data.get("generator")
    if isinstance(gen, str):
        data["generator"] = parse_generator(gen)
    return ExperimentSpec(**data)


def to_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(obj: Any):
    if isinstance(obj, (frozenset, set)):
        return sorted(obj)
    if isinstance(obj, tuple):
        return list(obj)
    if hasattr(obj, "__dataclass_fields__"):
        return asdict(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")
