import json
import math

import mpmath
import pytest

from isadversary.adversary import (
    AdversaryConfig,
    AlreadyWrong,
    Broken,
    SmallOutput,
    Unbroken,
    corrupt_round,
    derive_params,
    run_adversary,
    simplified_threshold,
    regime_violations,
    threshold,
    verify_result,
)
from isadversary.errors import InvalidParameter, ParameterDomainError
from isadversary.graph import Graph
from isadversary.oracles import is_independent
from isadversary.streaming import make_algorithm

mpmath.mp.dps = 50


def mp_params(n, s):
    ell = max(int(mpmath.ceil(2 * mpmath.e * mpmath.log(2) * (s + 1) / n)), int(mpmath.ceil(8 * mpmath.log(n))))
    return ell, int(mpmath.ceil(mpmath.log(n))) + 1


def mp_threshold(n, delta, k, ell):
    base = mpmath.mpf(n) / mpmath.mpf(delta) ** 2
    return base + base * k * (96 * mpmath.mpf(ell) ** 2 * mpmath.log(n) + 30)


def small(n=12, delta=3, **kw):
    base = dict(n=n, delta=delta, s=256, k=2, ell=2, group_size=3, d_comp=1, d_filter=1, d_remove=1)
    base.update(kw)
    return AdversaryConfig(**base)


def test_param_examples():
    assert derive_params(1000, 10, 1000, strict=False) == (56, 8)
    assert derive_params(3, 1, 3, strict=False)[1] == 3
    for n in range(17, 400):
        assert math.ceil(2 * math.e * math.log(2) * (n + 1) / n) == 4
    # at n = 16 the first term still rounds up to 5
    assert math.ceil(2 * math.e * math.log(2) * 17 / 16) == 5 == int(mpmath.ceil(2 * mpmath.e * mpmath.log(2) * 17 / 16))


def test_threshold_examples():
    assert threshold(100, 5, 0, 7) == 4
    assert threshold(100, 5, 1, 0) == pytest.approx(4 * 31, rel=1e-15)
    expect = 10 * (1 + 8 * (96 * 3136 * math.log(1000) + 30))
    assert threshold(1000, 10, 8, 56) == pytest.approx(expect, rel=1e-12)
    assert float(mp_threshold(1000, 10, 8, 56)) == pytest.approx(expect, rel=1e-12)


@pytest.mark.parametrize("n,s", [(1000, 1000), (50, 5000), (3, 3), (16, 16), (10**6, 10**9)])
def test_params_match_high_precision(n, s):
    assert derive_params(n, 2, s, strict=False) == mp_params(n, s)


def test_simplified_threshold_formula():
    r = 128 * mpmath.e * mpmath.log(2)
    n, delta, s = 10**6, 900, 10**6
    ref = 1152 * r ** 2 * mpmath.log(n) ** 4 * mpmath.mpf(s) ** 2 / (n * delta ** 2)
    assert simplified_threshold(n, delta, s) == pytest.approx(float(ref), rel=1e-12)


def test_strict_mode_rejects_desk_scale():
    assert regime_violations(1000, 30, 1000)
    with pytest.raises(ParameterDomainError):
        derive_params(1000, 30, 1000)
    with pytest.raises(ParameterDomainError):
        run_adversary(AdversaryConfig(n=12, delta=3, s=256, mode="strict"), make_algorithm("det-subsample", 12, 3))
    with pytest.raises(InvalidParameter):
        AdversaryConfig(n=12, delta=3, s=256, mode="strict", ell=2)


def test_config_validation():
    with pytest.raises(InvalidParameter):
        AdversaryConfig(n=12, delta=3, s=256, mode="loose")
    with pytest.raises(InvalidParameter):
        AdversaryConfig.from_mapping({"n": 12, "delta": 3, "s": 256, "bogus": 1})
    with pytest.raises(InvalidParameter):
        small(d_comp=-1)
    cfg = small()
    assert AdversaryConfig.from_mapping(cfg.to_mapping()) == cfg
    with pytest.raises(InvalidParameter):
        run_adversary(cfg, make_algorithm("det-subsample", 13, 3))


def test_lowest_vertex_small_output():
    r = run_adversary(small(), make_algorithm("lowest-vertex", 12, 3))
    assert isinstance(r.verdict, SmallOutput) and len(r.A) == 1
    assert verify_result(r).ok


def test_det_subsample_tiny_config():
    r = run_adversary(small(), make_algorithm("det-subsample", 12, 3))
    rep = verify_result(r)
    assert rep.ok and all(rep.checks.values()), rep.lines()
    assert is_independent(r.G_input, r.A)


def test_claim_all_is_refuted_with_edge():
    r = run_adversary(small(), make_algorithm("claim-all", 12, 3))
    v = r.verdict
    assert isinstance(v, (AlreadyWrong, Broken))
    assert set(v.edge) <= r.A
    G = v.G_input if isinstance(v, Broken) else r.G_input
    assert v.edge in G.edges and not is_independent(G, r.A)
    assert verify_result(r).ok


def test_claim_fixed_broken_by_substitution():
    r = run_adversary(small(), make_algorithm("claim-fixed", 12, 3))
    v = r.verdict
    assert isinstance(v, Broken)
    assert v.edge not in r.G_input.edges and v.edge in v.G_input.edges
    assert v.transcript.messages == r.transcript.messages
    assert not is_independent(v.G_input, v.transcript.final_output)
    assert v.witness <= r.rounds[v.round - 1].H_base


def test_already_wrong_through_removal_edges():
    r = run_adversary(small(n=16, k=3), make_algorithm("parity-guess", 16, 3))
    assert isinstance(r.verdict, AlreadyWrong)
    R_edges = set().union(*(x.R_in.edges for x in r.rounds))
    assert R_edges
    assert verify_result(r).ok


def test_multi_round_dynamics():
    r = run_adversary(small(n=16, k=3), make_algorithm("det-subsample", 16, 3))
    first, second, third = r.rounds
    assert first.H_miss.m > 0 and len(first.Q) == 2
    assert not second.terminated and second.n_i == 2 and second.vertices == first.Q
    assert third.terminated
    rep = verify_result(r)
    assert rep.ok
    # the part-count bound belongs to the asymptotic regime and is informational here
    assert not rep.required["part_count"]


def test_empty_input_run():
    cfg = small(group_size=1, k=3)
    r = run_adversary(cfg, make_algorithm("det-subsample", 12, 3))
    assert r.G_input.m == 0
    assert all(x.terminated for x in r.rounds[1:])
    rep = verify_result(r)
    assert rep.ok and all(v for k, v in rep.checks.items() if rep.required[k])


def test_corrupted_removal_fails_disjointness():
    r = run_adversary(small(n=16, k=3), make_algorithm("parity-guess", 16, 3, seed=0))
    dup = next(iter(r.rounds[0].H.edges or r.rounds[1].R_in.edges))
    bad = corrupt_round(r, 2, R_in=r.rounds[1].R_in | Graph.from_edges(16, [dup]))
    if dup in r.rounds[1].R_in.edges:
        bad = corrupt_round(r, 1, H=r.rounds[0].H | Graph.from_edges(16, [dup]))
    rep = verify_result(bad)
    assert not rep.checks["edge_disjoint"] and not rep.ok
    assert verify_result(r).ok


def test_corrupted_message_fails_replay():
    r = run_adversary(small(), make_algorithm("det-subsample", 12, 3))
    bad = corrupt_round(r, 1, M=r.rounds[1].M)
    assert not verify_result(bad).checks["replay"]


def test_unbroken_outside_regime():
    cfg = AdversaryConfig(n=12, delta=11, s=256, k=1, ell=0.01, group_size=1)
    r = run_adversary(cfg, make_algorithm("claim-fixed", 12, 11))
    assert r.threshold < len(r.A)
    assert isinstance(r.verdict, Unbroken)
    rep = verify_result(r)
    assert rep.ok


def test_counting_route_breaks_large_output():
    cfg = AdversaryConfig(n=12, delta=11, s=256, k=1, ell=0.01, group_size=4, d_comp=2, d_filter=2, d_remove=1)
    r = run_adversary(cfg, make_algorithm("claim-fixed", 12, 11))
    assert len(r.A) > r.threshold
    assert isinstance(r.verdict, (Broken, AlreadyWrong))
    assert verify_result(r).ok


def test_report_is_deterministic():
    cfg = small(n=16, k=3, seed=5)
    a = run_adversary(cfg, make_algorithm("det-subsample", 16, 3)).to_report()
    b = run_adversary(cfg, make_algorithm("det-subsample", 16, 3)).to_report()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert a["rounds"][0]["missing_edges"] == 4
