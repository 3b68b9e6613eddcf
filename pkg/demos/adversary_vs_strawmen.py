"""The adversary against a correct algorithm and several broken ones."""
from isadversary import AdversaryConfig, run_adversary, verify_result
from isadversary.streaming import make_algorithm

cfg = AdversaryConfig(n=16, delta=3, s=512, k=3, ell=2, group_size=3, d_comp=1, d_filter=1, d_remove=1, seed=0)
params = cfg.resolve()
print(f"n={cfg.n} k={params.k} group size={params.group_size} d_comp={params.d_comp} "
      f"d_filter={params.d_filter} d_remove={params.d_remove}")

for name in ("det-subsample", "lowest-vertex", "claim-all", "claim-fixed", "parity-guess"):
    result = run_adversary(cfg, make_algorithm(name, cfg.n, cfg.delta))
    check = verify_result(result)
    print(f"\n{name}: output {sorted(result.A)}")
    for r in result.rounds:
        if r.terminated:
            print(f"  round {r.i}: n_i={r.n_i}, terminated")
        else:
            print(f"  round {r.i}: n_i={r.n_i}, {len(r.classes.messages)} classes, missing={r.H_miss.m}, "
                  f"|Q|={len(r.Q)}, H={r.H.m} edges, next R={r.R_next.m} edges")
    v = result.verdict
    detail = f" edge {v.edge}" if hasattr(v, "edge") else ""
    if v.kind == "Broken":
        detail += f", substituted round {v.round} with a {v.witness.m}-edge graph, same transcript"
    print(f"  verdict {v.kind}{detail}; checks {'ok' if check.ok else 'FAILED'}")
