"""Two baseline streaming algorithms on a few graphs."""
import math

import numpy as np

from isadversary import caro_wei_sum, generate, is_independent, measure_peak_state
from isadversary.streaming import DetSubsample, RandPermutation

graphs = {
    "turan(24, 6)": generate({"kind": "turan", "n": 24, "r": 6}),
    "4-regular on 30": generate({"kind": "regular", "n": 30, "d": 4}, seed=1),
    "gnp(30, 0.1)": generate({"kind": "gnp", "n": 30, "p": 0.1}, seed=2),
}

for name, G in graphs.items():
    delta = G.max_degree
    stream = G.sorted_edges()

    # keep the ceil(n/delta) lowest ids and every edge among them
    det = DetSubsample(G.n, delta)
    A = det.output(stream)
    print(f"{name}: n={G.n} m={G.m} maxdeg={delta}")
    print(f"  det-subsample  |A|={len(A)}  guarantee={math.ceil(G.n / delta) / (delta + 1):.2f}"
          f"  peak state={measure_peak_state(det, stream)} bits  independent={is_independent(G, A)}")

    # random order, mark the later endpoint of every edge
    sizes = [len(RandPermutation(G.n, seed).output(stream)) for seed in range(2000)]
    print(f"  rand-perm      mean |A|={np.mean(sizes):.3f}  Caro-Wei sum={float(caro_wei_sum(G)):.3f}")
