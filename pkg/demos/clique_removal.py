"""Destroying large cliques with low-degree edge sets, checked by the exact oracle."""
import math

import numpy as np

from isadversary import clique_number, remove_cliques_low_degree, split
from isadversary.cliques import clique_bound
from isadversary.graph import Graph

rng = np.random.default_rng(7)

K5 = Graph.complete(5)
r = remove_cliques_low_degree(K5, 4, rng)
print(f"K5, d=4: branch {r.branch}, removed {r.H.m} edges, clique left {clique_number(K5 - r.H)}")

# dense random graph on 40 vertices
iu, iv = np.triu_indices(40, 1)
keep = rng.random(len(iu)) < 0.5
G = Graph(40, frozenset(zip(iu[keep].tolist(), iv[keep].tolist())))
print(f"\nG: n=40 m={G.m} maxdeg={G.max_degree} clique number={clique_number(G)}")
for d in (3, 6, 12):
    for forced in (False, True):
        r = remove_cliques_low_degree(G, d, rng, force_sampling=forced)
        print(f"  d={d:2d} {r.branch:9s} trials={r.trials:3d}  removed maxdeg={r.H.max_degree}"
              f"  clique left={clique_number(G - r.H)}  bound={clique_bound(40, G.max_degree, d):.1f}")

# split off high-degree vertices
print()
for b in (5, 10, 20, 25):
    s = split(G, b)
    print(f"split b={b:2d}: |Q|={len(s.Q):2d} (bound {2 * G.m / b:.1f})")
