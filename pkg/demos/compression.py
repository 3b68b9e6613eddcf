"""Summaries of random subgraphs and the edges they are forced to miss."""
import math

from isadversary.compression import (
    GraphDistribution,
    classify,
    compression_bound,
    find_light_summary,
    hash_summary,
    parity_summary,
)
from isadversary.graph import Graph

# a triangle, edges kept with probability 1/2, max degree strictly below 2
K3 = Graph.complete(3)
dist = GraphDistribution(K3, 0.5, 2)
classes = classify(dist, parity_summary)
for msg in classes.messages:
    members = [g.sorted_edges() for g in classes.members(msg)]
    print(f"parity {msg.data[0]}: members {members}  missing {classes.missing_graph(msg).sorted_edges()}")
phi, miss = find_light_summary(dist, parity_summary, 1)
print("lightest summary:", phi.data[0], "missing edges:", miss.m)

# a larger base under the degree condition the counting bound needs
base = Graph.from_edges(8, [(i, (i + 1) % 8) for i in range(8)] + [(0, 4), (2, 6), (1, 5)])
p = 0.5
d = math.ceil(4 * math.log(2 * base.n) / p)
dist = GraphDistribution(base, p, d)
print(f"\nbase: n={base.n} m={base.m}, p={p}, d={d}, support size {2 ** base.m}")
for bits in (1, 2, 4, 6, 8):
    phi, miss = find_light_summary(dist, hash_summary(bits), bits, strict=True)
    c = classify(dist, hash_summary(bits))
    print(f"  {bits}-bit hash: {len(c.messages):3d} classes, lightest misses {miss.m} edges"
          f" (bound {compression_bound(bits, p):.2f})")

print("\nclass histogram, 2-bit hash:")
print(classify(dist, hash_summary(2)).histogram_csv(), end="")
