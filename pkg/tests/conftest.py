import itertools

import numpy as np
from hypothesis import settings, strategies as st

from isadversary.graph import Graph

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=0, max_n=10, p=None):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    if p is None:
        keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    else:
        seed = draw(st.integers(0, 2**32 - 1))
        keep = (np.random.default_rng(seed).random(len(pairs)) < p).tolist()
    return Graph(n, frozenset(e for e, k in zip(pairs, keep) if k))


def random_graph(rng, n, p):
    iu, iv = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    return Graph(n, frozenset(zip(iu[keep].tolist(), iv[keep].tolist())))


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star(leaves):
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def brute_clique_number(G):
    # Independent of the bitset search: scans subsets by decreasing size.
    for size in range(G.n, 0, -1):
        for sub in itertools.combinations(range(G.n), size):
            if all(G.has_edge(u, v) for u, v in itertools.combinations(sub, 2)):
                return size
    return 0


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
