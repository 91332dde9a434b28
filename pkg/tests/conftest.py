import numpy as np
import pytest

from hypgeom import Graph


def make_tripod(arm: int) -> Graph:
    """Three rays of the given length glued at a center vertex (vertex 0)."""
    edges = []
    nxt = 1
    for _ in range(3):
        prev = 0
        for _ in range(arm):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Graph(nxt, edges, base=0)


def random_connected(n: int, p: float, rng) -> Graph:
    """Erdos-Renyi sample conditioned on connectivity (resample until hit)."""
    while True:
        mask = rng.random((n, n)) < p
        iu = np.triu_indices(n, k=1)
        edges = [(int(i), int(j)) for i, j in zip(*iu) if mask[i, j]]
        try:
            return Graph(n, edges, base=0)
        except Exception:
            continue


def bfs_lengths(adj: dict, source):
    """Plain dict-and-list BFS, independent of the package internals."""
    seen = {source: 0}
    frontier = [source]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in seen:
                    seen[v] = seen[u] + 1
                    nxt.append(v)
        frontier = nxt
    return seen


def adjacency_dict(g: Graph) -> dict:
    return {v: [int(u) for u in g.neighbors(v)] for v in range(g.n)}


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
