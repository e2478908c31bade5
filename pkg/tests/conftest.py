import numpy as np
import pytest

from ringsift import MultiGraph


def ring_graph(n, offset=0, extra=()):
    edges = [((i + offset), ((i + 1) % n + offset)) for i in range(n)]
    edges += list(extra)
    size = max(max(u, v) for u, v in edges) + 1
    return MultiGraph(size, edges)


def random_multigraph(rng, max_nodes=12, max_edges=18, allow_parallel=True):
    n = int(rng.integers(2, max_nodes + 1))
    m = int(rng.integers(0, max_edges + 1))
    edges = []
    for _ in range(m):
        u = int(rng.integers(n))
        v = int(rng.integers(n))
        if u == v:
            continue
        if not allow_parallel and ((u, v) in edges or (v, u) in edges):
            continue
        edges.append((u, v))
    return MultiGraph(n, edges)


@pytest.fixture
def k4():
    return MultiGraph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


@pytest.fixture
def c4():
    return ring_graph(4)


@pytest.fixture
def two_triangles_shared_edge():
    # nodes a,b,c,d = 0,1,2,3; edges ab,bc,ca,bd,dc
    return MultiGraph(4, [(0, 1), (1, 2), (2, 0), (1, 3), (3, 2)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
