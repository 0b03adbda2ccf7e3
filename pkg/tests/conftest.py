import numpy as np
import pytest

from trustnet.topology import build_from_edges, build_lattice


@pytest.fixture
def lattice4():
    return build_lattice(4)


@pytest.fixture
def lattice32():
    return build_lattice(32)


@pytest.fixture
def star5():
    """Focal node 0 with four leaf neighbors 1..4."""
    return build_from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)])


def random_connected_graph(n: int, rng: np.random.Generator):
    """Random tree plus a few extra edges; used as an oracle instance."""
    edges = {(int(min(i, j)), int(max(i, j))) for i, j in
             ((k, rng.integers(k)) for k in range(1, n))}
    for _ in range(int(rng.integers(0, n))):
        i, j = rng.integers(n), rng.integers(n)
        if i != j:
            edges.add((int(min(i, j)), int(max(i, j))))
    return build_from_edges(n, sorted(edges))
