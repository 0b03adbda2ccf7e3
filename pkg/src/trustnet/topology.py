"""Population structures: periodic 2D lattice and Barabasi-Albert scale-free graph.

Networks are immutable after construction (CSR-style adjacency), so any number
of simulation workers can share one instance.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

LATTICE = "lattice"
SCALE_FREE = "sf"
CUSTOM = "custom"


@dataclass(frozen=True)
class Network:
    """Undirected graph with sorted per-node adjacency.

    adjacency is stored as (indptr, indices): neighbors of node i are
    indices[indptr[i]:indptr[i+1]], sorted ascending. No self-loops, no
    duplicate edges.
    """

    node_count: int
    indptr: np.ndarray
    indices: np.ndarray
    kind: str
    side: int | None = None
    m: int | None = None
    degrees: np.ndarray = field(init=False, repr=False)
    edge_src: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        degrees = np.diff(self.indptr)
        object.__setattr__(self, "degrees", degrees)
        # Source node of each CSR slot; lets kernels scatter per-edge results.
        object.__setattr__(self, "edge_src", np.repeat(np.arange(self.node_count), degrees))

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def degree(self, i: int) -> int:
        return int(self.degrees[i])

    @property
    def edge_count(self) -> int:
        return int(self.indices.size // 2)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Each undirected edge once, smaller id first, lexicographic order."""
        for i in range(self.node_count):
            for j in self.neighbors(i):
                if i < j:
                    yield i, int(j)

    def write_edge_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["src", "dst"])
            writer.writerows(self.edges())


def _from_adjacency_sets(nbrs: list[set[int]], kind: str, side=None, m=None) -> Network:
    n = len(nbrs)
    degrees = np.fromiter((len(s) for s in nbrs), dtype=np.int64, count=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(degrees, out=indptr[1:])
    indices = np.empty(indptr[-1], dtype=np.int64)
    for i, s in enumerate(nbrs):
        indices[indptr[i] : indptr[i + 1]] = sorted(s)
    indptr.setflags(write=False)
    indices.setflags(write=False)
    return Network(n, indptr, indices, kind, side=side, m=m)


def build_lattice(side: int) -> Network:
    """side x side torus with von Neumann (k=4) neighborhoods.

    Node (r, c) has id r*side + c. For side=2 the wrapped neighbors coincide
    pairwise, so degrees drop to 2 after deduplication.
    """
    if side < 2:
        raise ValueError(f"lattice side must be >= 2, got {side}")
    nbrs: list[set[int]] = []
    for r in range(side):
        for c in range(side):
            nbrs.append(
                {
                    ((r - 1) % side) * side + c,
                    ((r + 1) % side) * side + c,
                    r * side + (c - 1) % side,
                    r * side + (c + 1) % side,
                }
            )
    return _from_adjacency_sets(nbrs, LATTICE, side=side)


def build_scale_free(n: int, m: int, rng: np.random.Generator) -> Network:
    """Barabasi-Albert preferential attachment.

    Starts from a complete graph on m+1 nodes; each arriving node attaches m
    edges to distinct existing nodes chosen with probability proportional to
    current degree. Same rng state -> identical edge list.
    """
    if m < 1:
        raise ValueError(f"attachment count m must be >= 1, got {m}")
    if n <= m:
        raise ValueError(f"need n > m, got n={n}, m={m}")
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for i in range(m + 1):
        for j in range(m + 1):
            if i != j:
                nbrs[i].add(j)
    # One entry per edge endpoint; uniform picks give degree-proportional targets.
    repeated: list[int] = []
    for i in range(m + 1):
        repeated.extend([i] * m)
    for source in range(m + 1, n):
        targets: set[int] = set()
        while len(targets) < m:
            targets.add(repeated[int(rng.integers(len(repeated)))])
        for t in targets:
            nbrs[source].add(t)
            nbrs[t].add(source)
            repeated.append(t)
        repeated.extend([source] * m)
    return _from_adjacency_sets(nbrs, SCALE_FREE, m=m)


def build_from_edges(n: int, edges: Iterable[tuple[int, int]], kind: str = CUSTOM) -> Network:
    """Network from an explicit undirected edge list (mainly for tests/oracles)."""
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for i, j in edges:
        if i == j:
            raise ValueError(f"self-loop on node {i}")
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge ({i},{j}) out of range for n={n}")
        nbrs[i].add(j)
        nbrs[j].add(i)
    return _from_adjacency_sets(nbrs, kind)


def _require_lattice(net: Network) -> int:
    if net.kind != LATTICE or net.side is None:
        raise ValueError(f"operation requires a lattice network, got kind={net.kind!r}")
    return net.side


def lattice_distance(net: Network, i: int, j: int) -> int:
    """Manhattan distance on the torus (the graph distance of this lattice)."""
    side = _require_lattice(net)
    ri, ci = divmod(i, side)
    rj, cj = divmod(j, side)
    dr = abs(ri - rj)
    dc = abs(ci - cj)
    return min(dr, side - dr) + min(dc, side - dc)


def _displacements_at_distance(side: int, l: int) -> list[tuple[int, int]]:
    """All (dr, dc) in Z_side x Z_side, excluding (0,0), with torus L1 norm l."""
    out = []
    for dr in range(side):
        adr = min(dr, side - dr)
        if adr > l:
            continue
        for dc in range(side):
            adc = min(dc, side - dc)
            if (dr or dc) and adr + adc == l:
                out.append((dr, dc))
    return out


def pairs_at_distance(net: Network, l: int) -> tuple[int, Iterator[tuple[int, int]]]:
    """Count and iterator over unordered node pairs at torus L1 distance l."""
    side = _require_lattice(net)
    if l <= 0:
        raise ValueError(f"distance must be positive, got {l}")
    disp = _displacements_at_distance(side, l)
    count = len(disp) * side * side // 2

    def gen():
        for r in range(side):
            for c in range(side):
                i = r * side + c
                for dr, dc in disp:
                    j = ((r + dr) % side) * side + (c + dc) % side
                    if i < j:
                        yield i, j

    return count, gen()


def nodes_at_distance(net: Network, focal: int, l: int) -> np.ndarray:
    """Sorted ids of all nodes at torus L1 distance l from focal."""
    side = _require_lattice(net)
    if l <= 0:
        raise ValueError(f"distance must be positive, got {l}")
    r, c = divmod(focal, side)
    ids = [
        ((r + dr) % side) * side + (c + dc) % side
        for dr, dc in _displacements_at_distance(side, l)
    ]
    return np.unique(np.array(ids, dtype=np.int64))
