"""Undirected simple graphs with a fixed node set and mutable edges.

Adjacency is stored as a padded integer matrix ``nbr`` of shape
``(n, capacity)`` together with a degree vector ``deg``; row ``i`` holds the
neighbors of ``i`` in ``nbr[i, :deg[i]]``.  This layout lets the compiled
dynamics kernels mutate the topology in place.  The row order is an
implementation detail but it is deterministic, so seeded trajectories are
reproducible.
"""
from __future__ import annotations

from pathlib import Path
from typing import Iterable, Iterator

import numba
import numpy as np


class ParameterError(ValueError):
    """Raised when a generator or model parameter is out of range."""


class ContractError(ValueError):
    """Raised when an operation is called with a violated precondition."""


# ---------------------------------------------------------------------------
# array primitives shared with the dynamics kernels
# ---------------------------------------------------------------------------

@numba.njit(cache=True)
def draw_index(rng, n):
    """Uniform integer in ``[0, n)`` from a single ``rng.random()`` draw."""
    k = int(rng.random() * n)
    if k >= n:  # guards against rounding when n is huge
        k = n - 1
    return k


@numba.njit(cache=True)
def has_arc(nbr, deg, i, j):
    for p in range(deg[i]):
        if nbr[i, p] == j:
            return True
    return False


@numba.njit(cache=True)
def add_arc_pair(nbr, deg, i, j):
    nbr[i, deg[i]] = j
    deg[i] += 1
    nbr[j, deg[j]] = i
    deg[j] += 1


@numba.njit(cache=True)
def _drop_arc(nbr, deg, i, j):
    last = deg[i] - 1
    for p in range(deg[i]):
        if nbr[i, p] == j:
            nbr[i, p] = nbr[i, last]
            nbr[i, last] = -1
            deg[i] = last
            return True
    return False


@numba.njit(cache=True)
def remove_arc_pair(nbr, deg, i, j):
    _drop_arc(nbr, deg, i, j)
    _drop_arc(nbr, deg, j, i)


@numba.njit(cache=True)
def collect_distance_two(nbr, deg, i, seen, out):
    """Write the nodes at distance exactly two from ``i`` into ``out``.

    Returns the count; ``out[:count]`` is sorted ascending.  ``seen`` is a
    boolean scratch array of length n that must be all False on entry and is
    left all False on exit.
    """
    seen[i] = True
    for p in range(deg[i]):
        seen[nbr[i, p]] = True
    count = 0
    for p in range(deg[i]):
        u = nbr[i, p]
        for r in range(deg[u]):
            w = nbr[u, r]
            if not seen[w]:
                seen[w] = True
                out[count] = w
                count += 1
    seen[i] = False
    for p in range(deg[i]):
        seen[nbr[i, p]] = False
    for c in range(count):
        seen[out[c]] = False
    out[:count].sort()
    return count


# ---------------------------------------------------------------------------
# Graph
# ---------------------------------------------------------------------------

class Graph:
    """Undirected simple graph on nodes ``0..n-1``.

    Self-loops and parallel edges are rejected.  The adjacency matrix always
    keeps at least one spare column, so a kernel may add one arc to any node
    before the capacity has to grow.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), capacity: int = 8):
        if n < 1:
            raise ParameterError(f"node count must be positive, got {n}")
        self.n = int(n)
        self.nbr = np.full((self.n, max(2, capacity)), -1, dtype=np.int64)
        self.deg = np.zeros(self.n, dtype=np.int64)
        self._m = 0
        for u, v in edges:
            self.add_edge(int(u), int(v))

    # -- basic queries -----------------------------------------------------

    @property
    def node_count(self) -> int:
        return self.n

    @property
    def edge_count(self) -> int:
        return self._m

    @property
    def capacity(self) -> int:
        return self.nbr.shape[1]

    @property
    def avg_degree(self) -> float:
        return 2.0 * self._m / self.n

    def degree(self, i: int) -> int:
        return int(self.deg[i])

    def neighbors(self, i: int) -> set[int]:
        return set(self.nbr[i, : self.deg[i]].tolist())

    def has_edge(self, i: int, j: int) -> bool:
        return bool(has_arc(self.nbr, self.deg, i, j))

    def edges(self) -> list[tuple[int, int]]:
        """All edges as ``(u, v)`` with ``u < v``, sorted lexicographically."""
        out = []
        for u in range(self.n):
            for v in self.nbr[u, : self.deg[u]].tolist():
                if u < v:
                    out.append((u, v))
        out.sort()
        return out

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.edges())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges() == other.edges()

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self._m})"

    def copy(self) -> "Graph":
        g = Graph.__new__(Graph)
        g.n = self.n
        g.nbr = self.nbr.copy()
        g.deg = self.deg.copy()
        g._m = self._m
        return g

    def edge_array(self) -> np.ndarray:
        """Edges as an ``(m, 2)`` int array with ``u < v`` (sorted)."""
        e = self.edges()
        return np.array(e, dtype=np.int64).reshape(len(e), 2)

    # -- mutation ------------------------------------------------------------

    def ensure_capacity(self) -> None:
        """Grow the adjacency matrix so every row keeps a spare slot."""
        need = int(self.deg.max()) + 1 if self.n else 1
        if need <= self.capacity:
            return
        cap = self.capacity
        while cap < need:
            cap *= 2
        grown = np.full((self.n, cap), -1, dtype=np.int64)
        grown[:, : self.capacity] = self.nbr
        self.nbr = grown

    def _check_node(self, i: int) -> None:
        if not 0 <= i < self.n:
            raise ContractError(f"node {i} outside 0..{self.n - 1}")

    def add_edge(self, u: int, v: int) -> None:
        self._check_node(u)
        self._check_node(v)
        if u == v:
            raise ContractError(f"self-loop ({u}, {v}) is not allowed")
        if self.has_edge(u, v):
            raise ContractError(f"edge ({u}, {v}) already present")
        add_arc_pair(self.nbr, self.deg, u, v)
        self._m += 1
        self.ensure_capacity()

    def remove_edge(self, u: int, v: int) -> None:
        if not self.has_edge(u, v):
            raise ContractError(f"edge ({u}, {v}) not present")
        remove_arc_pair(self.nbr, self.deg, u, v)
        self._m -= 1

    def _resync_edge_count(self) -> None:
        self._m = int(self.deg.sum()) // 2

    def check(self) -> None:
        """Assert the structural invariants; raises ``AssertionError``."""
        seen = set()
        for u in range(self.n):
            row = self.nbr[u, : self.deg[u]].tolist()
            assert len(row) == len(set(row)), f"parallel edge at node {u}"
            assert u not in row, f"self-loop at node {u}"
            assert np.all(self.nbr[u, self.deg[u]:] == -1)
            for v in row:
                assert u in self.nbr[v, : self.deg[v]], f"asymmetric arc {u}->{v}"
                seen.add((min(u, v), max(u, v)))
        assert len(seen) == self._m
        assert int(self.deg.sum()) == 2 * self._m


# ---------------------------------------------------------------------------
# generators and operations
# ---------------------------------------------------------------------------

def _decode_pairs(idx: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    # index k enumerates pairs (u, v), u < v, row-major by u
    idx = idx.astype(np.int64)
    total = n * (n - 1) // 2
    rev = total - 1 - idx
    # reversed index counts pairs from the end; row from the end is triangular
    t = ((np.sqrt(8.0 * rev + 1.0) - 1.0) / 2.0).astype(np.int64)
    t -= (t * (t + 1) // 2 > rev)
    t += ((t + 1) * (t + 2) // 2 <= rev)
    u = n - 2 - t
    start = u * (2 * n - u - 1) // 2
    v = idx - start + u + 1
    return u, v


def random_graph(n: int, m: int, rng: np.random.Generator) -> Graph:
    """G(n, m): ``m`` distinct node pairs drawn uniformly without replacement."""
    if n < 1:
        raise ParameterError(f"node count must be positive, got {n}")
    total = n * (n - 1) // 2
    if not 0 <= m <= total:
        raise ParameterError(f"edge count {m} outside [0, {total}] for n={n}")
    g = Graph(n, capacity=8)
    if m == 0:
        return g
    idx = np.sort(rng.choice(total, size=m, replace=False))
    u, v = _decode_pairs(idx, n)
    deg = np.bincount(np.concatenate([u, v]), minlength=n)
    cap = 8
    while cap <= deg.max():
        cap *= 2
    g.nbr = np.full((n, cap), -1, dtype=np.int64)
    for a, b in zip(u.tolist(), v.tolist()):
        add_arc_pair(g.nbr, g.deg, a, b)
    g._m = m
    return g


def lattice_graph(side: int) -> Graph:
    """Periodic ``side x side`` square lattice, von Neumann neighborhood."""
    if side < 3:
        raise ParameterError(f"lattice side must be >= 3, got {side}")
    g = Graph(side * side, capacity=8)
    for r in range(side):
        for c in range(side):
            i = r * side + c
            add_arc_pair(g.nbr, g.deg, i, r * side + (c + 1) % side)
            add_arc_pair(g.nbr, g.deg, i, ((r + 1) % side) * side + c)
    g._m = 2 * side * side
    return g


def distance_two_set(g: Graph, i: int) -> set[int]:
    """Nodes exactly two hops from ``i``: neighbors of neighbors, minus ``i`` and its neighbors."""
    g._check_node(i)
    out = np.empty(g.n, dtype=np.int64)
    seen = np.zeros(g.n, dtype=np.bool_)
    c = collect_distance_two(g.nbr, g.deg, i, seen, out)
    return set(out[:c].tolist())


def rewire(g: Graph, i: int, j: int, l: int) -> Graph:
    """Move edge ``(i, j)`` to ``(i, l)`` in place; the edge count is unchanged."""
    if not g.has_edge(i, j):
        raise ContractError(f"rewire: ({i}, {j}) is not an edge")
    if l == i:
        raise ContractError(f"rewire: target {l} would create a self-loop")
    g._check_node(l)
    if g.has_edge(i, l):
        raise ContractError(f"rewire: ({i}, {l}) already an edge")
    remove_arc_pair(g.nbr, g.deg, i, j)
    add_arc_pair(g.nbr, g.deg, i, l)
    g.ensure_capacity()
    return g


# ---------------------------------------------------------------------------
# edge-list text format
# ---------------------------------------------------------------------------

def format_edge_list(g: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edges())


def write_edge_list(g: Graph, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(g))


def read_edge_list(path: str | Path) -> list[tuple[int, int]]:
    """Parse ``u v`` lines; blank lines and ``#`` comments are skipped."""
    edges = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"{path}:{lineno}: non-integer node id in {line!r}") from None
        if u < 0 or v < 0:
            raise ValueError(f"{path}:{lineno}: negative node id")
        edges.append((u, v))
    return edges
