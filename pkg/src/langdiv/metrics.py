"""Partition and topology observables: components, domains, clustering, path length."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .graph import Graph

METRICS_COLUMNS = (
    "n", "m", "components", "largest_component", "domains", "largest_domain",
    "C", "mean_c", "avg_path", "stop_reason", "steps",
)


@dataclass(frozen=True)
class PartitionReport:
    """A node partition.

    ``labels[i]`` is the part of node ``i``; parts are numbered in order of
    their smallest node.  ``sizes[k]`` is the size of part ``k``.
    """

    labels: np.ndarray
    sizes: np.ndarray

    @property
    def count(self) -> int:
        return len(self.sizes)

    @property
    def largest(self) -> int:
        return int(self.sizes.max()) if len(self.sizes) else 0

    def parts(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.count)]
        for node, lab in enumerate(self.labels.tolist()):
            out[lab].append(node)
        return out


def _canonical(labels: np.ndarray) -> PartitionReport:
    # renumber parts by first occurrence so labels are representation independent
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    order = np.argsort(first)
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    canon = rank[inverse].astype(np.int64)
    return PartitionReport(canon, np.bincount(canon, minlength=len(order)).astype(np.int64))


def _adjacency(n: int, edges: np.ndarray) -> sparse.csr_matrix:
    if len(edges) == 0:
        return sparse.csr_matrix((n, n), dtype=np.int64)
    u, v = edges[:, 0], edges[:, 1]
    data = np.ones(2 * len(edges), dtype=np.int64)
    return sparse.csr_matrix((data, (np.concatenate([u, v]), np.concatenate([v, u]))), shape=(n, n))


def _partition(n: int, edges: np.ndarray) -> PartitionReport:
    _, labels = csgraph.connected_components(_adjacency(n, edges), directed=False)
    return _canonical(labels)


def components(g: Graph) -> PartitionReport:
    return _partition(g.n, g.edge_array())


def domains(g: Graph, states: np.ndarray) -> PartitionReport:
    """Connected groups of nodes joined by edges with identical full trait vectors."""
    states = np.asarray(states)
    if states.shape[0] != g.n:
        raise ValueError(f"states has {states.shape[0]} rows, graph has {g.n} nodes")
    e = g.edge_array()
    if len(e):
        same = np.all(states[e[:, 0]] == states[e[:, 1]], axis=1)
        e = e[same]
    return _partition(g.n, e)


def _triangles_per_node(a: sparse.csr_matrix) -> np.ndarray:
    return np.asarray((a @ a).multiply(a).sum(axis=1)).ravel() // 2


def local_clustering_all(g: Graph) -> np.ndarray:
    """Local clustering of every node; 0 where the degree is below 2."""
    a = _adjacency(g.n, g.edge_array())
    tri = _triangles_per_node(a).astype(float)
    k = g.deg.astype(float)
    pairs = k * (k - 1) / 2
    out = np.zeros(g.n)
    ok = pairs > 0
    out[ok] = tri[ok] / pairs[ok]
    return out


def local_clustering(g: Graph, i: int) -> float:
    nb = list(g.neighbors(i))
    k = len(nb)
    if k < 2:
        return 0.0
    links = sum(1 for a in range(k) for b in range(a + 1, k) if g.has_edge(nb[a], nb[b]))
    return links / (k * (k - 1) / 2)


def global_clustering(g: Graph) -> float:
    """Three times the triangle count over the number of connected triplets."""
    k = g.deg.astype(np.int64)
    triplets = int(np.sum(k * (k - 1) // 2))
    if triplets == 0:
        return 0.0
    a = _adjacency(g.n, g.edge_array())
    # each triangle is counted once at each of its three corners
    return float(_triangles_per_node(a).sum()) / triplets


def average_path_length(g: Graph, chunk: int = 512) -> Optional[float]:
    """Mean shortest-path length over connected unordered pairs; None if there are none."""
    if g.edge_count == 0:
        return None
    a = _adjacency(g.n, g.edge_array())
    total = 0.0
    pairs = 0
    for start in range(0, g.n, chunk):
        idx = np.arange(start, min(start + chunk, g.n))
        d = csgraph.shortest_path(a, directed=False, unweighted=True, indices=idx)
        finite = np.isfinite(d) & (d > 0)
        total += float(d[finite].sum())
        pairs += int(finite.sum())
    # every pair was seen from both ends
    return total / pairs if pairs else None


def degree_histogram(g: Graph) -> dict[int, int]:
    counts = np.bincount(g.deg)
    return {k: int(c) for k, c in enumerate(counts) if c}


def monodomain_fraction(comp: PartitionReport, dom: PartitionReport) -> float:
    """Fraction of components that consist of exactly one domain."""
    per_comp = np.zeros(comp.count, dtype=np.int64)
    # each domain lies inside one component; count domains per component
    first_node = np.unique(dom.labels, return_index=True)[1]
    np.add.at(per_comp, comp.labels[first_node], 1)
    return float(np.mean(per_comp == 1))


@dataclass
class MetricsReport:
    n: int
    m: int
    component_report: PartitionReport
    domain_report: PartitionReport
    global_clustering: float
    mean_local_clustering: float
    avg_path_length: Optional[float]
    degree_histogram: dict = field(default_factory=dict)
    stop_reason: Optional[str] = None
    steps: Optional[int] = None

    @property
    def components(self) -> int:
        return self.component_report.count

    @property
    def largest_component(self) -> int:
        return self.component_report.largest

    @property
    def domains(self) -> int:
        return self.domain_report.count

    @property
    def largest_domain(self) -> int:
        return self.domain_report.largest

    @property
    def monodomain_fraction(self) -> float:
        return monodomain_fraction(self.component_report, self.domain_report)

    def row(self) -> dict:
        """Flat values keyed by :data:`METRICS_COLUMNS`."""
        return {
            "n": self.n,
            "m": self.m,
            "components": self.components,
            "largest_component": self.largest_component,
            "domains": self.domains,
            "largest_domain": self.largest_domain,
            "C": self.global_clustering,
            "mean_c": self.mean_local_clustering,
            "avg_path": self.avg_path_length,
            "stop_reason": self.stop_reason,
            "steps": self.steps,
        }

    def csv_row(self) -> str:
        return ",".join(format_value(v) for v in self.row().values())


def format_value(v) -> str:
    """CSV cell: ``repr`` for floats (round-trips exactly), empty for None."""
    if v is None:
        return ""
    if isinstance(v, float):
        return "" if math.isnan(v) else repr(v)
    return str(v)


def compute_metrics(g: Graph, states: np.ndarray, stop_reason: Optional[str] = None,
                    steps: Optional[int] = None) -> MetricsReport:
    return MetricsReport(
        n=g.n,
        m=g.edge_count,
        component_report=components(g),
        domain_report=domains(g, states),
        global_clustering=global_clustering(g),
        mean_local_clustering=float(local_clustering_all(g).mean()),
        avg_path_length=average_path_length(g),
        degree_histogram=degree_histogram(g),
        stop_reason=stop_reason,
        steps=steps,
    )
