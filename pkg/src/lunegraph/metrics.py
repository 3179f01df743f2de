"""Statistics of a skeleton: degrees, edge length, hop diameter, Randic index.

The diameter is measured in unweighted hops by breadth-first search from
every node; for disconnected graphs the maximum over components is
reported together with a disconnected flag instead of an infinite
sentinel, so sweeps over sparse skeletons never abort.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

from .skeleton import PointSet, SkeletonGraph

METRICS_CSV_HEADER = "beta,nodes,edges,avg_degree,total_length,diam_hops,diam_nodes,randic"


@dataclass(frozen=True)
class MetricsReport:
    beta: float
    nodes: int
    edges: int
    average_degree: float
    degree_histogram: dict
    total_edge_length: float
    diameter_hops: int
    diameter_nodes: int
    randic_index: float
    disconnected: bool

    def csv_row(self) -> str:
        return (
            f"{self.beta!r},{self.nodes},{self.edges},{self.average_degree!r},"
            f"{self.total_edge_length!r},{self.diameter_hops},{self.diameter_nodes},"
            f"{self.randic_index!r}"
        )


def randic_index(g: SkeletonGraph, ordered_pairs: bool = False) -> float:
    """Sum of 1/sqrt(d_i * d_j) over edges (the classical branching index).

    With ordered_pairs=True each edge is counted in both directions, i.e.
    the adjacency-matrix double sum, which is exactly twice this value.
    """
    total = 0.0
    for i, j in g.sorted_edges():
        total += 1.0 / math.sqrt(g.degree(i) * g.degree(j))
    return 2.0 * total if ordered_pairs else total


def hop_diameter(g: SkeletonGraph):
    """(max hop eccentricity over components, disconnected flag)."""
    n = g.n
    if n <= 1:
        return 0, False
    if not g.edges:
        return 0, True
    pairs = np.array(g.sorted_edges(), dtype=np.intp)
    rows = np.concatenate([pairs[:, 0], pairs[:, 1]])
    cols = np.concatenate([pairs[:, 1], pairs[:, 0]])
    mat = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    ncomp, _ = connected_components(mat, directed=False)
    best = 0.0
    for s in range(0, n, 256):
        idx = np.arange(s, min(s + 256, n))
        dist = dijkstra(mat, directed=False, unweighted=True, indices=idx)
        finite = dist[np.isfinite(dist)]
        if finite.size:
            best = max(best, float(finite.max()))
    return int(best), ncomp > 1


def total_edge_length(ps: PointSet, g: SkeletonGraph) -> float:
    if not g.edges:
        return 0.0
    coords = ps.coords
    pairs = np.array(g.sorted_edges(), dtype=np.intp)
    dx = coords[pairs[:, 0], 0] - coords[pairs[:, 1], 0]
    dy = coords[pairs[:, 0], 1] - coords[pairs[:, 1], 1]
    return float(np.sum(np.sqrt(dx * dx + dy * dy)))


def compute_metrics(ps: PointSet, g: SkeletonGraph) -> MetricsReport:
    """Full report for one skeleton; g must have been built from ps."""
    if g.n != len(ps):
        raise ValueError(f"graph has {g.n} nodes but point set has {len(ps)}")
    n = g.n
    m = g.edge_count
    histogram = {}
    for i in range(n):
        d = g.degree(i)
        histogram[d] = histogram.get(d, 0) + 1
    diam_hops, disconnected = hop_diameter(g)
    return MetricsReport(
        beta=g.beta,
        nodes=n,
        edges=m,
        average_degree=(2.0 * m / n) if n else 0.0,
        degree_histogram=histogram,
        total_edge_length=total_edge_length(ps, g),
        diameter_hops=diam_hops,
        diameter_nodes=diam_hops + 1 if n else 0,
        randic_index=randic_index(g),
        disconnected=disconnected,
    )
