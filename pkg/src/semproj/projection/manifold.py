"""Isomap: geodesic distances over a kNN graph, embedded by classical MDS."""

from __future__ import annotations

import numpy as np

from . import backend
from .distances import knn_graph, pairwise_distances
from .linear import classical_mds
from .types import DistanceMatrix, Layout2D, NeighborGraph


def geodesic_distances(
    D: DistanceMatrix, graph: NeighborGraph
) -> tuple[DistanceMatrix, bool]:
    """All-pairs shortest-path distances over the graph.

    Disconnected components are joined by the minimum-spanning-tree edges of
    the component metagraph (weight = Euclidean distance of the closest pair),
    so the result is always finite. Returns (geodesics, bridged).
    """
    n = D.n
    dist = backend.shortest_paths(graph.indptr, graph.indices, graph.weights, n)
    bridged = False
    if not np.isfinite(dist).all():
        bridged = True
        extra = _bridge_edges(D, dist)
        adjacency: list[dict[int, float]] = [dict() for _ in range(n)]
        for i in range(n):
            lo, hi = graph.indptr[i], graph.indptr[i + 1]
            for j, w in zip(graph.indices[lo:hi], graph.weights[lo:hi]):
                adjacency[i][int(j)] = float(w)
        for i, j, w in extra:
            adjacency[i][j] = w
            adjacency[j][i] = w
        from .distances import _csr_from_adjacency

        augmented = _csr_from_adjacency(adjacency, n, graph.k, symmetrized=True)
        dist = backend.shortest_paths(
            augmented.indptr, augmented.indices, augmented.weights, n
        )
    # enforce exact symmetry (path sums may differ in the last ulp by direction)
    dist = np.minimum(dist, dist.T)
    np.fill_diagonal(dist, 0.0)
    return DistanceMatrix(dist), bridged


def _bridge_edges(D: DistanceMatrix, reach: np.ndarray) -> list[tuple[int, int, float]]:
    """Kruskal over component pairs: cheapest inter-component Euclidean edges."""
    n = D.n
    comp = _components_from_reach(reach)
    labels = sorted(set(comp))
    candidates: list[tuple[float, int, int]] = []
    for a_idx, a in enumerate(labels):
        ia = np.flatnonzero(np.asarray(comp) == a)
        for b in labels[a_idx + 1 :]:
            ib = np.flatnonzero(np.asarray(comp) == b)
            sub = D.d[np.ix_(ia, ib)]
            flat = int(np.argmin(sub))
            i, j = int(ia[flat // len(ib)]), int(ib[flat % len(ib)])
            candidates.append((float(D.d[i, j]), min(i, j), max(i, j)))
    candidates.sort()

    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        parent[i] = i
    rep = {c: int(np.flatnonzero(np.asarray(comp) == c)[0]) for c in labels}
    for i in range(n):
        parent[find(i)] = find(rep[comp[i]])

    out: list[tuple[int, int, float]] = []
    for w, i, j in candidates:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            out.append((i, j, w))
    return out


def _components_from_reach(reach: np.ndarray) -> list[int]:
    n = reach.shape[0]
    comp = [-1] * n
    label = 0
    for i in range(n):
        if comp[i] == -1:
            members = np.flatnonzero(np.isfinite(reach[i]))
            for j in members:
                comp[int(j)] = label
            comp[i] = label
            label += 1
    return comp


def isomap(
    X: np.ndarray, k: int = 10, alpha: float | None = None, seed: int | None = None
) -> Layout2D:
    """Geodesic embedding of the rows of X with a k-neighbor graph."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 4:
        raise ValueError("need at least 4 samples")
    D = pairwise_distances(X)
    graph = knn_graph(D, k)
    geo, bridged = geodesic_distances(D, graph)
    layout = classical_mds(geo, alpha=alpha, seed=seed, projector_id="isomap")
    if bridged:
        layout = layout.replace_points(layout.points, extra_flags=("bridged",))
    return layout
