"""Pairwise distances and k-nearest-neighbor graphs."""

from __future__ import annotations

import numpy as np

from ..errors import KTooLarge, NonFiniteInput
from . import backend
from .types import DistanceMatrix, NeighborGraph


def pairwise_distances(X: np.ndarray) -> DistanceMatrix:
    """Euclidean distance matrix of the rows of X."""
    X = np.ascontiguousarray(np.asarray(X, dtype=np.float64))
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError("need a 2D array with at least 2 rows")
    if not np.isfinite(X).all():
        raise NonFiniteInput("input vectors contain non-finite values")
    d2 = backend.pairwise_sq_dists(X)
    return DistanceMatrix(np.sqrt(d2))


def knn_graph(D: DistanceMatrix, k: int) -> NeighborGraph:
    """k nearest neighbors per node, ties broken by ascending index,
    symmetrized by edge union."""
    n = D.n
    if not 1 <= k < n:
        raise KTooLarge(f"k={k} must satisfy 1 <= k < n={n}")
    d = D.d.copy()
    np.fill_diagonal(d, np.inf)
    # stable sort keeps ascending-index order within distance ties
    order = np.argsort(d, axis=1, kind="stable")[:, :k]

    adjacency: list[dict[int, float]] = [dict() for _ in range(n)]
    for i in range(n):
        for j in order[i]:
            w = float(D.d[i, j])
            adjacency[i][int(j)] = w
            adjacency[int(j)][i] = w

    return _csr_from_adjacency(adjacency, n, k, symmetrized=True)


def _csr_from_adjacency(
    adjacency: list[dict[int, float]], n: int, k: int, symmetrized: bool
) -> NeighborGraph:
    indptr = np.zeros(n + 1, dtype=np.int64)
    indices: list[int] = []
    weights: list[float] = []
    for i in range(n):
        for j in sorted(adjacency[i]):
            indices.append(j)
            weights.append(adjacency[i][j])
        indptr[i + 1] = len(indices)
    return NeighborGraph(
        n=n,
        k=k,
        indptr=indptr,
        indices=np.asarray(indices, dtype=np.int64),
        weights=np.asarray(weights, dtype=np.float64),
        symmetrized=symmetrized,
    )
