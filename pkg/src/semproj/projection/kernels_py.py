"""Vectorized numpy implementations of the hot numerical kernels.

This is the fallback backend; `_kernels.pyx` provides the compiled
equivalents. Both expose the same four functions with identical semantics,
and `backend.py` picks one at import time. Inputs are expected to be
C-contiguous float64 arrays; validation happens in the callers.
"""

from __future__ import annotations

import heapq

import numpy as np

BACKEND_NAME = "python"


def pairwise_sq_dists(X: np.ndarray) -> np.ndarray:
    """Squared Euclidean distances, symmetric, zero diagonal."""
    sq_norms = np.einsum("ij,ij->i", X, X)
    d2 = sq_norms[:, None] + sq_norms[None, :] - 2.0 * (X @ X.T)
    np.maximum(d2, 0.0, out=d2)
    d2 = 0.5 * (d2 + d2.T)
    np.fill_diagonal(d2, 0.0)
    return d2


def calibrate_bandwidths(
    d2: np.ndarray, perplexity: float, tol: float = 1e-4, max_iter: int = 50
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-row precision search for the conditional neighbor distribution.

    For each row i, bisects the precision beta_i = 1/(2 sigma_i^2) until the
    perplexity exp(H(p_.|i)) of the row distribution matches `perplexity`
    within `tol`. Returns (P, beta, failed) where P has zero diagonal and
    rows summing to 1, and `failed` holds the indices whose search did not
    converge.
    """
    n = d2.shape[0]
    P = np.zeros((n, n))
    beta = np.ones(n)
    failed: list[int] = []
    for i in range(n):
        di = np.delete(d2[i], i)
        shift = di.min()
        b, b_lo, b_hi = 1.0, 0.0, np.inf
        best_err, best_p, best_b = np.inf, None, b
        # spend the whole bisection budget and keep the best row seen: this
        # drives near-extremal perplexities (e.g. n-1) essentially exact
        for _ in range(max_iter):
            p = np.exp(-b * (di - shift))
            sum_p = p.sum()
            # H in nats of the normalized row; shift cancels in normalization
            h = np.log(sum_p) + b * float((di - shift) @ p) / sum_p
            err = abs(np.exp(h) - perplexity)
            if err < best_err:
                best_err, best_p, best_b = err, p, b
            if err == 0.0:
                break
            if np.exp(h) > perplexity:
                b_lo = b
                b = b * 2.0 if not np.isfinite(b_hi) else 0.5 * (b + b_hi)
            else:
                b_hi = b
                b = 0.5 * (b + b_lo)
        if best_err > tol:
            failed.append(i)
        row = np.zeros(n)
        row[np.arange(n) != i] = best_p / best_p.sum()
        P[i] = row
        beta[i] = best_b
    return P, beta, np.asarray(failed, dtype=np.int64)


def tsne_grad_kl(
    P_grad: np.ndarray, P_kl: np.ndarray, Y: np.ndarray, want_kl: bool
) -> tuple[np.ndarray, float]:
    """Gradient of KL(P_grad || Q) and, optionally, KL(P_kl || Q).

    Q is the Student-t similarity of the 2D layout Y. The gradient is taken
    against P_grad (which may carry early exaggeration) while the reported
    objective uses the unexaggerated P_kl.
    """
    d2 = pairwise_sq_dists(Y)
    num = 1.0 / (1.0 + d2)
    np.fill_diagonal(num, 0.0)
    z = num.sum()
    q = num / z
    pq_num = (P_grad - q) * num
    grad = 4.0 * (pq_num.sum(axis=1)[:, None] * Y - pq_num @ Y)
    kl = float("nan")
    if want_kl:
        mask = P_kl > 0
        qc = np.maximum(q[mask], 1e-300)
        kl = float(np.sum(P_kl[mask] * (np.log(P_kl[mask]) - np.log(qc))))
    return grad, kl


def shortest_paths(
    indptr: np.ndarray, indices: np.ndarray, weights: np.ndarray, n: int
) -> np.ndarray:
    """All-pairs shortest path distances over a CSR adjacency (Dijkstra per source)."""
    out = np.full((n, n), np.inf)
    for src in range(n):
        dist = out[src]
        dist[src] = 0.0
        heap = [(0.0, src)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                nd = d + weights[e]
                if nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
    return out
