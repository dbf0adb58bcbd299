"""Brute-force reference implementations used to pin expected values.

Everything here is written as plainly as possible (double loops, explicit
sorts) and stays independent of the package's vectorized code paths.
"""

from __future__ import annotations

import math

import numpy as np


def oracle_pairwise(X):
    n = len(X)
    D = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            s = 0.0
            for a, b in zip(X[i], X[j]):
                s += (a - b) ** 2
            D[i, j] = math.sqrt(s)
    return D


def neighbor_order(D, i):
    """All j != i sorted by (distance, index)."""
    return sorted((j for j in range(len(D)) if j != i), key=lambda j: (D[i][j], j))


def oracle_knn_edges(D, k):
    n = len(D)
    edges = set()
    for i in range(n):
        for j in neighbor_order(D, i)[:k]:
            edges.add((min(i, j), max(i, j)))
    return edges


def oracle_trustworthiness(Dh, Dl, K):
    n = len(Dh)
    total = 0
    for i in range(n):
        data_order = neighbor_order(Dh, i)
        layout_order = neighbor_order(Dl, i)
        data_knn = set(data_order[:K])
        for j in layout_order[:K]:
            if j not in data_knn:
                total += data_order.index(j) + 1 - K
    return 1.0 - 2.0 * total / (n * K * (2 * n - 3 * K - 1))


def oracle_continuity(Dh, Dl, K):
    n = len(Dh)
    total = 0
    for i in range(n):
        data_order = neighbor_order(Dh, i)
        layout_order = neighbor_order(Dl, i)
        layout_knn = set(layout_order[:K])
        for j in data_order[:K]:
            if j not in layout_knn:
                total += layout_order.index(j) + 1 - K
    return 1.0 - 2.0 * total / (n * K * (2 * n - 3 * K - 1))


def oracle_average_ranks(values):
    indexed = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[indexed[j + 1]] == values[indexed[i]]:
            j += 1
        avg = (i + 1 + j + 1) / 2.0
        for p in range(i, j + 1):
            ranks[indexed[p]] = avg
        i = j + 1
    return ranks


def oracle_spearman(a, b):
    ra = oracle_average_ranks(list(a))
    rb = oracle_average_ranks(list(b))
    ma = sum(ra) / len(ra)
    mb = sum(rb) / len(rb)
    num = sum((x - ma) * (y - mb) for x, y in zip(ra, rb))
    da = math.sqrt(sum((x - ma) ** 2 for x in ra))
    db = math.sqrt(sum((y - mb) ** 2 for y in rb))
    return num / (da * db)


def oracle_shepard_rho(Dh, Dl):
    n = len(Dh)
    a = [Dh[i][j] for i in range(n) for j in range(i + 1, n)]
    b = [Dl[i][j] for i in range(n) for j in range(i + 1, n)]
    return oracle_spearman(a, b)


def oracle_silhouette(D, labels):
    n = len(labels)
    classes = sorted(set(labels))
    scores = []
    for i in range(n):
        mine = [j for j in range(n) if labels[j] == labels[i] and j != i]
        if not mine:
            scores.append(0.0)
            continue
        a = sum(D[i][j] for j in mine) / len(mine)
        b = math.inf
        for c in classes:
            if c == labels[i]:
                continue
            others = [j for j in range(n) if labels[j] == c]
            b = min(b, sum(D[i][j] for j in others) / len(others))
        denom = max(a, b)
        scores.append(0.0 if denom == 0 else (b - a) / denom)
    return sum(scores) / n


def oracle_row_perplexity(p_row):
    """2^H of one conditional distribution (zeros skipped)."""
    h_bits = -sum(p * math.log2(p) for p in p_row if p > 0)
    return 2.0 ** h_bits


def oracle_kl(P, Y):
    """KL(P || Q) with Student-t Q, written from the definition."""
    n = len(Y)
    num = [[0.0] * n for _ in range(n)]
    z = 0.0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            d2 = (Y[i][0] - Y[j][0]) ** 2 + (Y[i][1] - Y[j][1]) ** 2
            num[i][j] = 1.0 / (1.0 + d2)
            z += num[i][j]
    kl = 0.0
    for i in range(n):
        for j in range(n):
            if i != j and P[i][j] > 0:
                kl += P[i][j] * math.log(P[i][j] / (num[i][j] / z))
    return kl


def oracle_procrustes_residual(A, B):
    """Minimal sum of squared distances over similarity transforms of A onto B."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    Ac = A - A.mean(axis=0)
    Bc = B - B.mean(axis=0)
    U, S, Vt = np.linalg.svd(Ac.T @ Bc)
    s = S.sum() / (Ac * Ac).sum()
    R = U @ Vt
    fit = s * Ac @ R + B.mean(axis=0)
    return float(((fit - B) ** 2).sum())


def chord_path_length(points, hops):
    """Sum of straight-line hops through the given point index sequence."""
    total = 0.0
    for a, b in zip(hops[:-1], hops[1:]):
        total += math.dist(points[a], points[b])
    return total
