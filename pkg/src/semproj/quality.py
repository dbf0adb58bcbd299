"""Projection quality metrics: trustworthiness, continuity, Shepard-diagram
rank correlation, and silhouette score.

All metrics take precomputed distance matrices so they can be evaluated
against either the full data space or any layout without re-deriving
geometry. Neighbor ranks break ties by ascending sample index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import KTooLargeForNormalizer, SingleClass, ZeroVariance
from .projection.distances import pairwise_distances
from .projection.types import DistanceMatrix, Layout2D

DEFAULT_K = 7
PAIR_SAMPLING_THRESHOLD = 2000
PAIR_BUDGET = 1_000_000


@dataclass(frozen=True)
class RankTable:
    """Neighbor orderings of one space: order[i] lists all j != i nearest
    first, rank[i, j] is the 1-based position of j in that list."""

    order: np.ndarray
    rank: np.ndarray

    @property
    def n(self) -> int:
        return self.rank.shape[0]

    def knn_mask(self, K: int) -> np.ndarray:
        return (self.rank >= 1) & (self.rank <= K)


def rank_table(D: DistanceMatrix) -> RankTable:
    n = D.n
    d = D.d.copy()
    np.fill_diagonal(d, np.inf)
    order = np.argsort(d, axis=1, kind="stable")[:, : n - 1]
    rank = np.zeros((n, n), dtype=np.int64)
    rows = np.repeat(np.arange(n), n - 1)
    rank[rows, order.ravel()] = np.tile(np.arange(1, n), n)
    return RankTable(order=order, rank=rank)


def _check_k(n: int, K: int) -> None:
    if K < 1:
        raise ValueError("K must be >= 1")
    if not 2 * K < n - 1:
        raise KTooLargeForNormalizer(f"need 2K < n-1; got K={K}, n={n}")


def trustworthiness(Dhigh: DistanceMatrix, Dlow: DistanceMatrix, K: int) -> float:
    """Penalty for layout neighbors that are not data neighbors, weighted by
    how far down the data ranking they sit."""
    n = Dhigh.n
    _check_k(n, K)
    high = rank_table(Dhigh)
    low = rank_table(Dlow)
    intruders = low.knn_mask(K) & ~high.knn_mask(K)
    total = int(((high.rank - K) * intruders).sum())
    return 1.0 - 2.0 * total / (n * K * (2 * n - 3 * K - 1))


def continuity(Dhigh: DistanceMatrix, Dlow: DistanceMatrix, K: int) -> float:
    """Penalty for data neighbors missing from the layout neighborhood,
    weighted by layout rank."""
    n = Dhigh.n
    _check_k(n, K)
    high = rank_table(Dhigh)
    low = rank_table(Dlow)
    missing = high.knn_mask(K) & ~low.knn_mask(K)
    total = int(((low.rank - K) * missing).sum())
    return 1.0 - 2.0 * total / (n * K * (2 * n - 3 * K - 1))


@dataclass(frozen=True)
class ShepardDiagram:
    pairs: np.ndarray  # (m, 2): data distance, layout distance
    spearman_rho: float
    sampled: bool

    @property
    def n_pairs(self) -> int:
        return self.pairs.shape[0]


def average_ranks(x: np.ndarray) -> np.ndarray:
    """1-based ranks; tied values share the average of their positions."""
    x = np.asarray(x)
    order = np.argsort(x, kind="stable")
    xs = x[order]
    boundaries = np.flatnonzero(np.diff(xs) != 0) + 1
    starts = np.concatenate(([0], boundaries))
    ends = np.concatenate((boundaries, [len(x)]))
    ranks = np.empty(len(x))
    for s, e in zip(starts, ends):
        ranks[order[s:e]] = 0.5 * (s + 1 + e)
    return ranks


def shepard_spearman(
    Dhigh: DistanceMatrix,
    Dlow: DistanceMatrix,
    pair_budget: int = PAIR_BUDGET,
    seed: int = 0,
) -> ShepardDiagram:
    """Spearman rank correlation of the pairwise-distance scatter."""
    n = Dhigh.n
    if n < 3:
        raise ValueError("need at least 3 points")
    iu = np.triu_indices(n, k=1)
    dh = Dhigh.d[iu]
    dl = Dlow.d[iu]
    sampled = False
    if dh.shape[0] > pair_budget:
        sampled = True
        rng = np.random.Generator(np.random.PCG64(seed))
        pick = rng.choice(dh.shape[0], size=pair_budget, replace=False)
        pick.sort()
        dh, dl = dh[pick], dl[pick]
    if np.ptp(dh) == 0 or np.ptp(dl) == 0:
        raise ZeroVariance("all pairwise distances equal in one space")
    ra = average_ranks(dh)
    rb = average_ranks(dl)
    ra -= ra.mean()
    rb -= rb.mean()
    rho = float((ra @ rb) / np.sqrt((ra @ ra) * (rb @ rb)))
    return ShepardDiagram(pairs=np.column_stack([dh, dl]), spearman_rho=rho, sampled=sampled)


def silhouette(Dlow: DistanceMatrix, labels: Sequence[str]) -> float:
    """Mean of (b - a) / max(a, b); singleton-class points contribute 0."""
    n = Dlow.n
    if len(labels) != n:
        raise ValueError("one label per point required")
    labels = np.asarray(labels, dtype=object)
    classes = sorted(set(labels))
    if len(classes) < 2:
        raise SingleClass("silhouette needs at least 2 distinct labels")
    masks = {c: labels == c for c in classes}
    counts = {c: int(m.sum()) for c, m in masks.items()}

    scores = np.zeros(n)
    for i in range(n):
        c = labels[i]
        if counts[c] == 1:
            continue  # convention: singleton classes score 0
        row = Dlow.d[i]
        a = row[masks[c]].sum() / (counts[c] - 1)
        b = min(row[masks[o]].mean() for o in classes if o != c)
        denom = max(a, b)
        scores[i] = 0.0 if denom == 0 else (b - a) / denom
    return float(scores.mean())


@dataclass(frozen=True)
class MetricsReport:
    T: float
    C: float
    R: float
    S: float
    K: int
    label_column: str
    n_pairs_sampled: int
    extras: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return {
            "T": self.T,
            "C": self.C,
            "R": self.R,
            "S": self.S,
            "K": self.K,
            "label_column": self.label_column,
            "n_pairs_sampled": self.n_pairs_sampled,
        }

    @classmethod
    def from_json(cls, doc: dict[str, Any]) -> "MetricsReport":
        return cls(
            T=float(doc["T"]),
            C=float(doc["C"]),
            R=float(doc["R"]),
            S=float(doc["S"]),
            K=int(doc["K"]),
            label_column=str(doc["label_column"]),
            n_pairs_sampled=int(doc["n_pairs_sampled"]),
        )


def full_report(
    Dhigh: DistanceMatrix,
    layout: Layout2D,
    labels: Sequence[str],
    K: int = DEFAULT_K,
    label_column: str = "truth_label",
) -> MetricsReport:
    """All four metrics for one layout against one data-space reference."""
    if Dhigh.n != layout.n:
        raise ValueError("distance matrix and layout disagree on n")
    Dlow = pairwise_distances(layout.points)
    budget = PAIR_BUDGET if layout.n > PAIR_SAMPLING_THRESHOLD else layout.n * (layout.n - 1) // 2
    shepard = shepard_spearman(Dhigh, Dlow, pair_budget=max(budget, 1))
    return MetricsReport(
        T=trustworthiness(Dhigh, Dlow, K),
        C=continuity(Dhigh, Dlow, K),
        R=shepard.spearman_rho,
        S=silhouette(Dlow, labels),
        K=K,
        label_column=label_column,
        n_pairs_sampled=shepard.n_pairs,
    )
