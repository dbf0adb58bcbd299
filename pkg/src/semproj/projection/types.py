"""Core geometric value types shared by the projection backends."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..errors import NonFiniteInput


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric pairwise distance matrix with zero diagonal."""

    d: np.ndarray

    def __post_init__(self):
        d = np.ascontiguousarray(np.asarray(self.d, dtype=np.float64))
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError("distance matrix must be square")
        if not np.isfinite(d).all():
            raise NonFiniteInput("distance matrix has non-finite entries")
        if (d < 0).any():
            raise ValueError("distances must be non-negative")
        if not np.array_equal(d, d.T):
            raise ValueError("distance matrix must be symmetric")
        if np.diag(d).any():
            raise ValueError("distance matrix diagonal must be zero")
        object.__setattr__(self, "d", d)

    @property
    def n(self) -> int:
        return self.d.shape[0]


@dataclass(frozen=True)
class NeighborGraph:
    """k-nearest-neighbor graph in CSR form, weights are Euclidean distances."""

    n: int
    k: int
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    symmetrized: bool

    def neighbors(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return self.indices[lo:hi], self.weights[lo:hi]

    def edge_set(self) -> set[tuple[int, int]]:
        out: set[tuple[int, int]] = set()
        for i in range(self.n):
            for j in self.neighbors(i)[0]:
                out.add((min(i, int(j)), max(i, int(j))))
        return out


@dataclass
class Layout2D:
    """A 2D point layout produced by one projector run."""

    points: np.ndarray
    projector_id: str
    seed: int | None = None
    alpha: float | None = None
    converged: bool = True
    objective_trace: list[float] = field(default_factory=list)
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=np.float64))
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError("layout points must have shape (n, 2)")
        if not np.isfinite(pts).all():
            raise NonFiniteInput("layout has non-finite coordinates")
        self.points = pts

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def replace_points(self, points: np.ndarray, extra_flags: tuple[str, ...] = ()) -> "Layout2D":
        return Layout2D(
            points=points,
            projector_id=self.projector_id,
            seed=self.seed,
            alpha=self.alpha,
            converged=self.converged,
            objective_trace=list(self.objective_trace),
            flags=self.flags + extra_flags,
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "points": self.points.tolist(),
            "projector_id": self.projector_id,
            "seed": self.seed,
            "alpha": self.alpha,
            "converged": self.converged,
            "objective_trace": list(self.objective_trace),
            "flags": list(self.flags),
        }

    @classmethod
    def from_json(cls, doc: dict[str, Any]) -> "Layout2D":
        return cls(
            points=np.asarray(doc["points"], dtype=np.float64),
            projector_id=doc["projector_id"],
            seed=doc.get("seed"),
            alpha=doc.get("alpha"),
            converged=bool(doc.get("converged", True)),
            objective_trace=[float(v) for v in doc.get("objective_trace", [])],
            flags=tuple(doc.get("flags", [])),
        )
