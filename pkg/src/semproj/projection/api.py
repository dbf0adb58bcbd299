"""Projector dispatch: one entry point over PCA, MDS, Isomap, t-SNE, and
externally supplied layouts."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from ..errors import ExternalShapeMismatch, UnknownMethod
from .distances import pairwise_distances
from .linear import classical_mds, pca_2d
from .manifold import isomap
from .tsne import tsne
from .types import Layout2D

METHODS = ("pca", "mds", "isomap", "tsne", "external")

DEFAULTS: dict[str, dict[str, Any]] = {
    "tsne": {"perplexity": 30.0, "iterations": 1000, "seed": 0},
    "isomap": {"k_neighbors": 10},
    "pca": {},
    "mds": {},
    "external": {},
}


@dataclass(frozen=True)
class ProjectorSpec:
    method: str
    hyperparameters: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise UnknownMethod(f"unknown projection method {self.method!r}")

    def resolved(self) -> dict[str, Any]:
        merged = dict(DEFAULTS[self.method])
        merged.update(self.hyperparameters)
        return merged

    def to_json(self) -> dict[str, Any]:
        return {"method": self.method, "hyperparameters": self.resolved()}


def project(
    vectors: np.ndarray,
    spec: ProjectorSpec,
    alpha: float | None = None,
    init: np.ndarray | None = None,
) -> Layout2D:
    """Run the configured projector over a set of row vectors."""
    X = np.asarray(vectors, dtype=np.float64)
    hp = spec.resolved()
    n = X.shape[0]

    if spec.method == "pca":
        return pca_2d(X, alpha=alpha, seed=hp.get("seed"))
    if spec.method == "mds":
        return classical_mds(pairwise_distances(X), alpha=alpha, seed=hp.get("seed"))
    if spec.method == "isomap":
        k = int(hp["k_neighbors"])
        if k >= n:
            raise ValueError(f"k_neighbors={k} must be < n={n}")
        return isomap(X, k=k, alpha=alpha, seed=hp.get("seed"))
    if spec.method == "tsne":
        perplexity = float(hp["perplexity"])
        if perplexity >= n - 1:
            raise ValueError(f"perplexity={perplexity} must be < n-1={n - 1}")
        return tsne(
            X,
            perplexity=perplexity,
            iterations=int(hp["iterations"]),
            learning_rate=hp.get("learning_rate"),
            seed=hp.get("seed"),
            alpha=alpha,
            init=init,
        )
    if spec.method == "external":
        layout = load_external_layout(Path(hp["path"]))
        if layout.n != n:
            raise ExternalShapeMismatch(
                f"external layout has {layout.n} points, dataset has {n}"
            )
        return Layout2D(
            points=layout.points,
            projector_id=layout.projector_id,
            seed=layout.seed,
            alpha=alpha,
            flags=layout.flags,
        )
    raise UnknownMethod(spec.method)


def load_external_layout(path: Path) -> Layout2D:
    doc = json.loads(Path(path).read_text())
    pts = np.asarray(doc["points"], dtype=np.float64)
    if pts.shape[0] != doc.get("n", pts.shape[0]):
        raise ExternalShapeMismatch("declared n does not match point count")
    projector_id = doc.get("projector_id", "external")
    if not projector_id.startswith("external"):
        projector_id = f"external:{projector_id}"
    return Layout2D(points=pts, projector_id=projector_id, seed=doc.get("seed"))


def save_layout(layout: Layout2D, path: Path) -> None:
    Path(path).write_text(json.dumps(layout.to_json(), indent=2) + "\n")
