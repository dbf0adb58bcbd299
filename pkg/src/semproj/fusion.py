"""Blending of data-space and label-space embeddings.

Each fused row is alpha * x_i + (1 - alpha) * y_i over sample-aligned data
and label vectors. Inputs are L2-normalized by default so alpha acts as an
interpretable convex weight regardless of raw vector scales; the blend
itself is left unnormalized so alpha=0.5 is a true midpoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimMismatch, IdSetMismatch, ZeroVector
from .store import EmbeddingRecord

DEFAULT_ALPHA_GRID = (0.0, 0.2, 0.4, 0.5, 0.6, 0.8, 1.0)


@dataclass(frozen=True)
class FusionConfig:
    alpha: float = 0.5
    normalize_inputs: bool = True
    renormalize_output: bool = False

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")


@dataclass(frozen=True)
class FusedSet:
    alpha: float
    sample_ids: tuple[str, ...]
    vectors: np.ndarray
    provenance: dict[str, str] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.vectors.shape[0]


def _aligned_matrix(records: Sequence[EmbeddingRecord], ids: Sequence[str]) -> np.ndarray:
    by_id = {r.sample_id: r for r in records}
    return np.stack([np.asarray(by_id[i].vector, dtype=np.float64) for i in ids])


def _unit_rows(M: np.ndarray, what: str) -> np.ndarray:
    norms = np.linalg.norm(M, axis=1)
    if (norms == 0).any():
        bad = int(np.flatnonzero(norms == 0)[0])
        raise ZeroVector(f"{what} row {bad} has zero norm; cannot normalize")
    return M / norms[:, None]


def fuse(
    data: Sequence[EmbeddingRecord],
    labels: Sequence[EmbeddingRecord],
    cfg: FusionConfig | None = None,
) -> FusedSet:
    """Blend per-sample data and label vectors at the configured alpha."""
    cfg = cfg or FusionConfig()
    data_ids = {r.sample_id for r in data}
    label_ids = {r.sample_id for r in labels}
    if data_ids != label_ids:
        missing = sorted(data_ids ^ label_ids)[:5]
        raise IdSetMismatch(f"data/label sample ids differ, e.g. {missing}")
    dims = {r.dim for r in data} | {r.dim for r in labels}
    if len(dims) != 1:
        raise DimMismatch(min(dims), max(dims))

    ids = tuple(r.sample_id for r in data)
    X = _aligned_matrix(data, ids)
    Y = _aligned_matrix(labels, ids)
    if cfg.normalize_inputs:
        X = _unit_rows(X, "data")
        Y = _unit_rows(Y, "label")
    fused = cfg.alpha * X + (1.0 - cfg.alpha) * Y
    if cfg.renormalize_output:
        fused = _unit_rows(fused, "fused")

    provenance = {
        "data_model_tag": data[0].model_tag if data else "",
        "label_model_tag": labels[0].model_tag if labels else "",
        "prompt_hash": next((r.prompt_hash or "" for r in labels), ""),
    }
    return FusedSet(alpha=cfg.alpha, sample_ids=ids, vectors=fused, provenance=provenance)


def fused_records(fs: FusedSet, model_tag: str | None = None) -> list[EmbeddingRecord]:
    """FusedSet rows as cache records (kind=fused, alpha carried per record)."""
    tag = model_tag or fs.provenance.get("data_model_tag", "fused")
    return [
        EmbeddingRecord(
            sample_id=sid,
            kind="fused",
            model_tag=tag,
            vector=fs.vectors[i].astype(np.float32),
            prompt_hash=fs.provenance.get("prompt_hash") or None,
            alpha=fs.alpha,
        )
        for i, sid in enumerate(fs.sample_ids)
    ]


def alpha_sweep(
    data: Sequence[EmbeddingRecord],
    labels: Sequence[EmbeddingRecord],
    alphas: Sequence[float],
    cfg: FusionConfig | None = None,
) -> list[FusedSet]:
    """One fused set per grid value; alphas must be ascending in [0, 1]."""
    alphas = list(alphas)
    if any(not 0.0 <= a <= 1.0 for a in alphas):
        raise ValueError("every alpha must lie in [0, 1]")
    if alphas != sorted(alphas):
        raise ValueError("alphas must be sorted ascending")
    base = cfg or FusionConfig()
    return [
        fuse(
            data,
            labels,
            FusionConfig(
                alpha=a,
                normalize_inputs=base.normalize_inputs,
                renormalize_output=base.renormalize_output,
            ),
        )
        for a in alphas
    ]
