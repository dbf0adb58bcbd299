"""Similarity-transform (Procrustes) alignment between 2D layouts."""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateReference
from .types import Layout2D


def procrustes_align(moving: Layout2D, reference: Layout2D) -> Layout2D:
    """Rotate/reflect/scale/translate `moving` onto `reference`.

    Closed-form least-squares fit; the optimum is never worse than leaving
    `moving` untouched since the identity transform is in the family.
    """
    if moving.n != reference.n:
        raise ValueError("layouts must have equal point counts")
    A = moving.points - moving.points.mean(axis=0)
    B = reference.points - reference.points.mean(axis=0)
    norm_b = float(np.linalg.norm(B))
    if norm_b == 0.0:
        raise DegenerateReference("reference points are all coincident")
    norm_a2 = float((A * A).sum())
    if norm_a2 == 0.0:
        # all moving points coincide; best fit drops them on the reference mean
        pts = np.tile(reference.points.mean(axis=0), (moving.n, 1))
        return moving.replace_points(pts, extra_flags=("aligned",))

    U, S, Vt = np.linalg.svd(A.T @ B)
    R = U @ Vt
    scale = float(S.sum()) / norm_a2
    pts = scale * (A @ R) + reference.points.mean(axis=0)
    return moving.replace_points(pts, extra_flags=("aligned",))


def alignment_residual(a: Layout2D, b: Layout2D) -> float:
    """Sum of squared point-wise distances between two layouts."""
    diff = a.points - b.points
    return float((diff * diff).sum())
