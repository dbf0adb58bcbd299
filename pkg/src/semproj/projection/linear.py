"""Spectral projectors: PCA and classical (Torgerson) MDS."""

from __future__ import annotations

import numpy as np

from ..errors import AllNegativeSpectrum, NonFiniteInput
from .types import DistanceMatrix, Layout2D

# relative eigenvalue threshold below which an axis counts as rank-deficient
_RANK_TOL = 1e-12


def _fix_signs(V: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude component is positive."""
    V = V.copy()
    for c in range(V.shape[1]):
        col = V[:, c]
        pivot = int(np.argmax(np.abs(col)))
        if col[pivot] < 0:
            V[:, c] = -col
    return V


def pca_2d(X: np.ndarray, alpha: float | None = None, seed: int | None = None) -> Layout2D:
    """Project rows of X onto their top-2 principal axes."""
    X = np.ascontiguousarray(np.asarray(X, dtype=np.float64))
    if X.ndim != 2 or X.shape[0] < 3:
        raise ValueError("need at least 3 samples")
    if not np.isfinite(X).all():
        raise NonFiniteInput("input vectors contain non-finite values")

    Xc = X - X.mean(axis=0)
    cov = (Xc.T @ Xc) / (X.shape[0] - 1)
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals, kind="stable")[::-1][:2]
    top_vals = evals[order]
    axes = _fix_signs(evecs[:, order])

    flags: tuple[str, ...] = ()
    pts = Xc @ axes
    tol = _RANK_TOL * max(float(top_vals[0]), 1.0)
    if X.shape[1] < 2 or top_vals[-1] <= tol:
        flags = ("degenerate_covariance",)
        pts[:, 1] = 0.0
        if top_vals[0] <= tol:
            pts[:, 0] = 0.0
    return Layout2D(points=pts, projector_id="pca", seed=seed, alpha=alpha, flags=flags)


def classical_mds(
    D: DistanceMatrix, alpha: float | None = None, seed: int | None = None, projector_id: str = "mds"
) -> Layout2D:
    """Double-centered embedding of a distance matrix into 2D."""
    n = D.n
    if n < 3:
        raise ValueError("need at least 3 points")
    d2 = D.d ** 2
    row_mean = d2.mean(axis=1)
    grand = d2.mean()
    B = -0.5 * (d2 - row_mean[:, None] - row_mean[None, :] + grand)
    B = 0.5 * (B + B.T)

    evals, evecs = np.linalg.eigh(B)
    order = np.argsort(evals, kind="stable")[::-1][:2]
    top_vals = evals[order]
    if top_vals[0] <= 0:
        raise AllNegativeSpectrum("distance matrix has no positive double-centered spectrum")
    axes = _fix_signs(evecs[:, order])

    flags: tuple[str, ...] = ()
    clamped = np.maximum(top_vals, 0.0)
    if top_vals[1] <= _RANK_TOL * float(top_vals[0]):
        clamped[1] = 0.0
        flags = ("degenerate_spectrum",)
    pts = axes * np.sqrt(clamped)[None, :]
    return Layout2D(points=pts, projector_id=projector_id, seed=seed, alpha=alpha, flags=flags)
