"""Exact (O(n^2)) t-SNE with deterministic initialization.

Desk scale tops out around 5000 points, so the dense formulation is used
throughout; the quadratic inner loops live in the kernel backend.
"""

from __future__ import annotations

import numpy as np

from ..errors import CalibrationFailure, NumericalBlowup
from . import backend
from .distances import pairwise_distances
from .linear import pca_2d
from .types import DistanceMatrix, Layout2D

EXAGGERATION = 12.0
EXAGGERATION_ITERS = 250
MOMENTUM_EARLY = 0.5
MOMENTUM_LATE = 0.8
TRACE_EVERY = 50
ENTROPY_TOL = 1e-4
INIT_STD = 1e-4


def tsne_calibrate(
    D: DistanceMatrix, perplexity: float, tol: float = ENTROPY_TOL, max_iter: int = 50
) -> tuple[np.ndarray, np.ndarray]:
    """Per-point bandwidths and the conditional neighbor matrix.

    Returns (sigma, P) where row i of P is p_{.|i} with p_{i|i}=0, and the
    entropy of every row matches the requested perplexity within `tol`.
    """
    sigma, P, failures = _calibrate(D, perplexity, tol, max_iter)
    if len(failures):
        raise CalibrationFailure(int(failures[0]))
    return sigma, P


def _calibrate(
    D: DistanceMatrix, perplexity: float, tol: float = ENTROPY_TOL, max_iter: int = 50
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = D.n
    if not 1.0 < perplexity <= n - 1:
        raise ValueError(f"perplexity must be in (1, {n - 1}]")
    d2 = np.ascontiguousarray(D.d ** 2)
    P, beta, failures = backend.calibrate_bandwidths(d2, float(perplexity), tol, max_iter)
    sigma = np.sqrt(0.5 / beta)
    return sigma, P, failures


def joint_probabilities(
    D: DistanceMatrix, perplexity: float, strict: bool = True
) -> tuple[np.ndarray, bool]:
    """Symmetrized joint P: (p_{j|i} + p_{i|j}) / 2n; entries sum to 1.

    With strict=False, rows whose target perplexity is unreachable (exact
    duplicate points bound the entropy from below) keep their best-effort
    distribution instead of raising; the second return flags that case.
    """
    _, cond, failures = _calibrate(D, perplexity)
    if strict and len(failures):
        raise CalibrationFailure(int(failures[0]))
    return (cond + cond.T) / (2.0 * D.n), bool(len(failures))


def _initial_layout(X: np.ndarray, init: np.ndarray | None) -> np.ndarray:
    if init is not None:
        Y = np.array(init, dtype=np.float64)
    else:
        Y = pca_2d(X).points.copy()
    # shrink to the usual tiny spread so early exaggeration can act
    spread = Y[:, 0].std()
    if spread > 0:
        Y *= INIT_STD / spread
    return Y


def tsne(
    X: np.ndarray,
    perplexity: float = 30.0,
    iterations: int = 1000,
    learning_rate: float | None = None,
    seed: int | None = None,
    alpha: float | None = None,
    init: np.ndarray | None = None,
) -> Layout2D:
    """Gradient descent on KL(P || Q) with early exaggeration and momentum.

    Initialization is the PCA layout (or an explicit warm start), rescaled to
    a tiny spread, so runs are reproducible without random state. The KL
    objective against the unexaggerated P is recorded every 50 iterations.
    """
    X = np.ascontiguousarray(np.asarray(X, dtype=np.float64))
    n = X.shape[0]
    if n < 8:
        raise ValueError("need at least 8 samples")
    perplexity = min(float(perplexity), (n - 1) / 3.0)
    if perplexity <= 1.0:
        raise ValueError("perplexity must exceed 1")
    if learning_rate is None:
        learning_rate = max(50.0, n / 12.0)

    D = pairwise_distances(X)
    # duplicate rows (label-only fusion collapses groups) can make the target
    # perplexity unreachable; proceed on best-effort rows and flag the layout
    P, saturated = joint_probabilities(D, perplexity, strict=False)

    Y = _initial_layout(X, init)
    velocity = np.zeros_like(Y)
    trace: list[float] = []

    for it in range(1, iterations + 1):
        P_eff = P * EXAGGERATION if it <= EXAGGERATION_ITERS else P
        want_kl = it % TRACE_EVERY == 0
        grad, kl = backend.tsne_grad_kl(P_eff, P, Y, want_kl)
        if want_kl:
            trace.append(float(kl))
        momentum = MOMENTUM_EARLY if it < EXAGGERATION_ITERS else MOMENTUM_LATE
        velocity = momentum * velocity - learning_rate * grad
        Y = Y + velocity
        Y = Y - Y.mean(axis=0)
        if not np.isfinite(Y).all():
            raise NumericalBlowup(it, trace)

    return Layout2D(
        points=Y,
        projector_id="tsne",
        seed=seed,
        alpha=alpha,
        converged=True,
        objective_trace=trace,
        flags=("calibration_saturated",) if saturated else (),
    )
