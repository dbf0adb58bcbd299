from __future__ import annotations

import numpy as np
import pytest

from semproj.errors import AllNegativeSpectrum
from semproj.projection import classical_mds, pairwise_distances, pca_2d, procrustes_align
from semproj.projection.align import alignment_residual
from semproj.projection.types import DistanceMatrix, Layout2D


def test_pca_2d_input_is_rigid_motion_of_itself():
    rng = np.random.Generator(np.random.PCG64(5))
    X = rng.normal(size=(40, 2))
    X -= X.mean(axis=0)
    layout = pca_2d(X)
    ref = Layout2D(points=X, projector_id="raw")
    aligned = procrustes_align(layout, ref)
    assert alignment_residual(aligned, ref) < 1e-9


def test_pca_rank1_second_axis_zero():
    t = np.linspace(0, 1, 12)
    direction = np.array([1.0, -2.0, 0.5, 3.0, 1.0])
    X = t[:, None] * direction[None, :]
    layout = pca_2d(X)
    assert "degenerate_covariance" in layout.flags
    assert np.all(layout.points[:, 1] == 0.0)


def test_pca_variance_ordering_matches_eigen_oracle():
    rng = np.random.Generator(np.random.PCG64(9))
    base = rng.normal(size=(200, 3)) * np.array([5.0, 2.0, 0.4])
    Q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    X = base @ Q
    layout = pca_2d(X)
    v1, v2 = layout.points[:, 0].var(), layout.points[:, 1].var()
    assert v1 >= v2
    # eigen-oracle: dense symmetric eigendecomposition of the covariance
    cov = np.cov(X - X.mean(0), rowvar=False)
    evals = np.sort(np.linalg.eigvalsh(cov))[::-1]
    n = X.shape[0]
    assert v1 * n / (n - 1) == pytest.approx(evals[0], rel=1e-9)
    assert v2 * n / (n - 1) == pytest.approx(evals[1], rel=1e-9)
    assert v2 >= evals[2] * (n - 1) / n - 1e-12


def test_pca_deterministic_sign():
    rng = np.random.Generator(np.random.PCG64(2))
    X = rng.normal(size=(30, 4))
    a = pca_2d(X).points
    b = pca_2d(X.copy()).points
    assert np.array_equal(a, b)


def test_mds_double_centering_hand_values():
    # 1D points {0, 1, 2}: B[0][0]=1, B[0][1]=0, B[0][2]=-1
    D = pairwise_distances(np.array([[0.0], [1.0], [2.0]]))
    layout = classical_mds(D)
    x = np.sort(layout.points[:, 0])
    assert np.allclose(x, [-1.0, 0.0, 1.0], atol=1e-9)
    assert np.allclose(layout.points[:, 1], 0.0, atol=1e-9)


def test_mds_exact_on_euclidean_2d_input():
    rng = np.random.Generator(np.random.PCG64(13))
    X = rng.normal(size=(25, 2))
    D = pairwise_distances(X)
    layout = classical_mds(D)
    ref = Layout2D(points=X, projector_id="raw")
    aligned = procrustes_align(layout, ref)
    assert alignment_residual(aligned, ref) < 1e-6


def test_mds_homogeneity_under_scaling():
    rng = np.random.Generator(np.random.PCG64(17))
    X = rng.normal(size=(12, 2))
    D = pairwise_distances(X)
    scaled = DistanceMatrix(3.5 * D.d)
    a = classical_mds(D).points
    b = classical_mds(scaled).points
    # same layout up to sign per axis, scaled by 3.5
    for c in range(2):
        direct = np.abs(b[:, c] - 3.5 * a[:, c]).max()
        flipped = np.abs(b[:, c] + 3.5 * a[:, c]).max()
        assert min(direct, flipped) < 1e-8


def test_mds_all_negative_spectrum():
    # distances that are maximally non-Euclidean: a single huge off-diagonal
    d = np.zeros((3, 3))
    with pytest.raises(AllNegativeSpectrum):
        classical_mds(DistanceMatrix(d))
