"""Cross-checks between the compiled kernel extension and the numpy
fallback. Skipped entirely when the extension was not built."""

from __future__ import annotations

import numpy as np
import pytest

from semproj.projection import backend
from semproj.projection.types import DistanceMatrix

compiled = pytest.importorskip("semproj.projection._kernels")
from semproj.projection import kernels_py  # noqa: E402


@pytest.fixture(scope="module")
def data():
    rng = np.random.Generator(np.random.PCG64(123))
    X = np.ascontiguousarray(rng.normal(size=(40, 16)))
    return X


def test_pairwise_agreement(data):
    a = compiled.pairwise_sq_dists(data)
    b = kernels_py.pairwise_sq_dists(data)
    assert np.abs(a - b).max() < 1e-10


def test_calibration_contract_on_both(data):
    d2 = kernels_py.pairwise_sq_dists(data)
    for impl in (compiled, kernels_py):
        P, beta, failed = impl.calibrate_bandwidths(d2, 12.0, 1e-4, 50)
        assert len(failed) == 0
        assert np.allclose(P.sum(axis=1), 1.0, atol=1e-12)
        assert np.all(np.diag(P) == 0.0)
        logp = np.where(P > 0, np.log2(np.maximum(P, 1e-320)), 0.0)
        perp = 2.0 ** (-(P * logp).sum(axis=1))
        assert np.abs(perp - 12.0).max() < 1e-4
        assert np.all(beta > 0)


def test_grad_and_kl_agreement(data):
    d2 = kernels_py.pairwise_sq_dists(data)
    P, _, _ = kernels_py.calibrate_bandwidths(d2, 10.0, 1e-4, 50)
    P = (P + P.T) / (2 * data.shape[0])
    rng = np.random.Generator(np.random.PCG64(5))
    Y = np.ascontiguousarray(rng.normal(size=(40, 2)))
    ga, kla = compiled.tsne_grad_kl(P, P, Y, True)
    gb, klb = kernels_py.tsne_grad_kl(P, P, Y, True)
    assert np.abs(ga - gb).max() < 1e-12
    assert abs(kla - klb) < 1e-12


def test_shortest_paths_agreement(data):
    from semproj.projection.distances import knn_graph

    D = DistanceMatrix(np.sqrt(kernels_py.pairwise_sq_dists(data)))
    g = knn_graph(D, 4)
    a = compiled.shortest_paths(g.indptr, g.indices, g.weights, g.n)
    b = kernels_py.shortest_paths(g.indptr, g.indices, g.weights, g.n)
    assert np.array_equal(np.isfinite(a), np.isfinite(b))
    finite = np.isfinite(a)
    assert np.abs(a[finite] - b[finite]).max() < 1e-12


def test_forced_backend_env(monkeypatch):
    assert backend.get_backend("python").BACKEND_NAME == "python"
    assert backend.get_backend("compiled").BACKEND_NAME == "compiled"
    with pytest.raises(ValueError):
        backend.get_backend("cuda")
