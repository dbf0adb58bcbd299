from __future__ import annotations

import numpy as np
import pytest

from semproj.errors import IdSetMismatch, ZeroVector
from semproj.fusion import DEFAULT_ALPHA_GRID, FusionConfig, alpha_sweep, fuse, fused_records
from semproj.mocks import anchor_vectors
from semproj.store import EmbeddingRecord, read_cache, write_cache


def _records(kind, vectors, ids=None, prompt_hash=None):
    ids = ids or [f"s{i}" for i in range(len(vectors))]
    return [
        EmbeddingRecord(sample_id=i, kind=kind, model_tag="m", vector=np.asarray(v, np.float32),
                        prompt_hash=prompt_hash)
        for i, v in zip(ids, vectors)
    ]


def test_alpha_endpoints_no_normalization():
    data = _records("data", [[1.0, 0.0]])
    labels = _records("label", [[0.0, 1.0]])
    one = fuse(data, labels, FusionConfig(alpha=1.0, normalize_inputs=False))
    zero = fuse(data, labels, FusionConfig(alpha=0.0, normalize_inputs=False))
    half = fuse(data, labels, FusionConfig(alpha=0.5, normalize_inputs=False))
    assert np.array_equal(one.vectors, [[1.0, 0.0]])
    assert np.array_equal(zero.vectors, [[0.0, 1.0]])
    assert np.array_equal(half.vectors, [[0.5, 0.5]])


def test_alpha_endpoints_reproduce_normalized_rows_exactly():
    rng = np.random.Generator(np.random.PCG64(10))
    X = rng.normal(size=(20, 8))
    Y = rng.normal(size=(20, 8))
    data = _records("data", X)
    labels = _records("label", Y)
    Xn = X.astype(np.float32).astype(np.float64)
    Xn /= np.linalg.norm(Xn, axis=1, keepdims=True)
    Yn = Y.astype(np.float32).astype(np.float64)
    Yn /= np.linalg.norm(Yn, axis=1, keepdims=True)
    assert np.abs(fuse(data, labels, FusionConfig(alpha=1.0)).vectors - Xn).max() == 0.0
    assert np.abs(fuse(data, labels, FusionConfig(alpha=0.0)).vectors - Yn).max() == 0.0


def test_midpoint_matches_scalar_oracle():
    rng = np.random.Generator(np.random.PCG64(11))
    X = rng.normal(size=(5, 6))
    Y = rng.normal(size=(5, 6))
    out = fuse(_records("data", X), _records("label", Y), FusionConfig(alpha=0.5)).vectors
    for i in range(5):
        xi = X[i].astype(np.float32).astype(np.float64)
        yi = Y[i].astype(np.float32).astype(np.float64)
        xi = xi / np.sqrt(sum(v * v for v in xi))
        yi = yi / np.sqrt(sum(v * v for v in yi))
        for j in range(6):
            assert out[i, j] == pytest.approx(0.5 * xi[j] + 0.5 * yi[j], abs=1e-7)


def test_argument_symmetry():
    rng = np.random.Generator(np.random.PCG64(12))
    X, Y = rng.normal(size=(7, 4)), rng.normal(size=(7, 4))
    data, labels = _records("data", X), _records("label", Y)
    a = fuse(data, labels, FusionConfig(alpha=0.3)).vectors
    b = fuse(labels, data, FusionConfig(alpha=0.7)).vectors
    assert np.abs(a - b).max() < 1e-15


def test_unit_norm_inputs_property():
    rng = np.random.Generator(np.random.PCG64(13))
    X = rng.normal(size=(9, 5)) * 100
    data = _records("data", X)
    labels = _records("label", rng.normal(size=(9, 5)) * 0.01)
    out = fuse(data, labels, FusionConfig(alpha=1.0))
    norms = np.linalg.norm(out.vectors, axis=1)
    assert np.abs(norms - 1.0).max() < 1e-6


def test_id_set_mismatch():
    data = _records("data", [[1.0, 0.0], [0.0, 1.0]], ids=["a", "b"])
    labels = _records("label", [[1.0, 0.0], [0.0, 1.0]], ids=["a", "c"])
    with pytest.raises(IdSetMismatch):
        fuse(data, labels)


def test_zero_vector_rejected():
    data = _records("data", [[0.0, 0.0], [1.0, 0.0]], ids=["a", "b"])
    labels = _records("label", [[1.0, 0.0], [0.0, 1.0]], ids=["a", "b"])
    with pytest.raises(ZeroVector):
        fuse(data, labels)


def test_sweep_matches_per_alpha_fuse():
    rng = np.random.Generator(np.random.PCG64(14))
    X, Y = rng.normal(size=(6, 4)), rng.normal(size=(6, 4))
    data, labels = _records("data", X), _records("label", Y)
    sets = alpha_sweep(data, labels, [0.2, 0.8])
    assert len(sets) == 2
    for fs in sets:
        single = fuse(data, labels, FusionConfig(alpha=fs.alpha))
        assert np.array_equal(fs.vectors, single.vectors)


def test_sweep_validates_grid():
    data = _records("data", [[1.0, 0.0]])
    labels = _records("label", [[0.0, 1.0]])
    with pytest.raises(ValueError):
        alpha_sweep(data, labels, [0.8, 0.2])
    with pytest.raises(ValueError):
        alpha_sweep(data, labels, [0.2, 1.2])


def test_default_grid_sweep_convex_combination_oracle():
    rng = np.random.Generator(np.random.PCG64(15))
    X, Y = rng.normal(size=(4, 3)), rng.normal(size=(4, 3))
    data, labels = _records("data", X), _records("label", Y)
    sets = alpha_sweep(data, labels, DEFAULT_ALPHA_GRID)
    assert len(sets) == 7
    end0, end1 = sets[0].vectors, sets[-1].vectors
    for fs in sets:
        expected = fs.alpha * end1 + (1 - fs.alpha) * end0
        assert np.abs(fs.vectors - expected).max() < 1e-12


def test_shared_label_rows_collapse_at_alpha_zero():
    rng = np.random.Generator(np.random.PCG64(16))
    X = rng.normal(size=(6, 8))
    anchor = anchor_vectors(2, 8)
    Y = np.array([anchor[0]] * 3 + [anchor[1]] * 3)
    data, labels = _records("data", X), _records("label", Y)
    out = fuse(data, labels, FusionConfig(alpha=0.0)).vectors
    assert np.abs(out[0] - out[1]).max() == 0.0
    assert np.abs(out[3] - out[5]).max() == 0.0


def test_fused_set_persists_in_cache_format(tmp_path):
    rng = np.random.Generator(np.random.PCG64(18))
    data = _records("data", rng.normal(size=(4, 6)))
    labels = _records("label", rng.normal(size=(4, 6)), prompt_hash="ph")
    fs = fuse(data, labels, FusionConfig(alpha=0.4))
    records = fused_records(fs)
    path = tmp_path / "fused.jsonl"
    write_cache(records, path)
    back = read_cache(path)
    assert all(r.kind == "fused" and r.alpha == 0.4 for r in back)
    stacked = np.vstack([r.vector for r in back])
    assert np.array_equal(stacked, fs.vectors.astype(np.float32))


def test_within_group_spread_monotone_in_alpha():
    rng = np.random.Generator(np.random.PCG64(17))
    X = rng.normal(size=(10, 16))
    anchor = anchor_vectors(2, 16)
    Y = np.array([anchor[0]] * 5 + [anchor[1]] * 5)
    data, labels = _records("data", X), _records("label", Y)
    groups = [list(range(5)), list(range(5, 10))]

    def mean_within(vectors):
        total, count = 0.0, 0
        for g in groups:
            for a in range(len(g)):
                for b in range(a + 1, len(g)):
                    total += float(np.linalg.norm(vectors[g[a]] - vectors[g[b]]))
                    count += 1
        return total / count

    spreads = [mean_within(fs.vectors) for fs in alpha_sweep(data, labels, DEFAULT_ALPHA_GRID)]
    assert all(a <= b + 1e-12 for a, b in zip(spreads, spreads[1:]))
