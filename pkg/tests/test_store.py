from __future__ import annotations

import json

import numpy as np
import pytest

from semproj.errors import CorruptCache, DuplicateKey, VersionMismatch
from semproj.store import EmbeddingRecord, read_cache, write_cache


def _rec(sid, vec, kind="data", prompt_hash=None):
    return EmbeddingRecord(
        sample_id=sid, kind=kind, model_tag="clip-mock",
        vector=np.asarray(vec, np.float32), prompt_hash=prompt_hash,
    )


def test_round_trip_is_bit_exact(tmp_path):
    records = [_rec("a", [0.1, 0.2, 0.3]), _rec("b", [1e-30, -1.5, np.float32(np.pi)])]
    path = tmp_path / "cache.jsonl"
    write_cache(records, path)
    loaded = read_cache(path)
    assert len(loaded) == 2
    for orig, back in zip(records, loaded):
        assert back.sample_id == orig.sample_id
        assert back.kind == orig.kind
        assert back.model_tag == orig.model_tag
        assert np.array_equal(back.vector, orig.vector)
        assert back.vector.dtype == np.float32


def test_large_randomized_round_trip(tmp_path):
    rng = np.random.Generator(np.random.PCG64(99))
    records = [
        _rec(f"s{i:05d}", rng.standard_normal(64).astype(np.float32)) for i in range(10_000)
    ]
    path = tmp_path / "big.jsonl"
    write_cache(records, path)
    loaded = read_cache(path)
    orig = np.vstack([r.vector for r in records])
    back = np.vstack([r.vector for r in loaded])
    assert orig.tobytes() == back.tobytes()


def test_wrong_magic_is_version_mismatch(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text(json.dumps({"magic": "NOPE", "version": 1, "dim": 2}) + "\n")
    with pytest.raises(VersionMismatch):
        read_cache(path)


def test_duplicate_key_rejected_on_write(tmp_path):
    records = [_rec("a", [1.0]), _rec("a", [2.0])]
    with pytest.raises(DuplicateKey):
        write_cache(records, tmp_path / "dup.jsonl")


def test_same_sample_different_prompt_hash_allowed(tmp_path):
    records = [
        _rec("a", [1.0], kind="label", prompt_hash="p1"),
        _rec("a", [2.0], kind="label", prompt_hash="p2"),
    ]
    path = tmp_path / "ok.jsonl"
    write_cache(records, path)
    assert len(read_cache(path)) == 2


def test_corrupt_line_reports_offset(tmp_path):
    records = [_rec("a", [1.0, 2.0])]
    path = tmp_path / "c.jsonl"
    write_cache(records, path)
    with path.open("a") as fh:
        fh.write("{not json\n")
    with pytest.raises(CorruptCache) as err:
        read_cache(path)
    assert err.value.offset == 3


def test_dim_disagreement_with_header(tmp_path):
    path = tmp_path / "d.jsonl"
    write_cache([_rec("a", [1.0, 2.0])], path)
    rogue = _rec("b", [1.0, 2.0, 3.0]).to_json()
    with path.open("a") as fh:
        fh.write(json.dumps(rogue) + "\n")
    with pytest.raises(CorruptCache):
        read_cache(path)


def test_rejects_non_finite_vector():
    with pytest.raises(ValueError):
        _rec("a", [np.inf, 1.0])


def test_fused_kind_carries_alpha(tmp_path):
    rec = EmbeddingRecord(
        sample_id="a", kind="fused", model_tag="m",
        vector=np.asarray([0.5, 0.5], np.float32), alpha=0.4,
    )
    path = tmp_path / "f.jsonl"
    write_cache([rec], path)
    assert read_cache(path)[0].alpha == 0.4
