"""Embedding records and their on-disk cache format.

Cache files are JSONL: a header line carrying magic/version/model/dim, then
one record per line with the vector as base64 of little-endian float32, so
round trips are bit-exact. Writers hold an exclusive advisory lock on the
target; readers a shared one.
"""

from __future__ import annotations

import base64
import fcntl
import json
import os
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .errors import CorruptCache, DuplicateKey, VersionMismatch

CACHE_MAGIC = "SPJ1"
CACHE_VERSION = 1
RECORD_KINDS = ("data", "label", "fused")


@dataclass(frozen=True)
class EmbeddingRecord:
    sample_id: str
    kind: str
    model_tag: str
    vector: np.ndarray
    prompt_hash: str | None = None
    alpha: float | None = None

    def __post_init__(self):
        if self.kind not in RECORD_KINDS:
            raise ValueError(f"kind must be one of {RECORD_KINDS}, got {self.kind!r}")
        vec = np.ascontiguousarray(np.asarray(self.vector, dtype=np.float32))
        if vec.ndim != 1 or vec.size == 0:
            raise ValueError("vector must be a non-empty 1D array")
        if not np.isfinite(vec).all():
            raise ValueError("vector components must be finite")
        object.__setattr__(self, "vector", vec)

    @property
    def dim(self) -> int:
        return int(self.vector.shape[0])

    @property
    def key(self) -> tuple[str, str, str, str]:
        return (self.sample_id, self.kind, self.model_tag, self.prompt_hash or "")

    def to_json(self) -> dict:
        doc = {
            "sample_id": self.sample_id,
            "kind": self.kind,
            "model_tag": self.model_tag,
            "dim": self.dim,
            "vec_b64": encode_vector(self.vector),
        }
        if self.prompt_hash is not None:
            doc["prompt_hash"] = self.prompt_hash
        if self.alpha is not None:
            doc["alpha"] = self.alpha
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "EmbeddingRecord":
        vec = decode_vector(doc["vec_b64"])
        if int(doc["dim"]) != vec.shape[0]:
            raise ValueError(f"declared dim {doc['dim']} != vector length {vec.shape[0]}")
        return cls(
            sample_id=doc["sample_id"],
            kind=doc["kind"],
            model_tag=doc["model_tag"],
            vector=vec,
            prompt_hash=doc.get("prompt_hash"),
            alpha=doc.get("alpha"),
        )


def encode_vector(vec: np.ndarray) -> str:
    return base64.b64encode(np.asarray(vec, dtype="<f4").tobytes()).decode("ascii")


def decode_vector(b64: str) -> np.ndarray:
    raw = base64.b64decode(b64.encode("ascii"), validate=True)
    if len(raw) % 4 != 0:
        raise ValueError("vector byte length not a multiple of 4")
    return np.frombuffer(raw, dtype="<f4").copy()


@contextmanager
def _locked(path: Path, exclusive: bool) -> Iterator[int]:
    flags = os.O_RDWR | os.O_CREAT if exclusive else os.O_RDONLY
    fd = os.open(path, flags, 0o644)
    try:
        fcntl.flock(fd, fcntl.LOCK_EX if exclusive else fcntl.LOCK_SH)
        yield fd
    finally:
        fcntl.flock(fd, fcntl.LOCK_UN)
        os.close(fd)


def _validate_unique(records: Sequence[EmbeddingRecord]) -> None:
    seen: set[tuple[str, str, str, str]] = set()
    for r in records:
        if r.key in seen:
            raise DuplicateKey(f"duplicate record key {r.key}")
        seen.add(r.key)


def write_cache(records: Sequence[EmbeddingRecord], path: Path | str) -> None:
    """Write a whole cache file atomically under an exclusive lock."""
    records = list(records)
    if not records:
        raise ValueError("refusing to write an empty cache")
    _validate_unique(records)
    dims = {r.dim for r in records}
    if len(dims) != 1:
        raise ValueError(f"all records in one cache must share a dim, got {sorted(dims)}")
    tags = {r.model_tag for r in records}
    header = {
        "magic": CACHE_MAGIC,
        "version": CACHE_VERSION,
        "model_tag": records[0].model_tag if len(tags) == 1 else "mixed",
        "dim": records[0].dim,
    }
    body = "\n".join([json.dumps(header)] + [json.dumps(r.to_json()) for r in records]) + "\n"
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with _locked(path, exclusive=True) as fd:
        os.ftruncate(fd, 0)
        os.write(fd, body.encode("utf-8"))
        os.fsync(fd)


def read_cache(path: Path | str) -> list[EmbeddingRecord]:
    path = Path(path)
    with _locked(path, exclusive=False) as fd:
        text = os.read(fd, os.fstat(fd).st_size).decode("utf-8")
    lines = text.splitlines()
    if not lines:
        raise CorruptCache(0, "empty file")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as e:
        raise CorruptCache(1, f"unreadable header: {e}") from e
    if header.get("magic") != CACHE_MAGIC or header.get("version") != CACHE_VERSION:
        raise VersionMismatch(
            f"expected magic={CACHE_MAGIC} version={CACHE_VERSION}, "
            f"got magic={header.get('magic')!r} version={header.get('version')!r}"
        )
    records: list[EmbeddingRecord] = []
    seen: set[tuple[str, str, str, str]] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            rec = EmbeddingRecord.from_json(json.loads(line))
        except (json.JSONDecodeError, KeyError, ValueError) as e:
            raise CorruptCache(lineno, str(e)) from e
        if int(header["dim"]) != rec.dim:
            raise CorruptCache(lineno, f"record dim {rec.dim} != header dim {header['dim']}")
        if rec.key in seen:
            raise DuplicateKey(f"duplicate record key {rec.key} at line {lineno}")
        seen.add(rec.key)
        records.append(rec)
    return records
