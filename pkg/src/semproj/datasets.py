"""Dataset ingestion: image directories and CSV/JSONL text tables.

Sample ids are content-derived (first 16 bytes of the payload's SHA-256,
hex) so re-ingesting the same data reuses every cache. Ordering is fixed at
ingestion: lexicographic relative path for images, file order for tables.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterator

from PIL import Image

from .errors import DuplicateSample, EmptyDataset, MissingField, ParseError, UndecodableImage

log = logging.getLogger(__name__)

IMAGE_EXTENSIONS = {".png", ".jpg", ".jpeg"}

# instrumentation hook: counts of full image decodes per sample id
decode_counts: dict[str, int] = {}


def sample_id_for(payload: bytes | str) -> str:
    data = payload.encode("utf-8") if isinstance(payload, str) else payload
    return hashlib.sha256(data).hexdigest()[:32]


@dataclass(frozen=True)
class Sample:
    id: str
    modality: str  # "image" | "text"
    payload: bytes | str
    truth_label: str | None = None

    def __post_init__(self):
        if self.modality not in ("image", "text"):
            raise ValueError(f"unknown modality {self.modality!r}")
        if not self.payload:
            raise ValueError("payload must be non-empty")

    def payload_bytes(self) -> bytes:
        p = self.payload
        return p.encode("utf-8") if isinstance(p, str) else p


@dataclass(frozen=True)
class SampleRef:
    """Manifest entry: id plus enough locator info to rematerialize the payload."""

    id: str
    truth_label: str | None = None
    path: str | None = None  # relative to manifest source_path (images)
    text: str | None = None  # inline payload (text rows)


@dataclass(frozen=True)
class DatasetManifest:
    name: str
    modality: str
    sample_refs: tuple[SampleRef, ...]
    source_path: str
    created_at: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds")
    )

    def __post_init__(self):
        ids = [r.id for r in self.sample_refs]
        if len(ids) != len(set(ids)):
            raise DuplicateSample("manifest sample ids must be unique")

    @property
    def sample_ids(self) -> tuple[str, ...]:
        return tuple(r.id for r in self.sample_refs)

    @property
    def n(self) -> int:
        return len(self.sample_refs)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "modality": self.modality,
            "source_path": self.source_path,
            "created_at": self.created_at,
            "samples": [
                {
                    "id": r.id,
                    "truth_label": r.truth_label,
                    **({"path": r.path} if r.path is not None else {}),
                    **({"text": r.text} if r.text is not None else {}),
                }
                for r in self.sample_refs
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "DatasetManifest":
        refs = tuple(
            SampleRef(
                id=s["id"],
                truth_label=s.get("truth_label"),
                path=s.get("path"),
                text=s.get("text"),
            )
            for s in doc["samples"]
        )
        return cls(
            name=doc["name"],
            modality=doc["modality"],
            sample_refs=refs,
            source_path=doc["source_path"],
            created_at=doc["created_at"],
        )


def write_manifest(manifest: DatasetManifest, path: Path | str) -> None:
    Path(path).write_text(json.dumps(manifest.to_json(), indent=2) + "\n")


def read_manifest(path: Path | str) -> DatasetManifest:
    return DatasetManifest.from_json(json.loads(Path(path).read_text()))


def load_samples(manifest: DatasetManifest) -> list[Sample]:
    """Materialize payloads for every manifest entry, in manifest order."""
    root = Path(manifest.source_path)
    out: list[Sample] = []
    for ref in manifest.sample_refs:
        if manifest.modality == "image":
            payload: bytes | str = (root / ref.path).read_bytes()
        else:
            payload = ref.text or ""
        out.append(
            Sample(id=ref.id, modality=manifest.modality, payload=payload, truth_label=ref.truth_label)
        )
    return out


def _decodable(data: bytes, sample_id: str) -> bool:
    decode_counts[sample_id] = decode_counts.get(sample_id, 0) + 1
    try:
        with Image.open(io.BytesIO(data)) as img:
            img.load()
        return True
    except Exception:
        return False


def load_image_dir(
    path: Path | str, class_from: str = "subdir", strict: bool = True, name: str | None = None
) -> DatasetManifest:
    """One sample per decodable PNG/JPEG under `path`, ordered by relative path."""
    if class_from not in ("subdir", "none"):
        raise ValueError("class_from must be 'subdir' or 'none'")
    root = Path(path)
    if not root.is_dir():
        raise EmptyDataset(f"{root} is not a directory")
    files = sorted(
        (p for p in root.rglob("*") if p.is_file() and p.suffix.lower() in IMAGE_EXTENSIONS),
        key=lambda p: p.relative_to(root).as_posix(),
    )
    if not files:
        raise EmptyDataset(f"no PNG/JPEG files under {root}")

    refs: list[SampleRef] = []
    seen: set[str] = set()
    for p in files:
        rel = p.relative_to(root).as_posix()
        data = p.read_bytes()
        sid = sample_id_for(data)
        if not _decodable(data, sid):
            if strict:
                raise UndecodableImage(rel)
            log.warning("skipping undecodable image %s", rel)
            continue
        if sid in seen:
            if strict:
                raise DuplicateSample(f"{rel} duplicates an earlier payload (id {sid})")
            log.warning("skipping duplicate payload %s", rel)
            continue
        seen.add(sid)
        label = None
        if class_from == "subdir":
            parent = p.relative_to(root).parent
            label = parent.parts[-1] if parent.parts else None
        refs.append(SampleRef(id=sid, truth_label=label, path=rel))
    if not refs:
        raise EmptyDataset(f"no decodable images under {root}")
    return DatasetManifest(
        name=name or root.name, modality="image", sample_refs=tuple(refs), source_path=str(root)
    )


def _iter_rows(path: Path, fmt: str) -> Iterator[tuple[int, dict]]:
    if fmt == "jsonl":
        with path.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    doc = json.loads(line)
                except json.JSONDecodeError as e:
                    raise ParseError(lineno, f"invalid JSON: {e.msg}") from e
                if not isinstance(doc, dict):
                    raise ParseError(lineno, "row is not an object")
                yield lineno, doc
    elif fmt == "csv":
        with path.open(encoding="utf-8", newline="") as fh:
            try:
                for rownum, doc in enumerate(csv.DictReader(fh), start=1):
                    yield rownum, doc
            except csv.Error as e:
                raise ParseError(rownum + 1, str(e)) from e
    else:
        raise ValueError("format must be 'csv' or 'jsonl'")


def load_text_table(
    path: Path | str,
    format: str = "jsonl",
    text_field: str = "text",
    label_field: str | None = None,
    strict: bool = True,
    name: str | None = None,
) -> DatasetManifest:
    """One sample per row, in file order; text inlined into the manifest."""
    path = Path(path)
    refs: list[SampleRef] = []
    seen: set[str] = set()
    for rownum, row in _iter_rows(path, format):
        text = row.get(text_field)
        if text is None or str(text) == "":
            raise MissingField(rownum, text_field)
        text = str(text)
        label: str | None = None
        if label_field is not None:
            value = row.get(label_field)
            if value is None or str(value) == "":
                raise MissingField(rownum, label_field)
            label = str(value)
        sid = sample_id_for(text)
        if sid in seen:
            if strict:
                raise DuplicateSample(f"row {rownum} duplicates an earlier payload (id {sid})")
            log.warning("skipping duplicate text row %d", rownum)
            continue
        seen.add(sid)
        refs.append(SampleRef(id=sid, truth_label=label, text=text))
    if not refs:
        raise EmptyDataset(f"no rows in {path}")
    return DatasetManifest(
        name=name or path.stem, modality="text", sample_refs=tuple(refs), source_path=str(path.parent)
    )
