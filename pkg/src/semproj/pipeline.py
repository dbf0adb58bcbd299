"""End-to-end steering pipeline over one ingested dataset.

Stage order: embed the data, classify every sample against the guiding
prompt, embed the label sentences, sweep the fusion grid, project each
fused set (descending alpha, warm-starting and aligning each layout to its
higher-alpha neighbor), then score every grid layout against the data-space
reference. Every model-derived intermediate is cached on disk keyed by
content ids, so re-running an identical request makes zero gateway calls.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

import numpy as np

from .bundle import LayoutBundle, canonical_hash, load_bundle, save_bundle
from .datasets import DatasetManifest, Sample, load_samples, read_manifest, write_manifest
from .errors import UnknownResource
from .fusion import FusionConfig, alpha_sweep
from .gateway import ModelGateway
from .projection.align import procrustes_align
from .projection.api import ProjectorSpec, project
from .projection.distances import pairwise_distances
from .projection.types import Layout2D
from .prompts import GuidingPrompt, TextLabel, prompt_hash, render_prompt
from .quality import DEFAULT_K, full_report
from .store import EmbeddingRecord, read_cache, write_cache

log = logging.getLogger(__name__)

Reporter = Callable[[str, float], None]


def _null_reporter(stage: str, progress: float) -> None:
    pass


@dataclass(frozen=True)
class Session:
    id: str
    name: str
    modality: str
    manifest_path: str
    created_at: str
    config: dict = field(default_factory=dict)
    bundle_ids: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "modality": self.modality,
            "manifest_path": self.manifest_path,
            "created_at": self.created_at,
            "config": self.config,
            "bundle_ids": list(self.bundle_ids),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Session":
        return cls(
            id=doc["id"],
            name=doc["name"],
            modality=doc["modality"],
            manifest_path=doc["manifest_path"],
            created_at=doc["created_at"],
            config=doc.get("config", {}),
            bundle_ids=tuple(doc.get("bundle_ids", [])),
        )


@dataclass(frozen=True)
class PipelineRequest:
    prompt: GuidingPrompt
    projector: ProjectorSpec
    alpha_grid: tuple[float, ...]
    seed: int | None = None
    fusion: FusionConfig = field(default_factory=FusionConfig)
    label_source: str = "auto"  # auto | truth | slot:<name>
    metrics_k: int = DEFAULT_K

    def __post_init__(self):
        grid = tuple(float(a) for a in self.alpha_grid)
        if not grid or list(grid) != sorted(grid):
            raise ValueError("alpha_grid must be non-empty and ascending")
        if any(not 0.0 <= a <= 1.0 for a in grid):
            raise ValueError("alpha values must lie in [0, 1]")
        object.__setattr__(self, "alpha_grid", grid)


class Workspace:
    """Directory layout holding sessions, manifests, caches, and bundles."""

    def __init__(self, root: Path | str):
        self.root = Path(root)
        for sub in ("sessions", "manifests", "caches", "bundles"):
            (self.root / sub).mkdir(parents=True, exist_ok=True)

    # --- sessions -----------------------------------------------------------

    def create_session(self, manifest: DatasetManifest, config: dict | None = None) -> Session:
        sid = hashlib.sha256("\n".join(manifest.sample_ids).encode()).hexdigest()[:16]
        manifest_path = self.root / "manifests" / f"{sid}.json"
        write_manifest(manifest, manifest_path)
        existing = self._session_path(sid)
        if existing.exists():
            return Session.from_json(json.loads(existing.read_text()))
        session = Session(
            id=sid,
            name=manifest.name,
            modality=manifest.modality,
            manifest_path=str(manifest_path),
            created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
            config=config or {},
        )
        self.save_session(session)
        return session

    def _session_path(self, sid: str) -> Path:
        return self.root / "sessions" / f"{sid}.json"

    def save_session(self, session: Session) -> None:
        self._session_path(session.id).write_text(json.dumps(session.to_json(), indent=2) + "\n")

    def load_session(self, sid: str) -> Session:
        path = self._session_path(sid)
        if not path.exists():
            raise UnknownResource(f"no session {sid}")
        return Session.from_json(json.loads(path.read_text()))

    def list_sessions(self) -> list[Session]:
        return [
            Session.from_json(json.loads(p.read_text()))
            for p in sorted((self.root / "sessions").glob("*.json"))
        ]

    def manifest_for(self, session: Session) -> DatasetManifest:
        return read_manifest(session.manifest_path)

    def find_sample(self, sample_id: str) -> tuple[Session, Sample]:
        for session in self.list_sessions():
            manifest = self.manifest_for(session)
            for ref in manifest.sample_refs:
                if ref.id != sample_id:
                    continue
                if manifest.modality == "image":
                    payload: bytes | str = (Path(manifest.source_path) / ref.path).read_bytes()
                else:
                    payload = ref.text or ""
                return session, Sample(
                    id=ref.id,
                    modality=manifest.modality,
                    payload=payload,
                    truth_label=ref.truth_label,
                )
        raise UnknownResource(f"no sample {sample_id}")

    # --- caches ---------------------------------------------------------------

    def data_cache_path(self, sid: str, model_tag: str) -> Path:
        return self.root / "caches" / f"{sid}.data.{model_tag}.jsonl"

    def label_cache_path(self, sid: str, phash: str, model_tag: str) -> Path:
        return self.root / "caches" / f"{sid}.label.{phash}.{model_tag}.jsonl"

    def textlabel_path(self, sid: str, phash: str) -> Path:
        return self.root / "caches" / f"{sid}.textlabels.{phash}.json"

    def bundle_path(self, bundle_id: str) -> Path:
        return self.root / "bundles" / f"{bundle_id}.json"

    def load_bundle(self, bundle_id: str) -> LayoutBundle:
        return load_bundle(self.bundle_path(bundle_id))

    def list_bundles(self) -> list[str]:
        return sorted(p.stem for p in (self.root / "bundles").glob("*.json"))


def bundle_content_id(
    manifest: DatasetManifest, request: PipelineRequest, model_tag: str
) -> str:
    return canonical_hash(
        {
            "sample_ids": list(manifest.sample_ids),
            "prompt": render_prompt(request.prompt),
            "projector": request.projector.to_json(),
            "alpha_grid": list(request.alpha_grid),
            "seed": request.seed,
            "fusion": {
                "normalize_inputs": request.fusion.normalize_inputs,
                "renormalize_output": request.fusion.renormalize_output,
            },
            "label_source": request.label_source,
            "model_tag": model_tag,
        }
    )


def _cached_embeddings(
    path: Path,
    samples: list[Sample],
    kind: str,
    fetch: Callable[[list[Sample]], list[EmbeddingRecord]],
) -> list[EmbeddingRecord]:
    """Load records covering `samples` from `path`, fetching only what is
    missing; the merged cache is rewritten when anything new arrives."""
    by_id: dict[str, EmbeddingRecord] = {}
    if path.exists():
        for rec in read_cache(path):
            if rec.kind == kind:
                by_id[rec.sample_id] = rec
    missing = [s for s in samples if s.id not in by_id]
    if missing:
        for rec in fetch(missing):
            by_id[rec.sample_id] = rec
        write_cache(list(by_id.values()), path)
    return [by_id[s.id] for s in samples]


def _cached_textlabels(
    path: Path,
    samples: list[Sample],
    fetch: Callable[[list[Sample]], list[TextLabel]],
) -> dict[str, TextLabel]:
    by_id: dict[str, TextLabel] = {}
    if path.exists():
        doc = json.loads(path.read_text())
        by_id = {sid: TextLabel.from_json(d) for sid, d in doc.items()}
    missing = [s for s in samples if s.id not in by_id]
    if missing:
        for lab in fetch(missing):
            by_id[lab.sample_id] = lab
        path.write_text(json.dumps({sid: lab.to_json() for sid, lab in by_id.items()}) + "\n")
    return {s.id: by_id[s.id] for s in samples}


def _label_embeddings_cached(
    path: Path,
    labels: list[TextLabel],
    phash: str,
    gateway: ModelGateway,
) -> list[EmbeddingRecord]:
    by_id: dict[str, EmbeddingRecord] = {}
    if path.exists():
        for rec in read_cache(path):
            if rec.kind == "label" and rec.prompt_hash == phash:
                by_id[rec.sample_id] = rec
    missing = [lab for lab in labels if lab.sample_id not in by_id]
    if missing:
        for rec in gateway.embed_labels(missing, prompt_hash=phash):
            by_id[rec.sample_id] = rec
        write_cache(list(by_id.values()), path)
    return [by_id[lab.sample_id] for lab in labels]


def resolve_silhouette_labels(
    samples: list[Sample],
    labels: dict[str, TextLabel],
    prompt: GuidingPrompt,
    label_source: str,
) -> tuple[list[str], str]:
    """Pick the class column for the silhouette score.

    "truth" uses ground-truth labels, "slot:<name>" a parsed prompt slot, and
    "auto" prefers truth labels when every sample has one.
    """
    if label_source == "auto":
        if all(s.truth_label for s in samples):
            label_source = "truth"
        else:
            label_source = f"slot:{prompt.slots[0].name}"
    if label_source == "truth":
        missing = [s.id for s in samples if not s.truth_label]
        if missing:
            raise ValueError(f"{len(missing)} samples lack truth labels (e.g. {missing[:3]})")
        return [str(s.truth_label) for s in samples], "truth_label"
    if label_source.startswith("slot:"):
        slot = label_source.split(":", 1)[1]
        if slot not in prompt.slot_names():
            raise ValueError(f"prompt has no slot {slot!r}")
        return [labels[s.id].slot_values[slot] for s in samples], label_source
    raise ValueError(f"unknown label_source {label_source!r}")


def run_pipeline(
    workspace: Workspace,
    session: Session,
    request: PipelineRequest,
    gateway: ModelGateway,
    reporter: Reporter = _null_reporter,
) -> LayoutBundle:
    """Execute (or reuse) one steering run and persist its bundle."""
    manifest = workspace.manifest_for(session)
    bundle_id = bundle_content_id(manifest, request, gateway.cfg.model_tag)
    bundle_path = workspace.bundle_path(bundle_id)
    if bundle_path.exists():
        reporter("done", 1.0)
        return load_bundle(bundle_path)

    samples = load_samples(manifest)
    phash = prompt_hash(request.prompt)
    tag = gateway.cfg.model_tag

    reporter("embedding", 0.05)
    data_records = _cached_embeddings(
        workspace.data_cache_path(session.id, tag), samples, "data", gateway.embed_data
    )

    reporter("classifying", 0.25)
    labels = _cached_textlabels(
        workspace.textlabel_path(session.id, phash),
        samples,
        lambda missing: gateway.classify_batch(missing, request.prompt),
    )

    reporter("fusing", 0.45)
    ordered_labels = [labels[s.id] for s in samples]
    label_records = _label_embeddings_cached(
        workspace.label_cache_path(session.id, phash, tag), ordered_labels, phash, gateway
    )
    fused_sets = alpha_sweep(data_records, label_records, request.alpha_grid, request.fusion)

    reporter("projecting", 0.55)
    layouts = _project_grid(fused_sets, request, reporter)

    reporter("scoring", 0.85)
    reference = _reference_matrix(data_records, request.fusion)
    d_high = pairwise_distances(reference)
    class_column, column_name = resolve_silhouette_labels(
        samples, labels, request.prompt, request.label_source
    )
    reports = tuple(
        full_report(d_high, layout, class_column, K=request.metrics_k, label_column=column_name)
        for layout in layouts
    )

    bundle = LayoutBundle(
        id=bundle_id,
        session_id=session.id,
        projector=request.projector,
        alpha_grid=request.alpha_grid,
        layouts=tuple(layouts),
        metrics=reports,
        sample_ids=manifest.sample_ids,
        labels=labels,
        prompt=request.prompt,
        prompt_rendered=render_prompt(request.prompt),
        prompt_hash=phash,
        seed=request.seed,
        label_column=column_name,
    )
    save_bundle(bundle, bundle_path)
    if bundle_id not in session.bundle_ids:
        workspace.save_session(replace(session, bundle_ids=session.bundle_ids + (bundle_id,)))
    reporter("done", 1.0)
    return bundle


def _reference_matrix(data_records: list[EmbeddingRecord], fusion: FusionConfig) -> np.ndarray:
    """Data-space rows as the projection saw them at alpha=1: metrics measure
    fidelity to the original data, not to the blended input."""
    X = np.stack([r.vector.astype(np.float64) for r in data_records])
    if fusion.normalize_inputs:
        X = X / np.linalg.norm(X, axis=1, keepdims=True)
    return X


def _project_grid(fused_sets, request: PipelineRequest, reporter: Reporter) -> list[Layout2D]:
    """Project descending alpha so each layout warm-starts from its
    higher-alpha neighbor, then chain-align everything to the alpha-max root."""
    spec = request.projector
    if request.seed is not None:
        spec = ProjectorSpec(
            method=spec.method, hyperparameters={**spec.hyperparameters, "seed": request.seed}
        )
    by_alpha: dict[float, Layout2D] = {}
    previous: Layout2D | None = None
    total = len(fused_sets)
    for idx, fused in enumerate(reversed(fused_sets)):
        init = previous.points if (previous is not None and spec.method == "tsne") else None
        layout = project(fused.vectors, spec, alpha=fused.alpha, init=init)
        if previous is not None:
            layout = procrustes_align(layout, previous)
        by_alpha[fused.alpha] = layout
        previous = layout
        reporter("projecting", 0.55 + 0.3 * (idx + 1) / total)
    return [by_alpha[fs.alpha] for fs in fused_sets]
