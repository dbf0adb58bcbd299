"""HTTP service exposing the full pipeline: sessions, jobs, bundles,
layouts, metrics, samples, and thumbnails. The UI is served from a static
mount when a built frontend directory is configured."""

from __future__ import annotations

import base64
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from . import errors
from .config import StudioConfig
from .datasets import load_image_dir, load_text_table
from .fusion import FusionConfig
from .gateway import ModelGateway
from .jobs import JobManager, ProjectJob
from .pipeline import PipelineRequest, Session, Workspace, run_pipeline
from .projection.api import ProjectorSpec
from .prompts import GuidingPrompt, SlotSpec
from .thumbnails import ThumbnailCache

_STATUS_BY_CODE = {
    "unknown_resource": 404,
    "alpha_out_of_range": 400,
    "not_an_image": 400,
    "empty_dataset": 400,
    "missing_field": 400,
    "parse_error": 400,
    "invalid_prompt": 400,
    "duplicate_sample": 400,
    "k_too_large_for_normalizer": 400,
    "unknown_method": 400,
}


class SessionBody(BaseModel):
    source: str
    modality: str
    name: str | None = None
    format: str = "jsonl"
    text_field: str = "text"
    label_field: str | None = None
    class_from: str = "subdir"
    strict: bool = True


class SlotBody(BaseModel):
    name: str
    vocabulary: list[str]


class JobBody(BaseModel):
    prompt_template: str
    slots: list[SlotBody]
    method: str = "tsne"
    alpha_grid: list[float] = Field(default_factory=lambda: [0.0, 0.2, 0.4, 0.5, 0.6, 0.8, 1.0])
    seed: int | None = None
    hyperparameters: dict = Field(default_factory=dict)
    label_source: str = "auto"
    normalize_inputs: bool = True


class Studio:
    def __init__(self, config: StudioConfig):
        self.config = config
        self.workspace = Workspace(config.workspace)
        self.jobs = JobManager()
        self.thumbnails = ThumbnailCache()

    def gateway(self) -> ModelGateway:
        return ModelGateway(self.config.gateway())

    def ingest(self, body: SessionBody) -> Session:
        if body.modality == "image":
            manifest = load_image_dir(
                body.source, class_from=body.class_from, strict=body.strict, name=body.name
            )
        elif body.modality == "text":
            manifest = load_text_table(
                body.source,
                format=body.format,
                text_field=body.text_field,
                label_field=body.label_field,
                strict=body.strict,
                name=body.name,
            )
        else:
            raise errors.SemprojError(f"unknown modality {body.modality!r}")
        return self.workspace.create_session(manifest)

    def submit_job(self, session: Session, body: JobBody) -> ProjectJob:
        prompt = GuidingPrompt(
            template=body.prompt_template,
            slots=tuple(SlotSpec(s.name, tuple(s.vocabulary)) for s in body.slots),
        )
        request = PipelineRequest(
            prompt=prompt,
            projector=ProjectorSpec(method=body.method, hyperparameters=body.hyperparameters),
            alpha_grid=tuple(body.alpha_grid),
            seed=body.seed,
            fusion=FusionConfig(normalize_inputs=body.normalize_inputs),
            label_source=body.label_source,
        )
        gateway = self.gateway()

        def work(job: ProjectJob) -> str:
            def reporter(stage: str, progress: float) -> None:
                if stage != "done":
                    job.advance(stage, progress)

            bundle = run_pipeline(self.workspace, session, request, gateway, reporter)
            return bundle.id

        return self.jobs.submit(session.id, work)


def create_app(config: StudioConfig | None = None) -> FastAPI:
    studio = Studio(config or StudioConfig().with_env_overrides())
    app = FastAPI(title="semproj studio", version="0.1.0")
    app.state.studio = studio
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(errors.SemprojError)
    async def _semproj_error(_request: Request, exc: errors.SemprojError):
        status = _STATUS_BY_CODE.get(exc.code, 500)
        return JSONResponse(status_code=status, content={"error": exc.code, "detail": str(exc)})

    @app.post("/api/sessions", status_code=201)
    def create_session(body: SessionBody):
        session = studio.ingest(body)
        return session.to_json()

    @app.get("/api/sessions")
    def list_sessions():
        return [s.to_json() for s in studio.workspace.list_sessions()]

    @app.get("/api/sessions/{sid}")
    def get_session(sid: str):
        return studio.workspace.load_session(sid).to_json()

    @app.post("/api/sessions/{sid}/jobs", status_code=202)
    def create_job(sid: str, body: JobBody):
        session = studio.workspace.load_session(sid)
        job = studio.submit_job(session, body)
        return job.to_json()

    @app.get("/api/jobs/{job_id}")
    def get_job(job_id: str):
        job = studio.jobs.get(job_id)
        if job is None:
            raise errors.UnknownResource(f"no job {job_id}")
        return job.to_json()

    @app.get("/api/bundles/{bundle_id}/layout")
    def get_layout(bundle_id: str, alpha: float):
        bundle = studio.workspace.load_bundle(bundle_id)
        layout, report, interpolated = bundle.layout_at(alpha)
        return {
            "bundle_id": bundle_id,
            "alpha": alpha,
            "interpolated": interpolated,
            "layout": layout.to_json(),
            "metrics": report.to_json() if report is not None else None,
        }

    @app.get("/api/bundles/{bundle_id}/metrics")
    def get_metrics(bundle_id: str):
        bundle = studio.workspace.load_bundle(bundle_id)
        return {
            "bundle_id": bundle_id,
            "alpha_grid": list(bundle.alpha_grid),
            "reports": [
                {"alpha": a, **m.to_json()} for a, m in zip(bundle.alpha_grid, bundle.metrics)
            ],
        }

    @app.get("/api/bundles/{bundle_id}/export")
    def export_bundle(bundle_id: str):
        return studio.workspace.load_bundle(bundle_id).to_json()

    @app.get("/api/bundles")
    def list_bundles():
        return studio.workspace.list_bundles()

    @app.get("/api/samples/{sample_id}")
    def get_sample(sample_id: str):
        session, sample = studio.workspace.find_sample(sample_id)
        doc = {
            "id": sample.id,
            "session_id": session.id,
            "modality": sample.modality,
            "truth_label": sample.truth_label,
        }
        if sample.modality == "text":
            doc["text"] = sample.payload
        else:
            doc["payload_b64"] = base64.b64encode(sample.payload_bytes()).decode("ascii")
        return doc

    @app.get("/api/thumbnails/{sample_id}")
    def get_thumbnail(sample_id: str, size: int = 64):
        _, sample = studio.workspace.find_sample(sample_id)
        png = studio.thumbnails.thumbnail(sample, size=size)
        return Response(content=png, media_type="image/png")

    ui_dir = studio.config.ui_dir
    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
