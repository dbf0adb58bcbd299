from __future__ import annotations

import json
import time
from pathlib import Path

import numpy as np
import pytest
from fastapi.testclient import TestClient

from semproj.config import StudioConfig
from semproj.jobs import ProjectJob
from semproj.mocks import MockClassifyServer, MockEmbedServer
from semproj.service import create_app

from conftest import make_png
from test_pipeline import TOPICS, make_text_fixture

SCHEMA_PATH = Path(__file__).parents[1] / "src" / "semproj" / "schemas" / "bundle.schema.json"


@pytest.fixture
def rig(tmp_path):
    path, answers, anchors = make_text_fixture(tmp_path, n=30)
    with MockEmbedServer(anchors=anchors) as embed, MockClassifyServer(answers=answers) as classify:
        cfg = StudioConfig(
            workspace=str(tmp_path / "ws"),
            embed_url=embed.url,
            classify_url=classify.url,
            model_tag="mock",
        )
        app = create_app(cfg)
        with TestClient(app) as client:
            yield {"client": client, "source": str(path), "tmp_path": tmp_path}


def _create_session(client, source):
    resp = client.post(
        "/api/sessions",
        json={"source": source, "modality": "text", "text_field": "text", "label_field": "label"},
    )
    assert resp.status_code == 201, resp.text
    return resp.json()


def _job_body(**kw):
    body = {
        "prompt_template": "What is this news article about? "
        "Answer with the structure: This is about {class}.",
        "slots": [{"name": "class", "vocabulary": list(TOPICS)}],
        "method": "pca",
        "alpha_grid": [0.0, 0.2, 0.4, 1.0],
        "seed": 5,
    }
    body.update(kw)
    return body


def _wait_for_job(client, job_id, timeout=60.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        doc = client.get(f"/api/jobs/{job_id}").json()
        if doc["state"] in ("done", "failed"):
            return doc
        time.sleep(0.05)
    raise TimeoutError("job did not finish")


def test_full_service_flow(rig):
    client = rig["client"]
    session = _create_session(client, rig["source"])
    resp = client.post(f"/api/sessions/{session['id']}/jobs", json=_job_body())
    assert resp.status_code == 202
    job = _wait_for_job(client, resp.json()["id"])
    assert job["state"] == "done", job
    bundle_id = job["bundle_id"]

    metrics = client.get(f"/api/bundles/{bundle_id}/metrics").json()
    assert [r["alpha"] for r in metrics["reports"]] == [0.0, 0.2, 0.4, 1.0]

    layout = client.get(f"/api/bundles/{bundle_id}/layout", params={"alpha": 0.4}).json()
    assert not layout["interpolated"]
    assert layout["metrics"] is not None
    assert len(layout["layout"]["points"]) == 30

    # off-grid alpha=0.3: exact midpoint of the 0.2 and 0.4 layouts
    a = np.asarray(client.get(f"/api/bundles/{bundle_id}/layout", params={"alpha": 0.2}).json()["layout"]["points"])
    b = np.asarray(layout["layout"]["points"])
    mid = client.get(f"/api/bundles/{bundle_id}/layout", params={"alpha": 0.3}).json()
    assert mid["interpolated"]
    assert mid["metrics"] is None
    assert np.abs(np.asarray(mid["layout"]["points"]) - 0.5 * (a + b)).max() < 1e-9

    out_of_range = client.get(f"/api/bundles/{bundle_id}/layout", params={"alpha": 1.2})
    assert out_of_range.status_code == 400
    assert out_of_range.json()["error"] == "alpha_out_of_range"


def test_export_validates_against_schema(rig):
    import jsonschema

    client = rig["client"]
    session = _create_session(client, rig["source"])
    job = client.post(f"/api/sessions/{session['id']}/jobs", json=_job_body()).json()
    done = _wait_for_job(client, job["id"])
    doc = client.get(f"/api/bundles/{done['bundle_id']}/export").json()
    schema = json.loads(SCHEMA_PATH.read_text())
    jsonschema.validate(doc, schema)


def test_unknown_resources_are_404(rig):
    client = rig["client"]
    assert client.get("/api/jobs/nope").status_code == 404
    assert client.get("/api/bundles/nope/metrics").status_code == 404
    assert client.get("/api/samples/nope").status_code == 404
    assert client.get("/api/sessions/nope").status_code == 404


def _manifest_ids(client, sid):
    ws = client.app.state.studio.workspace
    return ws.manifest_for(ws.load_session(sid)).sample_ids


def test_sample_and_thumbnail_endpoints(rig, tmp_path):
    client = rig["client"]
    root = tmp_path / "imgs"
    (root / "cat").mkdir(parents=True)
    (root / "cat" / "a.png").write_bytes(make_png(noise_seed=42))
    resp = client.post("/api/sessions", json={"source": str(root), "modality": "image"})
    assert resp.status_code == 201
    image_ids = _manifest_ids(client, resp.json()["id"])

    doc = client.get(f"/api/samples/{image_ids[0]}").json()
    assert doc["modality"] == "image"
    assert doc["truth_label"] == "cat"
    assert "payload_b64" in doc

    thumb = client.get(f"/api/thumbnails/{image_ids[0]}", params={"size": 64})
    assert thumb.status_code == 200
    assert thumb.headers["content-type"] == "image/png"

    # text samples have no thumbnails
    text_session = _create_session(client, rig["source"])
    text_ids = _manifest_ids(client, text_session["id"])
    resp = client.get(f"/api/thumbnails/{text_ids[0]}")
    assert resp.status_code == 400
    assert resp.json()["error"] == "not_an_image"
    text_doc = client.get(f"/api/samples/{text_ids[0]}").json()
    assert "text" in text_doc


def test_job_states_forward_only():
    job = ProjectJob(id="j", session_id="s")
    job.advance("embedding", 0.1)
    job.advance("classifying", 0.3)
    with pytest.raises(ValueError):
        job.advance("embedding")
    job.advance("done", 1.0)
    assert job.to_json()["state"] == "done"


def test_failed_job_carries_stage(rig, tmp_path):
    client = rig["client"]
    # dataset whose samples the classifier has no fixtures for -> 404s -> failure
    rogue = tmp_path / "rogue.jsonl"
    rogue.write_text("\n".join(json.dumps({"text": f"mystery {i}", "label": "x"}) for i in range(9)) + "\n")
    session = _create_session(client, str(rogue))
    job = client.post(f"/api/sessions/{session['id']}/jobs", json=_job_body()).json()
    done = _wait_for_job(client, job["id"])
    assert done["state"] == "failed"
    assert done["error"].startswith("classifying:")
