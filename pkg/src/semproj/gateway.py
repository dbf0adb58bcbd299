"""HTTP client for the external embedder and zero-shot classifier.

The classifier speaks an OpenAI-style chat-completions protocol; the
embedder a minimal POST returning {"dim", "vec_b64"}. Batch calls fan out
over a bounded thread pool (at most `parallelism` requests in flight) and
reassemble results in input order. Transport failures are retried with
exponential backoff; responses are never cached here.
"""

from __future__ import annotations

import base64
import os
import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import requests

from .datasets import Sample
from .errors import (
    DimMismatch,
    EndpointUnavailable,
    GatewayTimeout,
    InvalidLabel,
    OverLimit,
)
from .prompts import GuidingPrompt, TextLabel, label_from_answer, render_prompt
from .store import EmbeddingRecord, decode_vector

ENV_EMBED_URL = "SEMPROJ_EMBED_URL"
ENV_CLASSIFY_URL = "SEMPROJ_CLASSIFY_URL"


@dataclass(frozen=True)
class GatewayConfig:
    embed_url: str = "http://127.0.0.1:8801/embed"
    classify_url: str = "http://127.0.0.1:8802/v1/chat/completions"
    parallelism: int = 4
    max_retries: int = 3
    timeout: float = 30.0
    model_tag: str = "mock"
    expected_dim: int = 512
    max_payload_bytes: int = 8 * 1024 * 1024
    backoff_base: float = 0.25

    def __post_init__(self):
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")

    def with_env_overrides(self) -> "GatewayConfig":
        cfg = self
        if os.environ.get(ENV_EMBED_URL):
            cfg = replace(cfg, embed_url=os.environ[ENV_EMBED_URL])
        if os.environ.get(ENV_CLASSIFY_URL):
            cfg = replace(cfg, classify_url=os.environ[ENV_CLASSIFY_URL])
        return cfg


class ModelGateway:
    """Thread-safe client; per-request state lives on the worker's stack."""

    def __init__(self, cfg: GatewayConfig):
        self.cfg = cfg
        self._local = threading.local()

    def _session(self) -> requests.Session:
        s = getattr(self._local, "session", None)
        if s is None:
            s = requests.Session()
            self._local.session = s
        return s

    def _post(self, url: str, payload: dict) -> dict:
        delay = self.cfg.backoff_base
        attempts = self.cfg.max_retries + 1
        last: Exception | None = None
        for attempt in range(attempts):
            try:
                resp = self._session().post(url, json=payload, timeout=self.cfg.timeout)
            except requests.Timeout as e:
                last = GatewayTimeout(f"request to {url} timed out")
                last.__cause__ = e
            except requests.RequestException as e:
                last = EndpointUnavailable(f"cannot reach {url}: {e}")
            else:
                if resp.status_code >= 500:
                    last = EndpointUnavailable(f"{url} returned {resp.status_code}")
                elif resp.status_code >= 400:
                    raise EndpointUnavailable(
                        f"{url} rejected request ({resp.status_code}): {resp.text[:200]}"
                    )
                else:
                    return resp.json()
            if attempt < attempts - 1:
                time.sleep(delay * (1.0 + random.uniform(-0.2, 0.2)))
                delay *= 2.0
        assert last is not None
        raise last

    # --- classification -----------------------------------------------------

    def classify_sample(
        self, sample: Sample, prompt: GuidingPrompt, strict: bool = False
    ) -> TextLabel:
        if len(sample.payload_bytes()) > self.cfg.max_payload_bytes:
            raise OverLimit(
                f"sample {sample.id} exceeds {self.cfg.max_payload_bytes} bytes"
            )
        content: list[dict] = [{"type": "text", "text": render_prompt(prompt)}]
        if sample.modality == "image":
            content.append(
                {
                    "type": "image_b64",
                    "data": base64.b64encode(sample.payload_bytes()).decode("ascii"),
                }
            )
        else:
            content.append({"type": "text", "text": str(sample.payload)})
        doc = self._post(
            self.cfg.classify_url,
            {"model": self.cfg.model_tag, "messages": [{"role": "user", "content": content}]},
        )
        answer = doc["choices"][0]["message"]["content"]
        return label_from_answer(sample.id, answer, prompt, strict=strict)

    def classify_batch(
        self, samples: Sequence[Sample], prompt: GuidingPrompt, strict: bool = False
    ) -> list[TextLabel]:
        with ThreadPoolExecutor(max_workers=self.cfg.parallelism) as pool:
            return list(pool.map(lambda s: self.classify_sample(s, prompt, strict), samples))

    # --- embedding ------------------------------------------------------------

    def _embed_one(self, payload: bytes | str):
        if isinstance(payload, bytes):
            body = {"model": self.cfg.model_tag, "input_b64": base64.b64encode(payload).decode("ascii")}
        else:
            body = {"model": self.cfg.model_tag, "input_text": payload}
        doc = self._post(self.cfg.embed_url, body)
        vec = decode_vector(doc["vec_b64"])
        got = int(doc.get("dim", vec.shape[0]))
        if got != self.cfg.expected_dim or vec.shape[0] != self.cfg.expected_dim:
            raise DimMismatch(self.cfg.expected_dim, got)
        return vec

    def embed_data(self, samples: Sequence[Sample]) -> list[EmbeddingRecord]:
        payloads = [
            s.payload_bytes() if s.modality == "image" else str(s.payload) for s in samples
        ]
        with ThreadPoolExecutor(max_workers=self.cfg.parallelism) as pool:
            vectors = list(pool.map(self._embed_one, payloads))
        return [
            EmbeddingRecord(sample_id=s.id, kind="data", model_tag=self.cfg.model_tag, vector=v)
            for s, v in zip(samples, vectors)
        ]

    def embed_labels(
        self, labels: Sequence[TextLabel], prompt_hash: str
    ) -> list[EmbeddingRecord]:
        """Embed each label's full sentence; identical sentences share one call."""
        for lab in labels:
            if not lab.raw_text:
                raise InvalidLabel(f"label for sample {lab.sample_id} has empty text")
        distinct = sorted({lab.raw_text for lab in labels})
        with ThreadPoolExecutor(max_workers=self.cfg.parallelism) as pool:
            vectors = dict(zip(distinct, pool.map(self._embed_one, distinct)))
        return [
            EmbeddingRecord(
                sample_id=lab.sample_id,
                kind="label",
                model_tag=self.cfg.model_tag,
                vector=vectors[lab.raw_text],
                prompt_hash=prompt_hash,
            )
            for lab in labels
        ]
