"""Deterministic in-process mock endpoints for the embedder and classifier.

The embedder returns a unit vector drawn from an RNG seeded with the
SHA-256 of the input, so identical inputs always embed identically. In
anchor mode, configured strings map to mutually orthogonal unit vectors;
those are the well-separated targets steering fixtures rely on. The
classifier answers from a fixture table keyed by the content-derived sample
id, which it can recompute from the request payload alone.

Both servers track request counts and the high-water mark of concurrent
in-flight requests (exposed at GET /stats) so tests can assert batching
behavior.
"""

from __future__ import annotations

import base64
import hashlib
import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np

from .datasets import sample_id_for
from .errors import PortInUse
from .store import encode_vector

DEFAULT_DIM = 512


def hash_unit_vector(payload: bytes, dim: int = DEFAULT_DIM) -> np.ndarray:
    """Unit vector fully determined by the payload bytes."""
    digest = hashlib.sha256(payload).digest()
    seed = int.from_bytes(digest[:8], "big")
    rng = np.random.Generator(np.random.PCG64(seed))
    v = rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def anchor_vectors(count: int, dim: int = DEFAULT_DIM, seed: int = 1234) -> np.ndarray:
    """`count` mutually orthogonal unit vectors (QR of a seeded matrix)."""
    if count > dim:
        raise ValueError("cannot build more orthogonal anchors than dimensions")
    rng = np.random.Generator(np.random.PCG64(seed))
    Q, _ = np.linalg.qr(rng.standard_normal((dim, count)))
    # fix signs so the anchor set is independent of LAPACK conventions
    for c in range(count):
        pivot = int(np.argmax(np.abs(Q[:, c])))
        if Q[pivot, c] < 0:
            Q[:, c] = -Q[:, c]
    return Q.T.copy()


class _Stats:
    def __init__(self):
        self.lock = threading.Lock()
        self.requests = 0
        self.in_flight = 0
        self.max_concurrent = 0

    def enter(self):
        with self.lock:
            self.requests += 1
            self.in_flight += 1
            self.max_concurrent = max(self.max_concurrent, self.in_flight)

    def leave(self):
        with self.lock:
            self.in_flight -= 1

    def snapshot(self) -> dict:
        with self.lock:
            return {"requests": self.requests, "max_concurrent": self.max_concurrent}

    def reset(self):
        with self.lock:
            self.requests = 0
            self.max_concurrent = 0


class _MockServer:
    def __init__(self, host: str = "127.0.0.1", port: int = 0):
        self.stats = _Stats()
        handler = self._make_handler()
        try:
            self._httpd = ThreadingHTTPServer((host, port), handler)
        except OSError as e:
            raise PortInUse(f"cannot bind {host}:{port}: {e}") from e
        self._httpd.daemon_threads = True
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)

    def _make_handler(self):
        raise NotImplementedError

    @property
    def port(self) -> int:
        return self._httpd.server_address[1]

    def start(self) -> "_MockServer":
        self._thread.start()
        return self

    def stop(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc):
        self.stop()


class _JsonHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    disable_nagle_algorithm = True  # header+body go out as separate writes
    server_ref: "_MockServer" = None  # type: ignore[assignment]

    def log_message(self, *args):  # silence per-request stderr noise
        pass

    def _send(self, status: int, doc: dict | None = None, raw: bytes | None = None, ctype: str = "application/json"):
        body = raw if raw is not None else json.dumps(doc).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):
        if self.path == "/stats":
            self._send(200, self.server_ref.stats.snapshot())
        else:
            self._send(404, {"error": "not_found", "detail": self.path})

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length", "0"))
        return json.loads(self.rfile.read(length))


class MockEmbedServer(_MockServer):
    """POST /embed with {"input_b64"|"input_text"} -> {"dim", "vec_b64"}."""

    def __init__(
        self,
        dim: int = DEFAULT_DIM,
        anchors: dict[str, int] | None = None,
        anchor_seed: int = 1234,
        delay_s: float = 0.0,
        host: str = "127.0.0.1",
        port: int = 0,
    ):
        self.dim = dim
        self.delay_s = delay_s
        self.anchor_map: dict[str, np.ndarray] = {}
        if anchors:
            mat = anchor_vectors(max(anchors.values()) + 1, dim, seed=anchor_seed)
            self.anchor_map = {text: mat[idx] for text, idx in anchors.items()}
        super().__init__(host=host, port=port)

    @property
    def url(self) -> str:
        return f"http://127.0.0.1:{self.port}/embed"

    def vector_for(self, payload: bytes | str) -> np.ndarray:
        if isinstance(payload, str):
            if payload in self.anchor_map:
                return self.anchor_map[payload]
            payload = payload.encode("utf-8")
        return hash_unit_vector(payload, self.dim)

    def _make_handler(self):
        server = self

        class Handler(_JsonHandler):
            server_ref = server

            def do_POST(self):
                server.stats.enter()
                try:
                    doc = self._read_body()
                    if server.delay_s:
                        time.sleep(server.delay_s)
                    if "input_b64" in doc:
                        payload: bytes | str = base64.b64decode(doc["input_b64"])
                    elif "input_text" in doc:
                        payload = doc["input_text"]
                    else:
                        self._send(400, {"error": "bad_request", "detail": "no input"})
                        return
                    vec = server.vector_for(payload)
                    self._send(200, {"dim": server.dim, "vec_b64": encode_vector(vec)})
                finally:
                    server.stats.leave()

        return Handler


class MockClassifyServer(_MockServer):
    """OpenAI-style chat completions answered from a sample-id fixture table."""

    def __init__(
        self,
        answers: dict[str, str] | None = None,
        default_answer: str | None = None,
        delay_s: float = 0.0,
        fail_first: int = 0,
        host: str = "127.0.0.1",
        port: int = 0,
    ):
        self.answers = dict(answers or {})
        self.default_answer = default_answer
        self.delay_s = delay_s
        self._fail_remaining = fail_first
        super().__init__(host=host, port=port)

    @property
    def url(self) -> str:
        return f"http://127.0.0.1:{self.port}/v1/chat/completions"

    @staticmethod
    def _payload_from_messages(doc: dict) -> bytes | None:
        """Recover the classified payload: the image part, or the text part
        after the prompt."""
        try:
            content = doc["messages"][0]["content"]
        except (KeyError, IndexError, TypeError):
            return None
        texts = [p["text"] for p in content if p.get("type") == "text"]
        images = [p["data"] for p in content if p.get("type") == "image_b64"]
        if images:
            return base64.b64decode(images[0])
        if len(texts) >= 2:
            return texts[1].encode("utf-8")
        return None

    def _make_handler(self):
        server = self

        class Handler(_JsonHandler):
            server_ref = server

            def do_POST(self):
                server.stats.enter()
                try:
                    doc = self._read_body()  # always drain: keep-alive reuse
                    if server.delay_s:
                        time.sleep(server.delay_s)
                    if server._fail_remaining > 0:
                        server._fail_remaining -= 1
                        self._send(503, {"error": "unavailable", "detail": "warming up"})
                        return
                    payload = server._payload_from_messages(doc)
                    if payload is None:
                        self._send(400, {"error": "bad_request", "detail": "no payload part"})
                        return
                    sid = sample_id_for(payload)
                    answer = server.answers.get(sid, server.default_answer)
                    if answer is None:
                        self._send(404, {"error": "not_found", "detail": f"no fixture for {sid}"})
                        return
                    self._send(200, {"choices": [{"message": {"content": answer}}]})
                finally:
                    server.stats.leave()

        return Handler


def mock_embed_server(**kwargs) -> MockEmbedServer:
    return MockEmbedServer(**kwargs).start()


def mock_classify_server(**kwargs) -> MockClassifyServer:
    return MockClassifyServer(**kwargs).start()
