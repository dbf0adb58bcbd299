"""Background job execution with per-session serialization.

Each session gets one worker queue, so concurrent submissions against the
same dataset run one at a time while different sessions proceed in
parallel. Job state only moves forward; a failure pins the stage it
happened in.
"""

from __future__ import annotations

import queue
import threading
import uuid
from dataclasses import dataclass, field
from typing import Callable

JOB_STATES = (
    "queued",
    "embedding",
    "classifying",
    "fusing",
    "projecting",
    "scoring",
    "done",
    "failed",
)


@dataclass
class ProjectJob:
    id: str
    session_id: str
    state: str = "queued"
    progress: float = 0.0
    error: str | None = None
    bundle_id: str | None = None
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def advance(self, state: str, progress: float | None = None) -> None:
        with self._lock:
            if JOB_STATES.index(state) < JOB_STATES.index(self.state):
                raise ValueError(f"job state cannot move back: {self.state} -> {state}")
            self.state = state
            if progress is not None:
                self.progress = max(self.progress, min(1.0, progress))

    def fail(self, stage: str, error: str) -> None:
        with self._lock:
            self.state = "failed"
            self.error = f"{stage}: {error}"

    def to_json(self) -> dict:
        with self._lock:
            return {
                "id": self.id,
                "session_id": self.session_id,
                "state": self.state,
                "progress": round(self.progress, 4),
                "error": self.error,
                "bundle_id": self.bundle_id,
            }


class JobManager:
    def __init__(self):
        self._jobs: dict[str, ProjectJob] = {}
        self._queues: dict[str, queue.Queue] = {}
        self._lock = threading.Lock()

    def get(self, job_id: str) -> ProjectJob | None:
        with self._lock:
            return self._jobs.get(job_id)

    def submit(self, session_id: str, work: Callable[[ProjectJob], str]) -> ProjectJob:
        """Queue `work`; it receives the job and returns the bundle id."""
        job = ProjectJob(id=uuid.uuid4().hex[:16], session_id=session_id)
        with self._lock:
            self._jobs[job.id] = job
            q = self._queues.get(session_id)
            if q is None:
                q = self._queues[session_id] = queue.Queue()
                threading.Thread(target=self._worker, args=(q,), daemon=True).start()
        q.put((job, work))
        return job

    @staticmethod
    def _worker(q: "queue.Queue") -> None:
        while True:
            job, work = q.get()
            try:
                bundle_id = work(job)
                job.bundle_id = bundle_id
                job.advance("done", 1.0)
            except Exception as e:  # noqa: BLE001 - failure state carries the message
                job.fail(job.state, str(e))
            finally:
                q.task_done()
