"""Layout bundles: the aligned per-alpha layouts plus metrics one steering
run produces, exactly what the UI navigates."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import numpy as np

from .errors import AlphaOutOfRange, UnknownResource
from .projection.api import ProjectorSpec
from .projection.types import Layout2D
from .prompts import GuidingPrompt, TextLabel
from .quality import MetricsReport

SCHEMA_VERSION = 1
_GRID_EPS = 1e-9


def canonical_hash(doc: Any, length: int = 16) -> str:
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()[:length]


@dataclass(frozen=True)
class LayoutBundle:
    id: str
    session_id: str
    projector: ProjectorSpec
    alpha_grid: tuple[float, ...]
    layouts: tuple[Layout2D, ...]  # ascending alpha, aligned toward the alpha-max root
    metrics: tuple[MetricsReport, ...]
    sample_ids: tuple[str, ...]
    labels: dict[str, TextLabel]
    prompt: GuidingPrompt
    prompt_rendered: str
    prompt_hash: str
    seed: int | None
    label_column: str
    created_at: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds")
    )

    def __post_init__(self):
        if len(self.layouts) != len(self.alpha_grid):
            raise ValueError("one layout per grid alpha required")
        if len(self.metrics) != len(self.alpha_grid):
            raise ValueError("one metrics report per grid alpha required")
        n = len(self.sample_ids)
        if any(l.n != n for l in self.layouts):
            raise ValueError("all layouts must cover every sample")

    def layout_at(self, alpha: float) -> tuple[Layout2D, MetricsReport | None, bool]:
        """Stored layout at a grid point, or a flagged linear interpolation of
        the two neighboring aligned layouts (no metrics off-grid)."""
        grid = self.alpha_grid
        if alpha < grid[0] - _GRID_EPS or alpha > grid[-1] + _GRID_EPS:
            raise AlphaOutOfRange(f"alpha={alpha} outside grid [{grid[0]}, {grid[-1]}]")
        for i, a in enumerate(grid):
            if abs(alpha - a) <= _GRID_EPS:
                return self.layouts[i], self.metrics[i], False
        hi = next(i for i, a in enumerate(grid) if a > alpha)
        lo = hi - 1
        t = (alpha - grid[lo]) / (grid[hi] - grid[lo])
        pts = (1.0 - t) * self.layouts[lo].points + t * self.layouts[hi].points
        layout = Layout2D(
            points=pts,
            projector_id=self.layouts[lo].projector_id,
            seed=self.seed,
            alpha=alpha,
            flags=("interpolated",),
        )
        return layout, None, True

    def to_json(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "bundle_id": self.id,
            "session_id": self.session_id,
            "created_at": self.created_at,
            "projector": self.projector.to_json(),
            "alpha_grid": list(self.alpha_grid),
            "seed": self.seed,
            "prompt": {
                **self.prompt.to_json(),
                "rendered": self.prompt_rendered,
                "prompt_hash": self.prompt_hash,
            },
            "sample_ids": list(self.sample_ids),
            "labels": {sid: lab.to_json() for sid, lab in self.labels.items()},
            "layouts": [
                {"alpha": a, **layout.to_json()}
                for a, layout in zip(self.alpha_grid, self.layouts)
            ],
            "metrics": [
                {"alpha": a, **report.to_json()}
                for a, report in zip(self.alpha_grid, self.metrics)
            ],
            "label_column": self.label_column,
        }

    @classmethod
    def from_json(cls, doc: dict[str, Any]) -> "LayoutBundle":
        prompt = GuidingPrompt.from_json(doc["prompt"])
        return cls(
            id=doc["bundle_id"],
            session_id=doc["session_id"],
            projector=ProjectorSpec(
                method=doc["projector"]["method"],
                hyperparameters=doc["projector"]["hyperparameters"],
            ),
            alpha_grid=tuple(float(a) for a in doc["alpha_grid"]),
            layouts=tuple(Layout2D.from_json(d) for d in doc["layouts"]),
            metrics=tuple(MetricsReport.from_json(d) for d in doc["metrics"]),
            sample_ids=tuple(doc["sample_ids"]),
            labels={sid: TextLabel.from_json(d) for sid, d in doc["labels"].items()},
            prompt=prompt,
            prompt_rendered=doc["prompt"]["rendered"],
            prompt_hash=doc["prompt"]["prompt_hash"],
            seed=doc["seed"],
            label_column=doc["label_column"],
            created_at=doc["created_at"],
        )


def save_bundle(bundle: LayoutBundle, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(bundle.to_json()) + "\n")


def load_bundle(path: Path) -> LayoutBundle:
    if not Path(path).exists():
        raise UnknownResource(f"no bundle at {path}")
    return LayoutBundle.from_json(json.loads(Path(path).read_text()))


def interpolate_points(p0: np.ndarray, p1: np.ndarray, t: float) -> np.ndarray:
    return (1.0 - t) * p0 + t * p1
