from __future__ import annotations

import io
import sys
from pathlib import Path

import numpy as np
import pytest
from PIL import Image

sys.path.insert(0, str(Path(__file__).parent))


def make_png(width=8, height=8, color=(255, 0, 0), noise_seed=None) -> bytes:
    img = Image.new("RGB", (width, height), color)
    if noise_seed is not None:
        rng = np.random.Generator(np.random.PCG64(noise_seed))
        arr = rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8)
        img = Image.fromarray(arr, "RGB")
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


@pytest.fixture
def image_dir(tmp_path: Path) -> Path:
    root = tmp_path / "imgs"
    (root / "cat").mkdir(parents=True)
    (root / "dog").mkdir(parents=True)
    (root / "cat" / "a.png").write_bytes(make_png(noise_seed=1))
    (root / "cat" / "b.png").write_bytes(make_png(noise_seed=2))
    (root / "dog" / "c.png").write_bytes(make_png(noise_seed=3))
    return root


def blob_dataset(
    n_per_class: int = 30,
    classes: int = 3,
    dim: int = 512,
    signal: float = 6.0,
    noise: float = 1.0,
    seed: int = 42,
):
    """Gaussian blobs around orthogonal class directions. Returns (X, labels)."""
    rng = np.random.Generator(np.random.PCG64(seed))
    Q, _ = np.linalg.qr(rng.standard_normal((dim, classes)))
    X = []
    labels = []
    for c in range(classes):
        center = Q[:, c] * signal
        X.append(center[None, :] + noise * rng.standard_normal((n_per_class, dim)))
        labels.extend([f"class{c}"] * n_per_class)
    return np.vstack(X), labels
