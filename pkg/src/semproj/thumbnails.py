"""Aspect-preserving thumbnails for image samples, decoded at most once each."""

from __future__ import annotations

import io
import threading

from PIL import Image

from .datasets import Sample
from .errors import NotAnImage


class ThumbnailCache:
    def __init__(self):
        self._sources: dict[str, Image.Image] = {}
        self._pngs: dict[tuple[str, int], bytes] = {}
        self._lock = threading.Lock()
        self.decode_counts: dict[str, int] = {}

    def thumbnail(self, sample: Sample, size: int = 64) -> bytes:
        if sample.modality != "image":
            raise NotAnImage(f"sample {sample.id} is {sample.modality}, not image")
        if size < 1:
            raise ValueError("size must be positive")
        key = (sample.id, size)
        with self._lock:
            if key in self._pngs:
                return self._pngs[key]
            img = self._sources.get(sample.id)
            if img is None:
                self.decode_counts[sample.id] = self.decode_counts.get(sample.id, 0) + 1
                img = Image.open(io.BytesIO(sample.payload_bytes()))
                img.load()
                self._sources[sample.id] = img
            scale = size / max(img.width, img.height)
            dims = (max(1, round(img.width * scale)), max(1, round(img.height * scale)))
            resample = Image.NEAREST if scale > 1 else Image.LANCZOS
            out = img.resize(dims, resample)
            buf = io.BytesIO()
            out.save(buf, format="PNG")
            png = buf.getvalue()
            self._pngs[key] = png
            return png
