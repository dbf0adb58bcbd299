from __future__ import annotations

import io

import pytest
from PIL import Image

from semproj.datasets import Sample, sample_id_for
from semproj.errors import NotAnImage
from semproj.thumbnails import ThumbnailCache

from conftest import make_png


def _image_sample(w=28, h=28, seed=1):
    img = Image.new("RGB", (w, h), (10, 20, 30))
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    data = buf.getvalue()
    return Sample(id=sample_id_for(data), modality="image", payload=data)


def test_upscale_28_to_64():
    cache = ThumbnailCache()
    png = cache.thumbnail(_image_sample(28, 28), size=64)
    out = Image.open(io.BytesIO(png))
    assert out.size == (64, 64)
    assert out.format == "PNG"


def test_aspect_preserved_on_downscale():
    cache = ThumbnailCache()
    png = cache.thumbnail(_image_sample(200, 100), size=64)
    out = Image.open(io.BytesIO(png))
    assert out.size == (64, 32)


def test_text_sample_rejected():
    sample = Sample(id="t", modality="text", payload="hello")
    with pytest.raises(NotAnImage):
        ThumbnailCache().thumbnail(sample)


def test_at_most_one_decode_per_sample():
    cache = ThumbnailCache()
    samples = [
        Sample(id=sample_id_for(p), modality="image", payload=p)
        for p in (make_png(noise_seed=i) for i in range(10))
    ]
    for _ in range(100):
        for s in samples:
            cache.thumbnail(s, size=64)
    # a second size reuses the decoded source image too
    for s in samples:
        cache.thumbnail(s, size=32)
    assert all(count == 1 for count in cache.decode_counts.values())
    assert len(cache.decode_counts) == 10
