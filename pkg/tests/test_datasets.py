from __future__ import annotations

import json

import pytest

from semproj.datasets import (
    DatasetManifest,
    load_image_dir,
    load_samples,
    load_text_table,
    read_manifest,
    sample_id_for,
    write_manifest,
)
from semproj.errors import (
    DuplicateSample,
    EmptyDataset,
    MissingField,
    ParseError,
    UndecodableImage,
)

from conftest import make_png


def test_image_dir_with_subdir_labels(image_dir):
    m = load_image_dir(image_dir, class_from="subdir")
    assert m.n == 3
    assert m.modality == "image"
    labels = [r.truth_label for r in m.sample_refs]
    assert labels == ["cat", "cat", "dog"]
    # lexicographic relative-path order
    assert [r.path for r in m.sample_refs] == ["cat/a.png", "cat/b.png", "dog/c.png"]


def test_image_ingestion_deterministic(image_dir):
    a = load_image_dir(image_dir)
    b = load_image_dir(image_dir)
    assert a.sample_ids == b.sample_ids


def test_empty_dir_raises(tmp_path):
    (tmp_path / "empty").mkdir()
    with pytest.raises(EmptyDataset):
        load_image_dir(tmp_path / "empty")


def test_corrupt_image_strict_vs_lenient(tmp_path):
    root = tmp_path / "mix"
    root.mkdir()
    (root / "ok.png").write_bytes(make_png(noise_seed=5))
    (root / "bad.png").write_bytes(make_png(noise_seed=6)[:40])  # truncated
    with pytest.raises(UndecodableImage):
        load_image_dir(root, strict=True)
    m = load_image_dir(root, strict=False)
    assert m.n == 1
    assert m.sample_refs[0].path == "ok.png"


def test_duplicate_payload_strict(tmp_path):
    root = tmp_path / "dup"
    root.mkdir()
    data = make_png(noise_seed=7)
    (root / "x.png").write_bytes(data)
    (root / "y.png").write_bytes(data)
    with pytest.raises(DuplicateSample):
        load_image_dir(root, strict=True)
    m = load_image_dir(root, strict=False)
    assert m.n == 1


def test_ids_are_payload_hashes(image_dir):
    m = load_image_dir(image_dir)
    samples = load_samples(m)
    for ref, sample in zip(m.sample_refs, samples):
        assert ref.id == sample_id_for(sample.payload_bytes())
        assert len(ref.id) == 32


def test_jsonl_table(tmp_path):
    p = tmp_path / "rows.jsonl"
    rows = [{"text": f"doc {i}", "label": "World"} for i in range(4)]
    p.write_text("\n".join(json.dumps(r) for r in rows) + "\n")
    m = load_text_table(p, format="jsonl", text_field="text", label_field="label")
    assert m.n == 4
    assert all(r.truth_label == "World" for r in m.sample_refs)
    assert [s.payload for s in load_samples(m)] == [f"doc {i}" for i in range(4)]


def test_csv_missing_field_row_number(tmp_path):
    p = tmp_path / "rows.csv"
    p.write_text("text,label\nfirst,World\n,Sports\n")
    with pytest.raises(MissingField) as err:
        load_text_table(p, format="csv", text_field="text", label_field="label")
    assert err.value.row == 2


def test_jsonl_parse_error_line_number(tmp_path):
    p = tmp_path / "rows.jsonl"
    p.write_text('{"text": "ok"}\n{broken\n')
    with pytest.raises(ParseError) as err:
        load_text_table(p, text_field="text")
    assert err.value.line == 2


def test_agnews_style_fixture(tmp_path):
    topics = ["World", "Sports", "Business", "Sci/Tech"]
    p = tmp_path / "news.jsonl"
    with p.open("w") as fh:
        for i in range(1000):
            fh.write(json.dumps({"text": f"article number {i}", "label": topics[i % 4]}) + "\n")
    m = load_text_table(p, text_field="text", label_field="label")
    assert m.n == 1000
    assert {r.truth_label for r in m.sample_refs} == set(topics)


def test_manifest_round_trip(tmp_path, image_dir):
    m = load_image_dir(image_dir)
    path = tmp_path / "m.json"
    write_manifest(m, path)
    back = read_manifest(path)
    assert back == m


def test_manifest_rejects_duplicate_ids(image_dir):
    m = load_image_dir(image_dir)
    with pytest.raises(DuplicateSample):
        DatasetManifest(
            name="x",
            modality="image",
            sample_refs=m.sample_refs + (m.sample_refs[0],),
            source_path=m.source_path,
        )
