"""Command-line entry point: ingest | embed | classify | project | metrics |
export | serve | config.

Verbs compose the same pipeline functions the HTTP service uses, so batch
runs and interactive sessions produce identical numbers. Exit codes: 0 ok,
1 user error, 2 internal error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import errors
from .config import StudioConfig
from .datasets import load_image_dir, load_samples, load_text_table
from .fusion import FusionConfig
from .gateway import ModelGateway
from .pipeline import PipelineRequest, Workspace, run_pipeline
from .projection.api import ProjectorSpec
from .projection.distances import pairwise_distances
from .prompts import PRESETS, GuidingPrompt, SlotSpec, prompt_hash
from .quality import shepard_spearman
from .store import read_cache
from .svgplot import export_bundle_svgs


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--workspace", default=None, help="workspace directory")
    parser.add_argument("--config", default=None, help="TOML config file")


def _add_prompt_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--preset", choices=sorted(PRESETS), help="built-in guiding prompt")
    parser.add_argument("--template", help="prompt template with {slot} placeholders")
    parser.add_argument(
        "--slot",
        action="append",
        default=[],
        metavar="NAME=a,b,c",
        help="slot vocabulary (repeatable, ordered)",
    )


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are user errors: exit 1, not 2
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="semproj", description=__doc__)
    sub = p.add_subparsers(dest="verb", required=True)

    ing = sub.add_parser("ingest", help="load a dataset and create a session")
    _add_common(ing)
    ing.add_argument("--source", required=True)
    ing.add_argument("--modality", choices=["image", "text"], required=True)
    ing.add_argument("--name")
    ing.add_argument("--format", choices=["csv", "jsonl"], default="jsonl")
    ing.add_argument("--text-field", default="text")
    ing.add_argument("--label-field")
    ing.add_argument("--class-from", choices=["subdir", "none"], default="subdir")
    ing.add_argument("--lenient", action="store_true")

    emb = sub.add_parser("embed", help="compute/refresh data embeddings for a session")
    _add_common(emb)
    emb.add_argument("--session", required=True)

    cls = sub.add_parser("classify", help="run zero-shot labeling for a session")
    _add_common(cls)
    cls.add_argument("--session", required=True)
    _add_prompt_args(cls)

    prj = sub.add_parser("project", help="full pipeline: embeddings, labels, fusion grid, layouts, metrics")
    _add_common(prj)
    prj.add_argument("--session", required=True)
    _add_prompt_args(prj)
    prj.add_argument("--method", choices=["pca", "mds", "isomap", "tsne", "external"], default="tsne")
    prj.add_argument("--alpha-grid", default="0,0.2,0.4,0.5,0.6,0.8,1.0")
    prj.add_argument("--seed", type=int)
    prj.add_argument("--perplexity", type=float)
    prj.add_argument("--iterations", type=int)
    prj.add_argument("--k-neighbors", type=int)
    prj.add_argument("--external-layout", help="layout JSON for method=external")
    prj.add_argument("--label-source", default="auto")
    prj.add_argument("--no-normalize", action="store_true")
    prj.add_argument("--out", help="also copy the bundle JSON here")

    met = sub.add_parser("metrics", help="print metrics for a bundle")
    _add_common(met)
    met.add_argument("--bundle", required=True)
    met.add_argument("--alpha", type=float)
    met.add_argument("--shepard-csv", help="write Shepard-diagram pairs for --alpha to CSV")

    exp = sub.add_parser("export", help="export a bundle (JSON, optional SVGs)")
    _add_common(exp)
    exp.add_argument("--bundle", required=True)
    exp.add_argument("--out")
    exp.add_argument("--svg-dir")
    exp.add_argument("--color-slot")

    srv = sub.add_parser("serve", help="run the HTTP studio service")
    _add_common(srv)
    srv.add_argument("--host")
    srv.add_argument("--port", type=int)
    srv.add_argument("--ui-dir")

    cfg = sub.add_parser("config", help="configuration helpers")
    _add_common(cfg)
    cfg.add_argument("action", choices=["show"])

    return p


def _load_config(args) -> StudioConfig:
    cfg = StudioConfig.load(args.config) if args.config else StudioConfig().with_env_overrides()
    if getattr(args, "workspace", None):
        from dataclasses import replace

        cfg = replace(cfg, workspace=args.workspace)
    return cfg


def _prompt_from_args(args) -> GuidingPrompt:
    if args.preset:
        return PRESETS[args.preset]
    if not args.template or not args.slot:
        raise errors.InvalidPrompt("need --preset, or --template with at least one --slot")
    slots = []
    for spec in args.slot:
        name, _, vocab = spec.partition("=")
        if not vocab:
            raise errors.InvalidPrompt(f"malformed --slot {spec!r}, expected NAME=a,b,c")
        slots.append(SlotSpec(name.strip(), tuple(v.strip() for v in vocab.split(","))))
    return GuidingPrompt(template=args.template, slots=tuple(slots))


def _cmd_ingest(args, cfg: StudioConfig) -> int:
    ws = Workspace(cfg.workspace)
    if args.modality == "image":
        manifest = load_image_dir(
            args.source, class_from=args.class_from, strict=not args.lenient, name=args.name
        )
    else:
        manifest = load_text_table(
            args.source,
            format=args.format,
            text_field=args.text_field,
            label_field=args.label_field,
            strict=not args.lenient,
            name=args.name,
        )
    session = ws.create_session(manifest)
    print(json.dumps({"session_id": session.id, "n_samples": manifest.n}))
    return 0


def _cmd_embed(args, cfg: StudioConfig) -> int:
    ws = Workspace(cfg.workspace)
    session = ws.load_session(args.session)
    samples = load_samples(ws.manifest_for(session))
    gateway = ModelGateway(cfg.gateway())
    from .pipeline import _cached_embeddings

    records = _cached_embeddings(
        ws.data_cache_path(session.id, gateway.cfg.model_tag), samples, "data", gateway.embed_data
    )
    print(json.dumps({"session_id": session.id, "embedded": len(records)}))
    return 0


def _cmd_classify(args, cfg: StudioConfig) -> int:
    ws = Workspace(cfg.workspace)
    session = ws.load_session(args.session)
    samples = load_samples(ws.manifest_for(session))
    prompt = _prompt_from_args(args)
    gateway = ModelGateway(cfg.gateway())
    from .pipeline import _cached_textlabels

    labels = _cached_textlabels(
        ws.textlabel_path(session.id, prompt_hash(prompt)),
        samples,
        lambda missing: gateway.classify_batch(missing, prompt),
    )
    ok = sum(1 for lab in labels.values() if lab.parse_ok)
    print(json.dumps({"session_id": session.id, "labeled": len(labels), "parse_ok": ok}))
    return 0


def _cmd_project(args, cfg: StudioConfig) -> int:
    ws = Workspace(cfg.workspace)
    session = ws.load_session(args.session)
    hyper: dict = {}
    if args.perplexity is not None:
        hyper["perplexity"] = args.perplexity
    if args.iterations is not None:
        hyper["iterations"] = args.iterations
    if args.k_neighbors is not None:
        hyper["k_neighbors"] = args.k_neighbors
    if args.external_layout:
        hyper["path"] = args.external_layout
    request = PipelineRequest(
        prompt=_prompt_from_args(args),
        projector=ProjectorSpec(method=args.method, hyperparameters=hyper),
        alpha_grid=tuple(float(a) for a in args.alpha_grid.split(",")),
        seed=args.seed,
        fusion=FusionConfig(normalize_inputs=not args.no_normalize),
        label_source=args.label_source,
    )
    gateway = ModelGateway(cfg.gateway())
    bundle = run_pipeline(ws, session, request, gateway)
    path = ws.bundle_path(bundle.id)
    if args.out:
        Path(args.out).write_text(path.read_text())
    print(json.dumps({"bundle_id": bundle.id, "path": str(path)}))
    return 0


def _cmd_metrics(args, cfg: StudioConfig) -> int:
    ws = Workspace(cfg.workspace)
    bundle = ws.load_bundle(args.bundle)
    if args.shepard_csv:
        if args.alpha is None:
            raise errors.SemprojError("--shepard-csv requires --alpha")
        layout, _, _ = bundle.layout_at(args.alpha)
        d_high = _bundle_reference_distances(ws, bundle)
        d_low = pairwise_distances(layout.points)
        diagram = shepard_spearman(d_high, d_low)
        with open(args.shepard_csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["data_distance", "layout_distance"])
            writer.writerows(diagram.pairs.tolist())
    if args.alpha is not None:
        _, report, interpolated = bundle.layout_at(args.alpha)
        doc = {
            "alpha": args.alpha,
            "interpolated": interpolated,
            "metrics": report.to_json() if report else None,
        }
    else:
        doc = {
            "bundle_id": bundle.id,
            "reports": [
                {"alpha": a, **m.to_json()} for a, m in zip(bundle.alpha_grid, bundle.metrics)
            ],
        }
    print(json.dumps(doc, sort_keys=True))
    return 0


def _bundle_reference_distances(ws: Workspace, bundle):
    import numpy as np

    session = ws.load_session(bundle.session_id)
    cache_files = sorted(ws.root.glob(f"caches/{session.id}.data.*.jsonl"))
    if not cache_files:
        raise errors.UnknownResource("no data embedding cache for this bundle's session")
    records = {r.sample_id: r for r in read_cache(cache_files[0])}
    X = np.stack([records[sid].vector.astype(np.float64) for sid in bundle.sample_ids])
    X = X / np.linalg.norm(X, axis=1, keepdims=True)
    return pairwise_distances(X)


def _cmd_export(args, cfg: StudioConfig) -> int:
    ws = Workspace(cfg.workspace)
    bundle = ws.load_bundle(args.bundle)
    out = {}
    if args.out:
        Path(args.out).write_text(json.dumps(bundle.to_json()) + "\n")
        out["json"] = args.out
    if args.svg_dir:
        written = export_bundle_svgs(bundle, Path(args.svg_dir), color_slot=args.color_slot)
        out["svg"] = [str(p) for p in written]
    if not out:
        print(json.dumps(bundle.to_json()))
        return 0
    print(json.dumps(out))
    return 0


def _cmd_serve(args, cfg: StudioConfig) -> int:
    import uvicorn

    from dataclasses import replace

    from .service import create_app

    if args.host:
        cfg = replace(cfg, host=args.host)
    if args.port:
        cfg = replace(cfg, port=args.port)
    if args.ui_dir:
        cfg = replace(cfg, ui_dir=args.ui_dir)
    uvicorn.run(create_app(cfg), host=cfg.host, port=cfg.port, log_level="info")
    return 0


def _cmd_config(args, cfg: StudioConfig) -> int:
    if args.action == "show":
        sys.stdout.write(cfg.show())
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "embed": _cmd_embed,
    "classify": _cmd_classify,
    "project": _cmd_project,
    "metrics": _cmd_metrics,
    "export": _cmd_export,
    "serve": _cmd_serve,
    "config": _cmd_config,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args)
        return _COMMANDS[args.verb](args, cfg)
    except errors.SemprojError as e:
        print(f"error[{e.code}]: {e}", file=sys.stderr)
        return 1
    except (ValueError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # noqa: BLE001
        print(f"internal error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
