"""semproj: prompt-steerable 2D projections of image and text datasets.

Data embeddings and embeddings of zero-shot label sentences are blended
with a fusion weight alpha and projected to 2D; a grid of alphas gives a
navigable morph between the data-only and label-only views, with rank- and
cluster-based quality metrics per view.
"""

from .bundle import LayoutBundle
from .config import StudioConfig
from .datasets import DatasetManifest, Sample, load_image_dir, load_samples, load_text_table
from .fusion import DEFAULT_ALPHA_GRID, FusedSet, FusionConfig, alpha_sweep, fuse
from .gateway import GatewayConfig, ModelGateway
from .mocks import MockClassifyServer, MockEmbedServer, mock_classify_server, mock_embed_server
from .pipeline import PipelineRequest, Session, Workspace, run_pipeline
from .projection import (
    DistanceMatrix,
    Layout2D,
    ProjectorSpec,
    classical_mds,
    isomap,
    knn_graph,
    pairwise_distances,
    pca_2d,
    procrustes_align,
    project,
    tsne,
    tsne_calibrate,
)
from .prompts import PRESETS, GuidingPrompt, SlotSpec, TextLabel, parse_label, render_prompt
from .quality import (
    MetricsReport,
    ShepardDiagram,
    continuity,
    full_report,
    shepard_spearman,
    silhouette,
    trustworthiness,
)
from .store import EmbeddingRecord, read_cache, write_cache

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_ALPHA_GRID",
    "DatasetManifest",
    "DistanceMatrix",
    "EmbeddingRecord",
    "FusedSet",
    "FusionConfig",
    "GatewayConfig",
    "GuidingPrompt",
    "Layout2D",
    "LayoutBundle",
    "MetricsReport",
    "MockClassifyServer",
    "MockEmbedServer",
    "ModelGateway",
    "PRESETS",
    "PipelineRequest",
    "ProjectorSpec",
    "Sample",
    "Session",
    "ShepardDiagram",
    "SlotSpec",
    "StudioConfig",
    "TextLabel",
    "Workspace",
    "alpha_sweep",
    "classical_mds",
    "continuity",
    "full_report",
    "fuse",
    "isomap",
    "knn_graph",
    "load_image_dir",
    "load_samples",
    "load_text_table",
    "mock_classify_server",
    "mock_embed_server",
    "pairwise_distances",
    "parse_label",
    "pca_2d",
    "procrustes_align",
    "project",
    "read_cache",
    "render_prompt",
    "run_pipeline",
    "shepard_spearman",
    "silhouette",
    "tsne",
    "tsne_calibrate",
    "trustworthiness",
    "write_cache",
]
