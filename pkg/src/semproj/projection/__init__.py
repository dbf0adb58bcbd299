"""2D projection backends and layout alignment."""

from .align import alignment_residual, procrustes_align
from .api import ProjectorSpec, load_external_layout, project, save_layout
from .distances import knn_graph, pairwise_distances
from .linear import classical_mds, pca_2d
from .manifold import geodesic_distances, isomap
from .tsne import joint_probabilities, tsne, tsne_calibrate
from .types import DistanceMatrix, Layout2D, NeighborGraph

__all__ = [
    "DistanceMatrix",
    "Layout2D",
    "NeighborGraph",
    "ProjectorSpec",
    "alignment_residual",
    "classical_mds",
    "geodesic_distances",
    "isomap",
    "joint_probabilities",
    "knn_graph",
    "load_external_layout",
    "pairwise_distances",
    "pca_2d",
    "procrustes_align",
    "project",
    "save_layout",
    "tsne",
    "tsne_calibrate",
]
