from __future__ import annotations

import numpy as np
import pytest

from semproj.projection import (
    classical_mds,
    geodesic_distances,
    isomap,
    knn_graph,
    pairwise_distances,
    procrustes_align,
)
from semproj.projection.align import alignment_residual

from oracles import chord_path_length


def test_collinear_geodesic_equals_euclidean():
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    D = pairwise_distances(X)
    g = knn_graph(D, 2)
    geo, bridged = geodesic_distances(D, g)
    assert not bridged
    assert geo.d[0, 3] == pytest.approx(3.0, abs=1e-12)


def test_quarter_circle_geodesic_near_arc_length():
    theta = np.linspace(0, np.pi / 2, 32)
    X = np.column_stack([np.cos(theta), np.sin(theta)])
    D = pairwise_distances(X)
    g = knn_graph(D, 2)
    geo, bridged = geodesic_distances(D, g)
    assert not bridged
    arc = np.pi / 2
    assert abs(geo.d[0, 31] - arc) / arc < 0.01
    # also sanity-check against an explicit chord-sum walk along the arc
    walk = chord_path_length(X.tolist(), list(range(32)))
    assert geo.d[0, 31] <= walk + 1e-12


def test_disconnected_clusters_get_bridged():
    X = np.vstack(
        [
            np.array([[0.0, 0.0], [0.1, 0.0], [0.0, 0.1]]),
            np.array([[50.0, 50.0], [50.1, 50.0], [50.0, 50.1]]),
        ]
    )
    layout = isomap(X, k=1)
    assert "bridged" in layout.flags
    assert layout.n == 6


def test_isomap_equals_mds_on_complete_graph():
    rng = np.random.Generator(np.random.PCG64(23))
    X = rng.normal(size=(20, 5))
    iso = isomap(X, k=19)
    mds = classical_mds(pairwise_distances(X))
    aligned = procrustes_align(iso, mds)
    assert alignment_residual(aligned, mds) < 1e-9


def test_bridge_count_is_components_minus_one():
    # three far-apart pairs, k=1 keeps them separate
    X = np.array(
        [[0.0, 0], [0.1, 0], [100.0, 0], [100.1, 0], [200.0, 0], [200.1, 0]]
    )
    D = pairwise_distances(X)
    g = knn_graph(D, 1)
    geo, bridged = geodesic_distances(D, g)
    assert bridged
    assert np.isfinite(geo.d).all()
    # nearest-pair bridging: 0..3 joined through the 99.9 gap
    assert geo.d[1, 2] == pytest.approx(99.9, abs=1e-9)
