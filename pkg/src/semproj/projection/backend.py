"""Kernel backend selection: compiled extension if importable, numpy otherwise.

Set SEMPROJ_KERNELS=python or SEMPROJ_KERNELS=compiled to force a choice;
forcing `compiled` raises if the extension is missing so CI can assert the
build actually happened.
"""

from __future__ import annotations

import os

from . import kernels_py

_requested = os.environ.get("SEMPROJ_KERNELS", "").strip().lower()

if _requested == "python":
    _impl = kernels_py
elif _requested == "compiled":
    from . import _kernels as _impl  # type: ignore[no-redef]
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = kernels_py

BACKEND_NAME: str = _impl.BACKEND_NAME
# BLAS-backed matmul beats hand loops for pairwise distances at embedding
# dims (~512), so that kernel always takes the numpy path; see benchmarks.
pairwise_sq_dists = kernels_py.pairwise_sq_dists
calibrate_bandwidths = _impl.calibrate_bandwidths
tsne_grad_kl = _impl.tsne_grad_kl
shortest_paths = _impl.shortest_paths


def available_backends() -> list[str]:
    names = ["python"]
    try:
        from . import _kernels  # noqa: F401

        names.insert(0, "compiled")
    except ImportError:
        pass
    return names


def get_backend(name: str):
    """Return the kernel module for `name` ("python" or "compiled")."""
    if name == "python":
        return kernels_py
    if name == "compiled":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown kernel backend {name!r}")
