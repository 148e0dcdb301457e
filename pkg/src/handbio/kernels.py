"""Backend dispatch for the hot kernels plus thin convenience wrappers."""

import numpy as np

from . import accel
from ._kernels_common import RING8, SIMPLE_LUT, disc_offsets, gaussian_kernel1d

if accel.NUMBA_ENABLED:
    from . import _kernels_jit as _impl
else:
    from . import _kernels_np as _impl

sepconv2 = _impl.sepconv2
erode = _impl.erode
dilate = _impl.dilate
label_components = _impl.label_components
min_dists = _impl.min_dists
nn_indices = _impl.nn_indices

__all__ = [
    "sepconv2",
    "erode",
    "dilate",
    "label_components",
    "min_dists",
    "nn_indices",
    "nearest_neighbours",
    "thin",
    "disc_offsets",
    "gaussian_kernel1d",
]

_GRID_CELL = 8.0
_GRID_THRESHOLD = 200


def thin(mask: np.ndarray, k1d: np.ndarray) -> np.ndarray:
    """Topology-preserving thinning of a uint8/bool mask (see thin_mask)."""
    return _impl.thin_mask(np.ascontiguousarray(mask, dtype=np.uint8), k1d, SIMPLE_LUT, RING8)


def nearest_neighbours(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Exact nearest-neighbour indices; grid-bucketed for large dst sets."""
    src = np.ascontiguousarray(src, dtype=np.float64)
    dst = np.ascontiguousarray(dst, dtype=np.float64)
    if dst.shape[0] <= _GRID_THRESHOLD:
        return nn_indices(src, dst)
    gx0 = float(dst[:, 0].min())
    gy0 = float(dst[:, 1].min())
    gw = int(np.floor((dst[:, 0].max() - gx0) / _GRID_CELL)) + 1
    gh = int(np.floor((dst[:, 1].max() - gy0) / _GRID_CELL)) + 1
    cx = np.floor((dst[:, 0] - gx0) / _GRID_CELL).astype(np.int64)
    cy = np.floor((dst[:, 1] - gy0) / _GRID_CELL).astype(np.int64)
    cells = cy * gw + cx
    order = np.argsort(cells, kind="stable")
    counts = np.bincount(cells, minlength=gw * gh)
    cell_start = np.zeros(gw * gh + 1, dtype=np.int64)
    np.cumsum(counts, out=cell_start[1:])
    return _impl.nn_indices_grid(
        src, dst, cell_start, order.astype(np.int64), gx0, gy0, gw, gh, _GRID_CELL
    )
