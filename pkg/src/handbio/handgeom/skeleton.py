"""Topology-preserving skeletons and their salient points."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import kernels
from .._kernels_common import gaussian_kernel1d
from ..raster import BinaryMask

_N8 = ((-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1))


@dataclass
class Skeleton:
    """Thin medial structure of a mask plus its corner/endpoint points.

    ``points`` are (x, y) pixel centres; ``source`` is the mask that was
    thinned (used for clearance queries by the landmark detectors).
    """

    mask: np.ndarray
    points: np.ndarray
    corners: np.ndarray
    endpoints: np.ndarray
    source: np.ndarray = field(repr=False, default=None)

    @property
    def size(self) -> int:
        return int(self.points.shape[0])


def _neighbour_count(skel: np.ndarray) -> np.ndarray:
    padded = np.pad(skel.astype(np.uint8), 1)
    acc = np.zeros(skel.shape, dtype=np.int16)
    h, w = skel.shape
    for dy, dx in _N8:
        acc += padded[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w]
    return acc


def skeletonize(mask: BinaryMask, psf_size: int = 9) -> Skeleton:
    """Iterative blur-guided thinning with simple-point removal.

    Preserves the component and hole counts of the input; masks that are
    already thin come back unchanged.
    """
    if psf_size % 2 == 0 or psf_size < 3:
        raise ValueError("psf_size must be odd and >= 3")
    bits = mask.bits
    if not bits.any():
        raise ValueError("skeletonize needs a non-empty mask")
    k1d = gaussian_kernel1d(psf_size / 6.0, psf_size)
    thin = kernels.thin(bits.astype(np.uint8), k1d).astype(bool)
    return _build_skeleton(thin, source=bits)


def _build_skeleton(thin: np.ndarray, source: np.ndarray) -> Skeleton:
    ys, xs = np.nonzero(thin)
    points = np.stack([xs, ys], axis=1).astype(np.float64)
    counts = _neighbour_count(thin)
    eys, exs = np.nonzero(thin & (counts == 1))
    endpoints = np.stack([exs, eys], axis=1).astype(np.float64)
    skel = Skeleton(mask=thin, points=points, corners=endpoints, endpoints=endpoints, source=source)
    skel.corners = detect_corners(skel)
    return skel


def center_of_mass(skel: Skeleton) -> np.ndarray:
    """Arithmetic mean of the skeleton point coordinates."""
    if skel.size == 0:
        raise ValueError("empty skeleton")
    return skel.points.mean(axis=0)


def trace_branch(skel_mask: np.ndarray, start_xy, max_len: int = 64) -> np.ndarray:
    """Walk a skeleton branch from an endpoint until a junction or max_len.

    Returns ordered (x, y) points beginning at the endpoint. Deterministic:
    at forks the 4-adjacent, then scan-order first neighbour wins.
    """
    h, w = skel_mask.shape
    y, x = int(round(start_xy[1])), int(round(start_xy[0]))
    if not (0 <= y < h and 0 <= x < w) or not skel_mask[y, x]:
        raise ValueError("branch start must lie on the skeleton")
    visited = {(y, x)}
    path = [(x, y)]
    cur = (y, x)
    while len(path) < max_len:
        cy, cx = cur
        nbs = []
        for dy, dx in _N8:
            ny, nx = cy + dy, cx + dx
            if 0 <= ny < h and 0 <= nx < w and skel_mask[ny, nx] and (ny, nx) not in visited:
                nbs.append((abs(dy) + abs(dx), ny, nx))
        if not nbs:
            break
        nbs.sort()
        _, ny, nx = nbs[0]
        # stop after stepping onto a junction pixel
        deg = 0
        for dy, dx in _N8:
            yy, xx = ny + dy, nx + dx
            if 0 <= yy < h and 0 <= xx < w and skel_mask[yy, xx]:
                deg += 1
        visited.add((ny, nx))
        path.append((nx, ny))
        if deg >= 3:
            break
        cur = (ny, nx)
    return np.array(path, dtype=np.float64)


def _window_points(points: np.ndarray, center: np.ndarray, radius: float) -> np.ndarray:
    d = np.abs(points - center).max(axis=1)
    return points[d <= radius]


def detect_corners(
    skel: Skeleton,
    max_angle_deg: float = 160.0,
    min_axis_ratio: float = 1.5,
    nms_radius: float = 5.0,
    window: int = 5,
) -> np.ndarray:
    """Endpoints plus high-curvature points of the skeleton.

    A candidate needs a local fitted-ellipse axis ratio above the minimum
    and an interior angle between its two arms at most max_angle_deg;
    non-maximum suppression keeps the sharpest corner within nms_radius.
    """
    if skel.size == 0:
        raise ValueError("empty skeleton")
    pts = skel.points
    candidates = []
    for p in pts:
        win = _window_points(pts, p, window)
        if len(win) < 5:
            continue
        centred = win - win.mean(axis=0)
        cov = centred.T @ centred / len(win)
        evals, evecs = np.linalg.eigh(cov)
        if evals[0] <= 1e-9:
            continue  # perfectly straight: not a bend
        ratio = np.sqrt(evals[1] / evals[0])
        if ratio < min_axis_ratio:
            continue
        axis = evecs[:, 1]
        proj = (win - p) @ axis
        pos = win[proj > 0.5]
        neg = win[proj < -0.5]
        if len(pos) == 0 or len(neg) == 0:
            continue
        u1 = pos.mean(axis=0) - p
        u2 = neg.mean(axis=0) - p
        n1, n2 = np.hypot(*u1), np.hypot(*u2)
        if n1 == 0 or n2 == 0:
            continue
        cosang = np.clip(u1 @ u2 / (n1 * n2), -1.0, 1.0)
        angle = np.degrees(np.arccos(cosang))
        if angle <= max_angle_deg:
            candidates.append((180.0 - angle, p))
    kept = []
    for strength, p in sorted(candidates, key=lambda c: (-c[0], c[1][1], c[1][0])):
        if all(np.hypot(*(p - q)) > nms_radius for q in kept):
            kept.append(p)
    corners = list(skel.endpoints)
    for p in kept:
        if all(np.hypot(*(p - e)) > 1e-9 for e in corners):
            corners.append(p)
    if not corners:
        return np.zeros((0, 2), dtype=np.float64)
    return np.array(corners, dtype=np.float64)
