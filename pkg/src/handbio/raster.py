"""Pixel-level primitives: images, masks, filtering, morphology, labelling.

Conventions used across the package:

* arrays are indexed ``[y, x]``; geometric points are ``(x, y)`` float pairs
* angles are degrees from North (up, i.e. -y), clockwise positive
* all operations are pure; inputs are never mutated
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from ._kernels_common import disc_offsets, gaussian_kernel1d


@dataclass(frozen=True)
class RasterImage:
    """Grayscale or RGB image with intensities in [0, 255]."""

    pixels: np.ndarray

    def __post_init__(self):
        p = self.pixels
        if p.dtype != np.uint8:
            raise ValueError("pixels must be uint8")
        if p.ndim == 2:
            pass
        elif p.ndim == 3 and p.shape[2] == 3:
            pass
        else:
            raise ValueError("pixels must be (h, w) or (h, w, 3)")
        if p.shape[0] < 1 or p.shape[1] < 1:
            raise ValueError("image must be at least 1x1")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def channels(self) -> int:
        return 1 if self.pixels.ndim == 2 else 3


@dataclass(frozen=True)
class BinaryMask:
    """Boolean foreground mask with the same grid as the image it masks."""

    bits: np.ndarray

    def __post_init__(self):
        if self.bits.dtype != np.bool_ or self.bits.ndim != 2:
            raise ValueError("bits must be a 2D bool array")

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def count(self) -> int:
        return int(self.bits.sum())


@dataclass(frozen=True)
class Kernel2D:
    """Square odd-sized convolution kernel."""

    size: int
    weights: np.ndarray

    def __post_init__(self):
        if self.size % 2 == 0 or self.size < 1:
            raise ValueError("kernel size must be odd")
        if self.weights.shape != (self.size, self.size):
            raise ValueError("weights shape must match size")

    @classmethod
    def gaussian(cls, sigma: float, size: int) -> "Kernel2D":
        k = gaussian_kernel1d(sigma, size)
        w = np.outer(k, k)
        if abs(w.sum() - 1.0) > 1e-9:
            raise AssertionError("gaussian kernel must sum to 1")
        return cls(size=size, weights=w)


@dataclass(frozen=True)
class Blob:
    blob_id: int
    pixel_count: int
    bounding_box: tuple  # (x0, y0, x1, y1), inclusive


def _round_half_up(a: np.ndarray) -> np.ndarray:
    return np.floor(a + 0.5)


def to_grayscale(img: RasterImage) -> RasterImage:
    """ITU-R BT.601 luma: round(0.299 R + 0.587 G + 0.114 B)."""
    if img.channels != 3:
        raise ValueError("to_grayscale expects a 3-channel image")
    p = img.pixels.astype(np.float64)
    gray = _round_half_up(0.299 * p[:, :, 0] + 0.587 * p[:, :, 1] + 0.114 * p[:, :, 2])
    return RasterImage(np.clip(gray, 0, 255).astype(np.uint8))


def blur_array(arr: np.ndarray, sigma: float, size: int) -> np.ndarray:
    """Separable Gaussian blur of a float array, edge replication."""
    k = gaussian_kernel1d(sigma, size)
    return kernels.sepconv2(np.ascontiguousarray(arr, dtype=np.float64), k)


def gaussian_blur(img: RasterImage, sigma: float, size: int) -> RasterImage:
    if size % 2 == 0 or size < 3:
        raise ValueError("kernel size must be odd and >= 3")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if img.channels == 1:
        out = blur_array(img.pixels, sigma, size)
        return RasterImage(np.clip(_round_half_up(out), 0, 255).astype(np.uint8))
    chans = [blur_array(img.pixels[:, :, c], sigma, size) for c in range(3)]
    out = np.stack(chans, axis=2)
    return RasterImage(np.clip(_round_half_up(out), 0, 255).astype(np.uint8))


def morph(mask: BinaryMask, op: str, radius: int) -> BinaryMask:
    """Set morphology with a disc structuring element."""
    if radius < 1:
        raise ValueError("radius must be >= 1")
    offs = disc_offsets(radius)
    m = mask.bits.astype(np.uint8)
    if op == "erode":
        out = kernels.erode(m, offs)
    elif op == "dilate":
        out = kernels.dilate(m, offs)
    elif op == "open":
        out = kernels.dilate(kernels.erode(m, offs), offs)
    elif op == "close":
        out = kernels.erode(kernels.dilate(m, offs), offs)
    else:
        raise ValueError(f"unknown morphology op: {op!r}")
    return BinaryMask(out.astype(bool))


def label_blobs(mask: BinaryMask) -> list[Blob]:
    """8-connected foreground blobs, ids assigned in scan order."""
    labels = kernels.label_components(mask.bits.astype(np.uint8), True)
    n = int(labels.max())
    if n == 0:
        return []
    ys, xs = np.nonzero(labels)
    ls = labels[ys, xs]
    counts = np.bincount(ls, minlength=n + 1)
    blobs = []
    for i in range(1, n + 1):
        sel = ls == i
        bx, by = xs[sel], ys[sel]
        blobs.append(
            Blob(
                blob_id=i,
                pixel_count=int(counts[i]),
                bounding_box=(int(bx.min()), int(by.min()), int(bx.max()), int(by.max())),
            )
        )
    return blobs


def select_largest(mask: BinaryMask) -> BinaryMask:
    """Keep only the largest blob; ties go to the smallest blob id."""
    labels = kernels.label_components(mask.bits.astype(np.uint8), True)
    n = int(labels.max())
    if n == 0:
        return BinaryMask(np.zeros_like(mask.bits))
    counts = np.bincount(labels.ravel(), minlength=n + 1)
    counts[0] = -1
    best = int(np.argmax(counts))
    return BinaryMask(labels == best)


def _otsu_from_histogram(hist: np.ndarray) -> int:
    """Threshold maximizing between-class variance; -1 when degenerate.

    Class 0 is [0..t], class 1 is [t+1..255]; ties break to the smallest t.
    """
    total = hist.sum()
    if total == 0 or (hist > 0).sum() <= 1:
        return -1
    levels = np.arange(256, dtype=np.float64)
    w0 = np.cumsum(hist).astype(np.float64)
    s0 = np.cumsum(hist * levels)
    w1 = total - w0
    valid = (w0 > 0) & (w1 > 0)
    mu0 = s0 / np.maximum(w0, 1e-300)
    mu1 = (s0[-1] - s0) / np.maximum(w1, 1e-300)
    between = np.where(valid, w0 * w1 * (mu0 - mu1) ** 2, -1.0)
    return int(np.argmax(between))


def detect_edges(img: RasterImage) -> BinaryMask:
    """Sobel gradient magnitude, Otsu threshold, thinned along the gradient."""
    if img.channels != 1:
        raise ValueError("detect_edges expects a grayscale image")
    p = img.pixels.astype(np.float64)
    padded = np.pad(p, 1, mode="edge")
    gx = (
        (padded[:-2, 2:] + 2 * padded[1:-1, 2:] + padded[2:, 2:])
        - (padded[:-2, :-2] + 2 * padded[1:-1, :-2] + padded[2:, :-2])
    )
    gy = (
        (padded[2:, :-2] + 2 * padded[2:, 1:-1] + padded[2:, 2:])
        - (padded[:-2, :-2] + 2 * padded[:-2, 1:-1] + padded[:-2, 2:])
    )
    mag = np.hypot(gx, gy)
    peak = mag.max()
    if peak == 0:
        return BinaryMask(np.zeros(p.shape, dtype=bool))
    q = _round_half_up(mag / peak * 255).astype(np.int64)
    hist = np.bincount(q.ravel(), minlength=256)[:256]
    t = _otsu_from_histogram(hist)
    if t < 0:
        return BinaryMask(np.zeros(p.shape, dtype=bool))
    strong = q > t
    # non-maximum suppression along the quantized gradient direction
    ang = np.degrees(np.arctan2(gy, gx)) % 180.0
    sector = ((ang + 22.5) // 45).astype(np.int64) % 4
    offsets = {0: (0, 1), 1: (1, 1), 2: (1, 0), 3: (1, -1)}
    mp = np.pad(mag, 1, mode="constant")
    keep = np.zeros(p.shape, dtype=bool)
    for s, (dy, dx) in offsets.items():
        fwd = mp[1 + dy : mp.shape[0] - 1 + dy, 1 + dx : mp.shape[1] - 1 + dx]
        bwd = mp[1 - dy : mp.shape[0] - 1 - dy, 1 - dx : mp.shape[1] - 1 - dx]
        keep |= (sector == s) & (mag >= fwd) & (mag > bwd)
    return BinaryMask(strong & keep)


def _bilinear(arr: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Bilinear sample of a 2D float array; coordinates clamped to the frame."""
    h, w = arr.shape
    xs = np.clip(xs, 0.0, w - 1.0)
    ys = np.clip(ys, 0.0, h - 1.0)
    x0 = np.floor(xs).astype(np.int64)
    y0 = np.floor(ys).astype(np.int64)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = xs - x0
    fy = ys - y0
    v00 = arr[y0, x0]
    v01 = arr[y0, x1]
    v10 = arr[y1, x0]
    v11 = arr[y1, x1]
    return (
        v00 * (1 - fx) * (1 - fy)
        + v01 * fx * (1 - fy)
        + v10 * (1 - fx) * fy
        + v11 * fx * fy
    )


def resample_array(arr: np.ndarray, new_w: int, new_h: int) -> np.ndarray:
    """Bilinear resize of a 2D float array (pixel-centre alignment)."""
    h, w = arr.shape
    xs = (np.arange(new_w) + 0.5) * (w / new_w) - 0.5
    ys = (np.arange(new_h) + 0.5) * (h / new_h) - 0.5
    gx, gy = np.meshgrid(xs, ys)
    return _bilinear(np.asarray(arr, dtype=np.float64), gx, gy)


def resample(img: RasterImage, new_w: int, new_h: int) -> RasterImage:
    if new_w < 1 or new_h < 1:
        raise ValueError("target size must be >= 1")
    if img.channels == 1:
        out = resample_array(img.pixels, new_w, new_h)
        return RasterImage(np.clip(_round_half_up(out), 0, 255).astype(np.uint8))
    chans = [resample_array(img.pixels[:, :, c], new_w, new_h) for c in range(3)]
    return RasterImage(np.clip(_round_half_up(np.stack(chans, 2)), 0, 255).astype(np.uint8))


def rotation_matrix(angle_deg: float) -> np.ndarray:
    """Matrix rotating content by angle_deg (clockwise from North, y down)."""
    a = np.deg2rad(angle_deg)
    return np.array([[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]])


def rotate_points(points: np.ndarray, angle_deg: float, center) -> np.ndarray:
    """Rotate (n, 2) points the same way rotate() moves image content."""
    c = np.asarray(center, dtype=np.float64)
    m = rotation_matrix(angle_deg)
    return (np.asarray(points, dtype=np.float64) - c) @ m.T + c


def rotate(obj, angle_deg: float, center=None):
    """Rotate image content about a centre; bilinear for images, nearest for
    masks; samples falling outside the frame are background."""
    if isinstance(obj, BinaryMask):
        arr = obj.bits
        h, w = arr.shape
    else:
        arr = obj.pixels
        h, w = arr.shape[:2]
    if center is None:
        center = ((w - 1) / 2.0, (h - 1) / 2.0)
    cx, cy = float(center[0]), float(center[1])
    gx, gy = np.meshgrid(np.arange(w, dtype=np.float64), np.arange(h, dtype=np.float64))
    m = rotation_matrix(-angle_deg)
    sx = m[0, 0] * (gx - cx) + m[0, 1] * (gy - cy) + cx
    sy = m[1, 0] * (gx - cx) + m[1, 1] * (gy - cy) + cy
    inside = (sx >= -0.5) & (sx <= w - 0.5) & (sy >= -0.5) & (sy <= h - 0.5)
    if isinstance(obj, BinaryMask):
        xi = np.clip(_round_half_up(sx), 0, w - 1).astype(np.int64)
        yi = np.clip(_round_half_up(sy), 0, h - 1).astype(np.int64)
        out = arr[yi, xi] & inside
        return BinaryMask(out)
    if obj.channels == 1:
        out = _bilinear(arr.astype(np.float64), sx, sy)
        out[~inside] = 0
        return RasterImage(np.clip(_round_half_up(out), 0, 255).astype(np.uint8))
    chans = []
    for c in range(3):
        ch = _bilinear(arr[:, :, c].astype(np.float64), sx, sy)
        ch[~inside] = 0
        chans.append(ch)
    return RasterImage(np.clip(_round_half_up(np.stack(chans, 2)), 0, 255).astype(np.uint8))
