"""Shared tables for the kernel backends (both numba and numpy paths)."""

import numpy as np

# 8-neighbour ring in clockwise order: N, NE, E, SE, S, SW, W, NW as (dy, dx).
RING8 = np.array(
    [(-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1)],
    dtype=np.int64,
)


def _ring_components(cells, diag):
    """Count connected components among ring cells (8- or 4-adjacency)."""
    cells = list(cells)
    seen = set()
    comps = []
    for c in cells:
        if c in seen:
            continue
        stack = [c]
        comp = set()
        while stack:
            p = stack.pop()
            if p in comp:
                continue
            comp.add(p)
            seen.add(p)
            for q in cells:
                if q in comp:
                    continue
                dy, dx = abs(p[0] - q[0]), abs(p[1] - q[1])
                if diag:
                    if max(dy, dx) == 1:
                        stack.append(q)
                else:
                    if dy + dx == 1:
                        stack.append(q)
        comps.append(comp)
    return comps


def build_simple_point_lut() -> np.ndarray:
    """256-entry table: pattern -> pixel is simple for (8, 4) connectivity.

    A foreground pixel is simple (removable without changing component or
    hole counts) iff its foreground ring forms exactly one 8-connected
    component and its background ring forms exactly one 4-connected
    component containing a 4-neighbour of the centre.
    """
    lut = np.zeros(256, dtype=np.uint8)
    ring = [tuple(p) for p in RING8]
    for bits in range(256):
        fg = [ring[i] for i in range(8) if (bits >> i) & 1]
        bg = [ring[i] for i in range(8) if not (bits >> i) & 1]
        if not fg or not bg:
            continue
        fg_comps = _ring_components(fg, diag=True)
        bg_comps = _ring_components(bg, diag=False)
        bg_touch = [c for c in bg_comps if any(abs(dy) + abs(dx) == 1 for dy, dx in c)]
        if len(fg_comps) == 1 and len(bg_touch) == 1:
            lut[bits] = 1
    return lut


SIMPLE_LUT = build_simple_point_lut()


def disc_offsets(radius: int) -> np.ndarray:
    """Integer offsets of a disc structuring element of the given radius."""
    if radius < 1:
        raise ValueError("structuring element radius must be >= 1")
    r = int(radius)
    ys, xs = np.mgrid[-r : r + 1, -r : r + 1]
    keep = ys * ys + xs * xs <= r * r
    return np.stack([ys[keep], xs[keep]], axis=1).astype(np.int64)


def gaussian_kernel1d(sigma: float, size: int) -> np.ndarray:
    """Normalized 1D Gaussian taps; size must be odd."""
    if size % 2 == 0 or size < 1:
        raise ValueError("kernel size must be odd and positive")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    half = size // 2
    xs = np.arange(-half, half + 1, dtype=np.float64)
    k = np.exp(-0.5 * (xs / sigma) ** 2)
    return k / k.sum()
