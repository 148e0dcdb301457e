"""Numba-compiled hot kernels.

Loop-style implementations of the inner-loop primitives; the pure-NumPy
equivalents live in ``_kernels_np``.  All functions take and return plain
ndarrays so both backends are interchangeable.
"""

import numpy as np

from .accel import njit


@njit
def sepconv2(img, k):
    """Separable 2D convolution with edge replication (same size)."""
    h, w = img.shape
    n = k.shape[0]
    half = n // 2
    tmp = np.empty((h, w), dtype=np.float64)
    out = np.empty((h, w), dtype=np.float64)
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for i in range(n):
                xx = x + i - half
                if xx < 0:
                    xx = 0
                elif xx >= w:
                    xx = w - 1
                acc += k[i] * img[y, xx]
            tmp[y, x] = acc
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for i in range(n):
                yy = y + i - half
                if yy < 0:
                    yy = 0
                elif yy >= h:
                    yy = h - 1
                acc += k[i] * tmp[yy, x]
            out[y, x] = acc
    return out


@njit
def erode(mask, offs):
    """Binary erosion; out-of-bounds counts as background."""
    h, w = mask.shape
    m = offs.shape[0]
    out = np.zeros((h, w), dtype=np.uint8)
    for y in range(h):
        for x in range(w):
            if mask[y, x] == 0:
                continue
            keep = True
            for i in range(m):
                yy = y + offs[i, 0]
                xx = x + offs[i, 1]
                if yy < 0 or yy >= h or xx < 0 or xx >= w or mask[yy, xx] == 0:
                    keep = False
                    break
            if keep:
                out[y, x] = 1
    return out


@njit
def dilate(mask, offs):
    h, w = mask.shape
    m = offs.shape[0]
    out = np.zeros((h, w), dtype=np.uint8)
    for y in range(h):
        for x in range(w):
            if mask[y, x] == 0:
                continue
            for i in range(m):
                yy = y + offs[i, 0]
                xx = x + offs[i, 1]
                if 0 <= yy < h and 0 <= xx < w:
                    out[yy, xx] = 1
    return out


@njit
def _find_root(parent, i):
    root = i
    while parent[root] != root:
        root = parent[root]
    while parent[i] != root:
        nxt = parent[i]
        parent[i] = root
        i = nxt
    return root


@njit
def label_components(mask, use8):
    """Connected-component labels 1..n in scan order of first pixel."""
    h, w = mask.shape
    labels = np.zeros((h, w), dtype=np.int32)
    parent = np.zeros(h * w // 2 + 2, dtype=np.int32)
    nxt = 1
    for y in range(h):
        for x in range(w):
            if mask[y, x] == 0:
                continue
            best = 0
            # previously visited neighbours
            if x > 0 and labels[y, x - 1] > 0:
                r = _find_root(parent, labels[y, x - 1])
                if best == 0 or r < best:
                    best = r
            if y > 0:
                if labels[y - 1, x] > 0:
                    r = _find_root(parent, labels[y - 1, x])
                    if best == 0 or r < best:
                        best = r
                if use8:
                    if x > 0 and labels[y - 1, x - 1] > 0:
                        r = _find_root(parent, labels[y - 1, x - 1])
                        if best == 0 or r < best:
                            best = r
                    if x + 1 < w and labels[y - 1, x + 1] > 0:
                        r = _find_root(parent, labels[y - 1, x + 1])
                        if best == 0 or r < best:
                            best = r
            if best == 0:
                labels[y, x] = nxt
                parent[nxt] = nxt
                nxt += 1
            else:
                labels[y, x] = best
                if x > 0 and labels[y, x - 1] > 0:
                    parent[_find_root(parent, labels[y, x - 1])] = best
                if y > 0:
                    if labels[y - 1, x] > 0:
                        parent[_find_root(parent, labels[y - 1, x])] = best
                    if use8:
                        if x > 0 and labels[y - 1, x - 1] > 0:
                            parent[_find_root(parent, labels[y - 1, x - 1])] = best
                        if x + 1 < w and labels[y - 1, x + 1] > 0:
                            parent[_find_root(parent, labels[y - 1, x + 1])] = best
    # compact roots into 1..n by scan order
    remap = np.zeros(nxt, dtype=np.int32)
    count = 0
    for y in range(h):
        for x in range(w):
            if labels[y, x] > 0:
                r = _find_root(parent, labels[y, x])
                if remap[r] == 0:
                    count += 1
                    remap[r] = count
                labels[y, x] = remap[r]
    return labels


@njit
def _neighbourhood_bits(m, y, x, ring):
    h, w = m.shape
    bits = 0
    for i in range(8):
        yy = y + ring[i, 0]
        xx = x + ring[i, 1]
        if 0 <= yy < h and 0 <= xx < w and m[yy, xx] != 0:
            bits |= 1 << i
    return bits


@njit
def thin_mask(mask, k1d, lut, ring):
    """Blur-guided sequential thinning; topology preserving, endpoint keeping.

    Each pass blurs the current indicator with the Gaussian PSF, orders the
    border pixels by exposure (blurred value ascending, ties in scan order)
    and removes the simple, non-endpoint ones until a fixed point.
    """
    h, w = mask.shape
    m = mask.copy()
    half = k1d.shape[0] // 2
    while True:
        # bounding box of current foreground, padded by the kernel radius
        y0, y1, x0, x1 = h, -1, w, -1
        for y in range(h):
            for x in range(w):
                if m[y, x] != 0:
                    if y < y0:
                        y0 = y
                    if y > y1:
                        y1 = y
                    if x < x0:
                        x0 = x
                    if x > x1:
                        x1 = x
        if y1 < 0:
            break
        y0 = max(0, y0 - half)
        x0 = max(0, x0 - half)
        y1 = min(h - 1, y1 + half)
        x1 = min(w - 1, x1 + half)
        sub = m[y0 : y1 + 1, x0 : x1 + 1].astype(np.float64)
        blur = sepconv2(sub, k1d)
        # border pixels of the current mask, keyed for a deterministic order
        n_cand = 0
        for y in range(y0, y1 + 1):
            for x in range(x0, x1 + 1):
                if m[y, x] == 0:
                    continue
                if (
                    (y == 0 or m[y - 1, x] == 0)
                    or (y == h - 1 or m[y + 1, x] == 0)
                    or (x == 0 or m[y, x - 1] == 0)
                    or (x == w - 1 or m[y, x + 1] == 0)
                ):
                    n_cand += 1
        if n_cand == 0:
            break
        keys = np.empty(n_cand, dtype=np.int64)
        cys = np.empty(n_cand, dtype=np.int64)
        cxs = np.empty(n_cand, dtype=np.int64)
        idx = 0
        for y in range(y0, y1 + 1):
            for x in range(x0, x1 + 1):
                if m[y, x] == 0:
                    continue
                if (
                    (y == 0 or m[y - 1, x] == 0)
                    or (y == h - 1 or m[y + 1, x] == 0)
                    or (x == 0 or m[y, x - 1] == 0)
                    or (x == w - 1 or m[y, x + 1] == 0)
                ):
                    v = blur[y - y0, x - x0]
                    if v < 0.0:
                        v = 0.0
                    elif v > 1.0:
                        v = 1.0
                    q = np.int64(v * 1099511627776.0)  # 2**40 quantization
                    keys[idx] = (q << 20) + idx
                    cys[idx] = y
                    cxs[idx] = x
                    idx += 1
        order = np.argsort(keys)
        removed = 0
        for j in range(n_cand):
            i = order[j]
            y = cys[i]
            x = cxs[i]
            if m[y, x] == 0:
                continue
            bits = _neighbourhood_bits(m, y, x, ring)
            nb = 0
            for b in range(8):
                if (bits >> b) & 1:
                    nb += 1
            if nb == 1:
                continue  # endpoint: keep branch tips
            if lut[bits] != 0:
                m[y, x] = 0
                removed += 1
        if removed == 0:
            break
    return m


@njit
def min_dists(src, dst):
    """Per-source-point distance to the nearest destination point."""
    n = src.shape[0]
    m = dst.shape[0]
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        best = 1e300
        sx = src[i, 0]
        sy = src[i, 1]
        for j in range(m):
            dx = sx - dst[j, 0]
            dy = sy - dst[j, 1]
            d = dx * dx + dy * dy
            if d < best:
                best = d
        out[i] = np.sqrt(best)
    return out


@njit
def nn_indices(src, dst):
    """Index of the nearest destination point for each source point."""
    n = src.shape[0]
    m = dst.shape[0]
    out = np.empty(n, dtype=np.int64)
    for i in range(n):
        best = 1e300
        bj = 0
        sx = src[i, 0]
        sy = src[i, 1]
        for j in range(m):
            dx = sx - dst[j, 0]
            dy = sy - dst[j, 1]
            d = dx * dx + dy * dy
            if d < best:
                best = d
                bj = j
        out[i] = bj
    return out


@njit
def nn_indices_grid(src, dst, cell_start, cell_items, gx0, gy0, gw, gh, cell):
    """Nearest neighbours through a uniform grid bucket index over dst."""
    n = src.shape[0]
    out = np.empty(n, dtype=np.int64)
    for i in range(n):
        sx = src[i, 0]
        sy = src[i, 1]
        cx = int(np.floor((sx - gx0) / cell))
        cy = int(np.floor((sy - gy0) / cell))
        if cx < 0:
            cx = 0
        elif cx >= gw:
            cx = gw - 1
        if cy < 0:
            cy = 0
        elif cy >= gh:
            cy = gh - 1
        best = 1e300
        bj = 0
        r = 0
        while True:
            # scan the ring of cells at Chebyshev radius r
            found_any = False
            for yy in range(cy - r, cy + r + 1):
                if yy < 0 or yy >= gh:
                    continue
                for xx in range(cx - r, cx + r + 1):
                    if xx < 0 or xx >= gw:
                        continue
                    if max(abs(yy - cy), abs(xx - cx)) != r:
                        continue
                    c = yy * gw + xx
                    for t in range(cell_start[c], cell_start[c + 1]):
                        j = cell_items[t]
                        dx = sx - dst[j, 0]
                        dy = sy - dst[j, 1]
                        d = dx * dx + dy * dy
                        found_any = True
                        if d < best or (d == best and j < bj):
                            best = d
                            bj = j
            # cells at radius r+1 hold points no closer than r*cell away
            if found_any or best < 1e300:
                if best <= (r * cell) * (r * cell):
                    break
            r += 1
            if r > gw + gh:
                break
        out[i] = bj
    return out
