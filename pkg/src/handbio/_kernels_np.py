"""Pure-NumPy fallback implementations of the hot kernels.

Same contracts and tie-breaking rules as ``_kernels_jit``; selected when
numba is unavailable or ``HANDBIO_NUMBA=0``.
"""

import numpy as np


def sepconv2(img, k):
    h, w = img.shape
    half = k.shape[0] // 2
    tmp = np.zeros((h, w), dtype=np.float64)
    padded = np.pad(img.astype(np.float64), ((0, 0), (half, half)), mode="edge")
    for i in range(k.shape[0]):
        tmp += k[i] * padded[:, i : i + w]
    out = np.zeros((h, w), dtype=np.float64)
    padded = np.pad(tmp, ((half, half), (0, 0)), mode="edge")
    for i in range(k.shape[0]):
        out += k[i] * padded[i : i + h, :]
    return out


def _shift(mask, dy, dx, fill=0):
    h, w = mask.shape
    out = np.full((h, w), fill, dtype=mask.dtype)
    ys = slice(max(0, -dy), min(h, h - dy))
    xs = slice(max(0, -dx), min(w, w - dx))
    yd = slice(max(0, dy), min(h, h + dy))
    xd = slice(max(0, dx), min(w, w + dx))
    out[yd, xd] = mask[ys, xs]
    return out


def erode(mask, offs):
    acc = np.ones(mask.shape, dtype=bool)
    m = mask.astype(bool)
    for dy, dx in offs:
        acc &= _shift(m, -int(dy), -int(dx), fill=0).astype(bool)
    return acc.astype(np.uint8)


def dilate(mask, offs):
    acc = np.zeros(mask.shape, dtype=bool)
    m = mask.astype(bool)
    for dy, dx in offs:
        acc |= _shift(m, int(dy), int(dx), fill=0).astype(bool)
    return acc.astype(np.uint8)


def _runs_of_row(row):
    """(start, stop) half-open runs of true values in a 1D bool array."""
    d = np.diff(np.concatenate(([0], row.view(np.uint8), [0])))
    starts = np.flatnonzero(d == 1)
    stops = np.flatnonzero(d == -1)
    return starts, stops


def label_components(mask, use8):
    """Run-based two-pass connected component labelling."""
    h, w = mask.shape
    m = mask.astype(bool)
    run_rows = []
    run_start = []
    run_stop = []
    row_first = np.zeros(h + 1, dtype=np.int64)
    for y in range(h):
        starts, stops = _runs_of_row(m[y])
        row_first[y] = len(run_rows)
        for s, e in zip(starts, stops):
            run_rows.append(y)
            run_start.append(int(s))
            run_stop.append(int(e))
    row_first[h] = len(run_rows)
    n = len(run_rows)
    parent = list(range(n))

    def find(i):
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    reach = 1 if use8 else 0
    for y in range(1, h):
        a, b = row_first[y], row_first[y + 1]
        p, q = row_first[y - 1], row_first[y]
        for i in range(a, b):
            for j in range(p, q):
                if run_start[j] < run_stop[i] + reach and run_stop[j] + reach > run_start[i]:
                    ri, rj = find(i), find(j)
                    if ri != rj:
                        parent[max(ri, rj)] = min(ri, rj)
    labels = np.zeros((h, w), dtype=np.int32)
    remap = {}
    for i in range(n):
        r = find(i)
        if r not in remap:
            remap[r] = len(remap) + 1
        labels[run_rows[i], run_start[i] : run_stop[i]] = remap[r]
    return labels


_RING8 = ((-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1))


def thin_mask(mask, k1d, lut, ring):
    h, w = mask.shape
    m = mask.astype(np.uint8).copy()
    half = k1d.shape[0] // 2
    while True:
        ys, xs = np.nonzero(m)
        if ys.size == 0:
            break
        y0 = max(0, ys.min() - half)
        y1 = min(h - 1, ys.max() + half)
        x0 = max(0, xs.min() - half)
        x1 = min(w - 1, xs.max() + half)
        sub = m[y0 : y1 + 1, x0 : x1 + 1]
        blur = sepconv2(sub.astype(np.float64), k1d)
        padded = np.pad(sub, 1)
        border = sub.astype(bool) & ~(
            padded[:-2, 1:-1].astype(bool)
            & padded[2:, 1:-1].astype(bool)
            & padded[1:-1, :-2].astype(bool)
            & padded[1:-1, 2:].astype(bool)
        )
        # global-frame border handling: frame edges count as background
        if y0 == 0:
            border[0] |= sub[0].astype(bool)
        if y1 == h - 1:
            border[-1] |= sub[-1].astype(bool)
        if x0 == 0:
            border[:, 0] |= sub[:, 0].astype(bool)
        if x1 == w - 1:
            border[:, -1] |= sub[:, -1].astype(bool)
        cys, cxs = np.nonzero(border)
        if cys.size == 0:
            break
        vals = np.clip(blur[cys, cxs], 0.0, 1.0)
        keys = ((vals * 1099511627776.0).astype(np.int64) << 20) + np.arange(
            cys.size, dtype=np.int64
        )
        order = np.argsort(keys)
        removed = 0
        for i in order:
            y = int(cys[i]) + y0
            x = int(cxs[i]) + x0
            if m[y, x] == 0:
                continue
            bits = 0
            for b, (dy, dx) in enumerate(_RING8):
                yy, xx = y + dy, x + dx
                if 0 <= yy < h and 0 <= xx < w and m[yy, xx]:
                    bits |= 1 << b
            nb = bin(bits).count("1")
            if nb == 1:
                continue
            if lut[bits]:
                m[y, x] = 0
                removed += 1
        if removed == 0:
            break
    return m


def min_dists(src, dst):
    n = src.shape[0]
    out = np.empty(n, dtype=np.float64)
    step = max(1, int(4_000_000 // max(dst.shape[0], 1)))
    for i in range(0, n, step):
        d = src[i : i + step, None, :] - dst[None, :, :]
        out[i : i + step] = np.sqrt((d * d).sum(-1).min(axis=1))
    return out


def nn_indices(src, dst):
    n = src.shape[0]
    out = np.empty(n, dtype=np.int64)
    step = max(1, int(4_000_000 // max(dst.shape[0], 1)))
    for i in range(0, n, step):
        d = src[i : i + step, None, :] - dst[None, :, :]
        out[i : i + step] = (d * d).sum(-1).argmin(axis=1)
    return out


def nn_indices_grid(src, dst, cell_start, cell_items, gx0, gy0, gw, gh, cell):
    # the fallback path answers grid queries by exact brute force
    return nn_indices(src, dst)
