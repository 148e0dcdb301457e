"""Moore boundary tracing of binary blobs."""

from __future__ import annotations

import numpy as np

# clockwise ring starting North, as (dy, dx)
_DIRS = ((-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1))
_DIR_INDEX = {d: i for i, d in enumerate(_DIRS)}


def trace_contour(mask: np.ndarray) -> np.ndarray:
    """Outer boundary of the blob containing the first scan-order pixel.

    Moore-neighbour tracing with Jacob's stopping criterion; returns closed
    (first == last) (x, y) pixel-centre coordinates.
    """
    m = np.asarray(mask, dtype=bool)
    ys, xs = np.nonzero(m)
    if ys.size == 0:
        raise ValueError("trace_contour needs a non-empty mask")
    h, w = m.shape
    start = (int(ys[0]), int(xs[0]))

    def fg(p):
        return 0 <= p[0] < h and 0 <= p[1] < w and m[p[0], p[1]]

    backtrack = (start[0], start[1] - 1)  # west of the first pixel is background
    cur = start
    contour = [start]
    first_move = None
    limit = 4 * h * w + 8
    while len(contour) <= limit:
        bi = _DIR_INDEX[(backtrack[0] - cur[0], backtrack[1] - cur[1])]
        nxt = None
        for k in range(1, 9):
            idx = (bi + k) % 8
            cand = (cur[0] + _DIRS[idx][0], cur[1] + _DIRS[idx][1])
            if fg(cand):
                backtrack = (
                    cur[0] + _DIRS[(idx - 1) % 8][0],
                    cur[1] + _DIRS[(idx - 1) % 8][1],
                )
                nxt = cand
                break
        if nxt is None:
            break  # isolated pixel
        move = (cur, nxt)
        if first_move is None:
            first_move = move
        elif move == first_move:
            break
        contour.append(nxt)
        cur = nxt
    # drop the duplicated re-entry of the start pixel, then close the loop
    if len(contour) > 1 and contour[-1] == start:
        contour.pop()
    pts = np.array([(x, y) for y, x in contour], dtype=np.float64)
    return np.concatenate([pts, pts[:1]], axis=0)
