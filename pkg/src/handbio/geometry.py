"""Plain 2D geometry helpers shared by the landmark and synthesis code.

Angle convention everywhere: degrees from North (up, -y), clockwise
positive, in (-180, 180].
"""

from __future__ import annotations

import numpy as np

from .errors import PalmFitFailure


def direction(angle_deg: float) -> np.ndarray:
    """Unit vector (x, y) of an angle measured from North, clockwise."""
    a = np.deg2rad(angle_deg)
    return np.array([np.sin(a), -np.cos(a)])


def angle_from_north(vec) -> float:
    """Angle of a direction vector, degrees from North in (-180, 180]."""
    v = np.asarray(vec, dtype=np.float64)
    a = float(np.degrees(np.arctan2(v[0], -v[1])))
    if a <= -180.0:
        a += 360.0
    return a


def wrap_angle(a: float) -> float:
    a = (a + 180.0) % 360.0 - 180.0
    return 180.0 if a == -180.0 else a


def point_segment_distance(p, a, b) -> float:
    """Distance from point p to segment ab."""
    p = np.asarray(p, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return float(np.hypot(*(p - a)))
    t = float(np.clip((p - a) @ ab / denom, 0.0, 1.0))
    return float(np.hypot(*(p - (a + t * ab))))


def reflect_across_line(p, a, b) -> np.ndarray:
    """Reflect point p across the (infinite) line through a and b."""
    p = np.asarray(p, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    d = b - a
    n = float(d @ d)
    if n == 0.0:
        raise ValueError("degenerate reflection line")
    t = (p - a) @ d / n
    foot = a + t * d
    return 2 * foot - p


def perpendicular_bisector_intersection(a, b, c):
    """Intersection of the perpendicular bisectors of ab and cb.

    Equivalently the circumcentre of the three points; returns None when
    the points are collinear (bisectors parallel).
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]))
    scale = max(np.abs(np.concatenate([a, b, c])).max(), 1.0)
    if abs(d) < 1e-9 * scale * scale:
        return None
    ux = (
        (a @ a) * (b[1] - c[1]) + (b @ b) * (c[1] - a[1]) + (c @ c) * (a[1] - b[1])
    ) / d
    uy = (
        (a @ a) * (c[0] - b[0]) + (b @ b) * (a[0] - c[0]) + (c @ c) * (b[0] - a[0])
    ) / d
    return np.array([ux, uy])


def fit_circle(points: np.ndarray):
    """Algebraic least-squares circle fit (Kasa): minimise sum((|p-c|^2 - r^2)^2).

    Returns (centre (2,), radius). Raises PalmFitFailure for < 3 points or a
    degenerate (collinear) configuration.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 3:
        raise PalmFitFailure("circle fit needs at least 3 points")
    a = np.column_stack([2 * pts[:, 0], 2 * pts[:, 1], np.ones(len(pts))])
    b = (pts**2).sum(axis=1)
    sol, _, rank, _ = np.linalg.lstsq(a, b, rcond=None)
    if rank < 3:
        raise PalmFitFailure("degenerate circle fit")
    cx, cy, k = sol
    r2 = k + cx * cx + cy * cy
    if r2 <= 0:
        raise PalmFitFailure("degenerate circle fit")
    return np.array([cx, cy]), float(np.sqrt(r2))


def polyline_first_intersection(origin, direction_vec, polyline, max_dist):
    """First crossing of the ray origin + t*direction with a polyline.

    Returns the sub-pixel intersection point, or None if no segment is hit
    within max_dist. Vectorized over the polyline edges.
    """
    o = np.asarray(origin, dtype=np.float64)
    d = np.asarray(direction_vec, dtype=np.float64)
    n = float(np.hypot(*d))
    if n == 0:
        return None
    d = d / n
    p = np.asarray(polyline, dtype=np.float64)
    a = p[:-1]
    b = p[1:]
    e = b - a
    # solve o + t d = a + s e for each edge
    denom = d[0] * (-e[:, 1]) - d[1] * (-e[:, 0])
    rhs = a - o
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (rhs[:, 0] * (-e[:, 1]) - rhs[:, 1] * (-e[:, 0])) / denom
        s = (d[0] * rhs[:, 1] - d[1] * rhs[:, 0]) / denom
    ok = np.isfinite(t) & np.isfinite(s) & (t >= 0.0) & (t <= max_dist) & (s >= 0.0) & (s <= 1.0)
    if not ok.any():
        return None
    tmin = t[ok].min()
    return o + tmin * d


def smooth_closed_polyline(points: np.ndarray, window: int = 5) -> np.ndarray:
    """Circular moving average of a closed polyline (first == last point)."""
    p = np.asarray(points, dtype=np.float64)
    if len(p) < window + 2:
        return p.copy()
    core = p[:-1]
    half = window // 2
    ext = np.concatenate([core[-half:], core, core[:half]])
    kern = np.ones(window) / window
    sm = np.column_stack(
        [np.convolve(ext[:, 0], kern, mode="valid"), np.convolve(ext[:, 1], kern, mode="valid")]
    )
    return np.concatenate([sm, sm[:1]], axis=0)
