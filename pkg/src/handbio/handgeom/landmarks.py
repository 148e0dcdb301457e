"""Valley/fingertip detection, labelling, handedness and pose estimation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import geometry
from ..errors import (
    AmbiguousValleys,
    DegenerateValleys,
    FingertipCountMismatch,
    InsufficientValleys,
)
from .skeleton import Skeleton, trace_branch

VALLEY_LABELS = ("thumb_index", "index_middle", "middle_ring", "ring_little")
FINGER_LABELS = ("little", "ring", "middle", "index", "thumb")

# corridor test: background branches between fingers stay narrow, branches in
# wide wedges (thumb-wrist crotch, sleeve corners) open up fast
_CORRIDOR_STEPS = 20
_CORRIDOR_MAX_RATE = 0.55
_CLEARANCE_WINDOW = 48


@dataclass
class HandLandmarks:
    com: np.ndarray
    valleys: dict
    fingertips: dict
    handedness: str
    global_pose_deg: float
    finger_poses_deg: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "com": [float(self.com[0]), float(self.com[1])],
            "valleys": {k: [float(v[0]), float(v[1])] for k, v in self.valleys.items()},
            "fingertips": {k: [float(v[0]), float(v[1])] for k, v in self.fingertips.items()},
            "handedness": self.handedness,
            "global_pose_deg": float(self.global_pose_deg),
            "finger_poses_deg": {k: float(v) for k, v in self.finger_poses_deg.items()},
        }


def _clearance(hand_mask: np.ndarray, p) -> float:
    """Distance from a point to the nearest hand pixel (windowed search)."""
    h, w = hand_mask.shape
    x, y = float(p[0]), float(p[1])
    win = _CLEARANCE_WINDOW
    y0, y1 = max(0, int(y) - win), min(h, int(y) + win + 1)
    x0, x1 = max(0, int(x) - win), min(w, int(x) + win + 1)
    sub = hand_mask[y0:y1, x0:x1]
    ys, xs = np.nonzero(sub)
    if ys.size == 0:
        return float(win)
    d = np.hypot(xs + x0 - x, ys + y0 - y)
    return float(d.min())


def detect_valleys(fg_skel: Skeleton, bg_skel: Skeleton, com: np.ndarray) -> np.ndarray:
    """Four unlabeled in-between-finger points.

    Background-skeleton endpoints are filtered to those whose branch runs
    inside a narrow corridor (an inter-finger gap), then the four nearest
    the centre of mass win.
    """
    hand = fg_skel.source
    if hand is None:
        raise ValueError("foreground skeleton lacks its source mask")
    candidates = []
    for e in bg_skel.endpoints:
        branch = trace_branch(bg_skel.mask, e, max_len=_CORRIDOR_STEPS + 6)
        if len(branch) < 2:
            continue
        k = min(_CORRIDOR_STEPS, len(branch) - 1)
        run = float(np.hypot(*(branch[k] - branch[0])))
        if run < 10.0:
            continue  # stub branch
        c0 = _clearance(hand, branch[0])
        ck = _clearance(hand, branch[k])
        rate = (ck - c0) / run
        if rate <= _CORRIDOR_MAX_RATE:
            candidates.append(e)
    if len(candidates) < 4:
        raise InsufficientValleys(f"found {len(candidates)} valley candidates")
    cand = np.array(candidates, dtype=np.float64)
    order = np.argsort(np.hypot(*(cand - com).T), kind="stable")
    return cand[order[:4]]


def label_valleys(valleys: np.ndarray):
    """Assign the four labels from mutual distances.

    The furthest pair is {thumb_index, ring_little}; within that pair the
    point with the smaller distance to its nearest remaining point is
    ring_little, and that nearest point is middle_ring.
    """
    v = np.asarray(valleys, dtype=np.float64)
    if v.shape != (4, 2):
        raise ValueError("label_valleys expects exactly 4 points")
    d = np.hypot(v[:, None, 0] - v[None, :, 0], v[:, None, 1] - v[None, :, 1])
    iu = np.triu_indices(4, 1)
    flat = d[iu]
    best = flat.max()
    if (flat == best).sum() > 1:
        raise AmbiguousValleys("furthest valley pair is tied")
    a, b = iu[0][flat.argmax()], iu[1][flat.argmax()]
    rest = [i for i in range(4) if i not in (a, b)]
    da = d[a, rest].min()
    db = d[b, rest].min()
    if da == db:
        raise AmbiguousValleys("edge-valley nearest distances are tied")
    ring_little, thumb_index = (a, b) if da < db else (b, a)
    mr_candidates = d[ring_little, rest]
    middle_ring = rest[int(np.argmin(mr_candidates))]
    index_middle = [i for i in rest if i != middle_ring][0]
    return {
        "thumb_index": v[thumb_index],
        "index_middle": v[index_middle],
        "middle_ring": v[middle_ring],
        "ring_little": v[ring_little],
    }


def detect_handedness(valleys: dict) -> str:
    """Clockwise valley traversal (image coordinates, y down) means right."""
    poly = np.array([valleys[k] for k in VALLEY_LABELS], dtype=np.float64)
    x, y = poly[:, 0], poly[:, 1]
    area2 = float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))
    scale = max(float(np.abs(poly).max()), 1.0)
    if abs(area2) < 1e-9 * scale * scale:
        raise DegenerateValleys("valley points are collinear")
    return "right" if area2 > 0 else "left"


def _in_arm_wedge(p, apex, u, w) -> bool:
    """True when p lies inside the smaller wedge spanned by rays u and w."""
    v = np.asarray(p, dtype=np.float64) - apex
    cuw = u[0] * w[1] - u[1] * w[0]
    cuv = u[0] * v[1] - u[1] * v[0]
    cvw = v[0] * w[1] - v[1] * w[0]
    if cuw >= 0:
        return cuv >= 0 and cvw >= 0
    return cuv <= 0 and cvw <= 0


def detect_fingertips(
    fg_skel: Skeleton, valleys: dict, min_branch: int = 9
) -> list[np.ndarray]:
    """Five fingertip points ordered little, ring, middle, index, thumb.

    Candidates are foreground-skeleton endpoints inside the area of
    interest (the larger-angle side of the two lines joining the
    index-middle valley to the two furthest valleys); short stub branches
    are ignored. Exactly five must remain.
    """
    apex = valleys["index_middle"]
    u = valleys["thumb_index"] - apex
    w = valleys["ring_little"] - apex
    com = fg_skel.points.mean(axis=0)
    tips = []
    for e in fg_skel.endpoints:
        if _in_arm_wedge(e, apex, u, w):
            continue
        branch = trace_branch(fg_skel.mask, e, max_len=min_branch + 2)
        if float(np.hypot(*(branch[-1] - branch[0]))) < min_branch:
            continue
        tips.append(e)
    if len(tips) != 5:
        raise FingertipCountMismatch(len(tips))
    handed = detect_handedness(valleys)
    ref = geometry.angle_from_north(valleys["middle_ring"] - com)
    rel = [geometry.wrap_angle(geometry.angle_from_north(t - com) - ref) for t in tips]
    order = np.argsort(np.asarray(rel), kind="stable")
    ordered = [tips[i] for i in order]
    # right hand: thumb sits on the most negative relative angle (clockwise
    # valley rule puts the thumb on the image-left side for fingers-up poses)
    if handed == "right":
        ordered = ordered[::-1]
    return ordered


def refine_points(
    points, skel: Skeleton, contour: np.ndarray, psf_size: int = 9
):
    """Push skeleton-derived landmarks out to the hand contour.

    Fits a line to the last psf_size branch points behind each landmark and
    slides the landmark along it to the first (sub-pixel) intersection with
    the contour; landmarks without an intersection within 3 * psf_size px
    keep their position and are flagged unrefined.
    """
    smooth = geometry.smooth_closed_polyline(contour, window=5)
    refined = []
    flags = []
    for p in points:
        p = np.asarray(p, dtype=np.float64)
        branch = trace_branch(skel.mask, p, max_len=psf_size)
        if len(branch) < 2:
            refined.append(p)
            flags.append(False)
            continue
        seg = branch[: psf_size]
        centred = seg - seg.mean(axis=0)
        cov = centred.T @ centred
        _, evecs = np.linalg.eigh(cov)
        direction = evecs[:, 1]
        outward = seg[0] - seg[-1]
        if direction @ outward < 0:
            direction = -direction
        hit = geometry.polyline_first_intersection(p, direction, smooth, 3.0 * psf_size)
        if hit is None:
            refined.append(p)
            flags.append(False)
        else:
            refined.append(hit)
            flags.append(True)
    return np.array(refined, dtype=np.float64), np.array(flags, dtype=bool)


def estimate_global_pose(valleys: dict) -> float:
    """Angle of the line through the middle-ring valley and the intersection
    of the two perpendicular bisectors of its segments to the neighbouring
    valleys; degrees from North in (-180, 180]."""
    mr = valleys["middle_ring"]
    p = geometry.perpendicular_bisector_intersection(
        valleys["ring_little"], mr, valleys["index_middle"]
    )
    if p is None:
        raise DegenerateValleys("perpendicular bisectors are parallel")
    return geometry.angle_from_north(mr - p)


@dataclass
class FingerGeometry:
    """Per-finger construction in the canonical frame: flanking valleys
    (one synthesized for thumb/little), base midpoint, tip, pose."""

    label: str
    tip: np.ndarray
    flank_a: np.ndarray
    flank_b: np.ndarray
    midpoint: np.ndarray
    pose_deg: float
    synthesized_flank: bool = False
    fallback_midpoint: bool = False


def _axis_point_at_height(skel_points: np.ndarray, tip: np.ndarray, y_target: float):
    """Skeleton point at the valley height nearest (in x) to the fingertip."""
    for tol in (3.0, 6.0, 12.0, 24.0):
        sel = np.abs(skel_points[:, 1] - y_target) <= tol
        if sel.any():
            cands = skel_points[sel]
            return cands[np.argmin(np.abs(cands[:, 0] - tip[0]))]
    return None


def _near_mask(mask: np.ndarray, p, radius: float = 3.0) -> bool:
    h, w = mask.shape
    x, y = p
    y0, y1 = max(0, int(y - radius)), min(h, int(y + radius) + 2)
    x0, x1 = max(0, int(x - radius)), min(w, int(x + radius) + 2)
    if y0 >= y1 or x0 >= x1:
        return False
    return bool(mask[y0:y1, x0:x1].any())


def estimate_finger_poses(
    valleys: dict, fingertips: dict, rotated_mask: np.ndarray, skel_points: np.ndarray
) -> dict:
    """Per-finger pose construction in the pose-corrected frame.

    Index/middle/ring midpoints average their two adjacent valleys; the
    missing outer valleys of thumb and little are synthesized by reflecting
    the known valley across the finger axis (fingertip to the nearest
    skeleton point at valley height).
    """
    out = {}
    flanks = {
        "little": ("ring_little", None),
        "ring": ("ring_little", "middle_ring"),
        "middle": ("middle_ring", "index_middle"),
        "index": ("index_middle", "thumb_index"),
        "thumb": ("thumb_index", None),
    }
    for label in FINGER_LABELS:
        tip = np.asarray(fingertips[label], dtype=np.float64)
        a_key, b_key = flanks[label]
        a = np.asarray(valleys[a_key], dtype=np.float64)
        synthesized = False
        fallback = False
        if b_key is None:
            axis_pt = _axis_point_at_height(skel_points, tip, a[1])
            b = None
            if axis_pt is not None and float(np.hypot(*(tip - axis_pt))) > 1e-9:
                reflected = geometry.reflect_across_line(a, tip, axis_pt)
                if _near_mask(rotated_mask, reflected):
                    b = reflected
                    synthesized = True
            if b is None:
                b = a
                fallback = True
        else:
            b = np.asarray(valleys[b_key], dtype=np.float64)
        mid = (a + b) / 2.0
        pose = geometry.angle_from_north(tip - mid)
        out[label] = FingerGeometry(
            label=label,
            tip=tip,
            flank_a=a,
            flank_b=b,
            midpoint=mid,
            pose_deg=pose,
            synthesized_flank=synthesized,
            fallback_midpoint=fallback,
        )
    return out
