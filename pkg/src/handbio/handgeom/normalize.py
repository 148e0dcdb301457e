"""Cropping and size normalization of the palm disc and the five fingers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import geometry, raster
from ..errors import FingerCropFailure, PalmFitFailure
from ..kernels import label_components
from ..raster import BinaryMask, RasterImage
from .contour import trace_contour
from .landmarks import FINGER_LABELS, FingerGeometry

FINGER_W = 48
FINGER_H = 160
PALM_FRAME = 192
PALM_RADIUS = 96


@dataclass
class NormalizedHand:
    """Pose-corrected, size-normalized palm disc and finger images."""

    palm: RasterImage
    fingers: dict  # label -> RasterImage (FINGER_H x FINGER_W, gray)
    finger_masks: dict  # label -> np.ndarray bool
    finger_contours: dict  # label -> (n, 2) closed point list
    handedness: str


def inpaint_ring_gap(finger_img: RasterImage, finger_mask: BinaryMask):
    """Bridge a transverse break in a finger mask and fill it with the mean
    foreground colour.  Breaks of 25% of the finger length or more are left
    alone (missing finger part, not a ring)."""
    m = finger_mask.bits
    occupied = m.any(axis=1)
    rows = np.flatnonzero(occupied)
    if rows.size == 0:
        return finger_img, finger_mask
    top, bottom = int(rows[0]), int(rows[-1])
    span = bottom - top + 1
    inner = ~occupied[top : bottom + 1]
    if not inner.any():
        return finger_img, finger_mask
    img = finger_img.pixels.copy()
    bits = m.copy()
    fg = finger_img.pixels[m]
    if finger_img.channels == 3:
        fill = np.round(finger_img.pixels[m].mean(axis=0)).astype(np.uint8)
    else:
        fill = np.uint8(round(float(fg.mean())))
    # enumerate maximal empty runs strictly inside the occupied span
    d = np.diff(np.concatenate(([0], inner.view(np.uint8), [0])))
    starts = np.flatnonzero(d == 1) + top
    stops = np.flatnonzero(d == -1) + top
    changed = False
    for s, e in zip(starts, stops):
        gap_len = e - s
        if gap_len >= 0.25 * span:
            continue
        ya, yb = s - 1, e  # nearest occupied rows above/below
        la, ra = np.flatnonzero(m[ya])[[0, -1]]
        lb, rb = np.flatnonzero(m[yb])[[0, -1]]
        for y in range(s, e):
            t = (y - ya) / (yb - ya)
            left = int(round(la + t * (lb - la)))
            right = int(round(ra + t * (rb - ra)))
            new = ~bits[y, left : right + 1]
            bits[y, left : right + 1] = True
            img[y, left : right + 1][new] = fill
        changed = True
    if not changed:
        return finger_img, finger_mask
    return RasterImage(img), BinaryMask(bits)


def _axis_components(labels: np.ndarray, x_center: float, tol: int = 2) -> np.ndarray:
    x0 = max(0, int(round(x_center)) - tol)
    x1 = min(labels.shape[1], int(round(x_center)) + tol + 1)
    ids = np.unique(labels[:, x0:x1])
    return ids[ids > 0]


def crop_fingers(
    img: RasterImage, mask: BinaryMask, fingers_geo: dict
) -> tuple[dict, dict, dict]:
    """Isolate, derotate and normalize each finger to FINGER_W x FINGER_H.

    The finger length is scaled to the frame height (tip at the top row,
    base cut at the bottom row); width scales by the same factor so the
    width-to-length ratio survives normalization.
    """
    if img.channels != 1:
        raise ValueError("crop_fingers expects the grayscale canonical image")
    h, w = mask.bits.shape
    images, masks, contours = {}, {}, {}
    for label in FINGER_LABELS:
        geo: FingerGeometry = fingers_geo[label]
        mid = geo.midpoint
        tip = geo.tip
        # work on a local window around the finger to keep rotation cheap
        reach = float(np.hypot(*(tip - mid)))
        halfspan = int(np.ceil(reach + 48))
        cx, cy = int(round(mid[0])), int(round(mid[1]))
        x0, x1 = max(0, cx - halfspan), min(w, cx + halfspan + 1)
        y0, y1 = max(0, cy - halfspan), min(h, cy + halfspan + 1)
        sub_img = RasterImage(img.pixels[y0:y1, x0:x1])
        sub_mask = BinaryMask(mask.bits[y0:y1, x0:x1])
        local_mid = mid - (x0, y0)
        rot_img = raster.rotate(sub_img, -geo.pose_deg, center=local_mid)
        rot_mask = raster.rotate(sub_mask, -geo.pose_deg, center=local_mid)
        rm = raster.rotation_matrix(-geo.pose_deg)
        tip_r = rm @ (tip - (x0, y0) - local_mid) + local_mid
        fa_r = rm @ (geo.flank_a - (x0, y0) - local_mid) + local_mid
        fb_r = rm @ (geo.flank_b - (x0, y0) - local_mid) + local_mid
        base_y = int(round(max(fa_r[1], fb_r[1])))
        top_y = int(round(tip_r[1]))
        half_w = int(np.ceil(max(abs(fa_r[0] - local_mid[0]), abs(fb_r[0] - local_mid[0])) + 3))
        bx0 = max(0, int(round(local_mid[0])) - half_w)
        bx1 = min(rot_mask.bits.shape[1], int(round(local_mid[0])) + half_w + 1)
        by0 = max(0, top_y)
        by1 = min(rot_mask.bits.shape[0], base_y + 1)
        if by1 - by0 < 4 or bx1 - bx0 < 2:
            raise FingerCropFailure(label)
        box_mask = rot_mask.bits[by0:by1, bx0:bx1]
        box_img = rot_img.pixels[by0:by1, bx0:bx1]
        labels = label_components(box_mask.astype(np.uint8), True)
        keep = _axis_components(labels, local_mid[0] - bx0)
        if keep.size == 0:
            raise FingerCropFailure(label)
        fmask = np.isin(labels, keep)
        fimg = np.where(fmask, box_img, 0).astype(np.uint8)
        fimg_r, fmask_r = inpaint_ring_gap(RasterImage(fimg), BinaryMask(fmask))
        if int(label_components(fmask_r.bits.astype(np.uint8), True).max()) != 1:
            raise FingerCropFailure(label)
        # trim empty columns, keep the full tip..base row range
        cols = np.flatnonzero(fmask_r.bits.any(axis=0))
        fm = fmask_r.bits[:, cols[0] : cols[-1] + 1]
        fi = fimg_r.pixels[:, cols[0] : cols[-1] + 1]
        scale = FINGER_H / fm.shape[0]
        new_w = max(2, int(round(fm.shape[1] * scale)))
        img_s = raster.resample_array(fi.astype(np.float64), new_w, FINGER_H)
        mask_s = raster.resample_array(fm.astype(np.float64), new_w, FINGER_H) >= 0.5
        frame_i = np.zeros((FINGER_H, FINGER_W), dtype=np.uint8)
        frame_m = np.zeros((FINGER_H, FINGER_W), dtype=bool)
        if new_w <= FINGER_W:
            off = (FINGER_W - new_w) // 2
            frame_i[:, off : off + new_w] = np.clip(np.round(img_s), 0, 255).astype(np.uint8)
            frame_m[:, off : off + new_w] = mask_s
        else:
            off = (new_w - FINGER_W) // 2
            frame_i[:, :] = np.clip(np.round(img_s[:, off : off + FINGER_W]), 0, 255).astype(
                np.uint8
            )
            frame_m[:, :] = mask_s[:, off : off + FINGER_W]
        frame_i[~frame_m] = 0
        if not frame_m.any():
            raise FingerCropFailure(label)
        images[label] = RasterImage(frame_i)
        masks[label] = frame_m
        contours[label] = trace_contour(frame_m)
    return images, masks, contours


def fit_palm_circle(points: np.ndarray):
    """Least-squares circle through the valleys and finger midpoints."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.shape[0] < 6:
        raise PalmFitFailure(f"palm fit needs >= 6 points, got {pts.shape[0]}")
    return geometry.fit_circle(pts)


def crop_palm(img: RasterImage, mask: BinaryMask, points: np.ndarray) -> RasterImage:
    """Disc crop of the palm, resampled so the disc radius is PALM_RADIUS.

    When the fitted disc covers too little hand foreground (< 70%), the
    centre shifts down the hand axis by 0.6 r before cropping.
    """
    if img.channels != 1:
        raise ValueError("crop_palm expects the grayscale canonical image")
    centre, r = fit_palm_circle(points)
    h, w = mask.bits.shape
    gy, gx = np.mgrid[0:h, 0:w]
    inside = (gx - centre[0]) ** 2 + (gy - centre[1]) ** 2 <= r * r
    n_inside = int(inside.sum())
    if n_inside > 0 and mask.bits[inside].mean() < 0.70:
        centre = centre + np.array([0.0, 0.6 * r])
    s = PALM_RADIUS / r
    half = (PALM_FRAME - 1) / 2.0
    xt = np.arange(PALM_FRAME, dtype=np.float64)
    sx = centre[0] + (xt - half) / s
    sy = centre[1] + (xt - half) / s
    gsx, gsy = np.meshgrid(sx, sy)
    vals = raster._bilinear(img.pixels.astype(np.float64), gsx, gsy)
    mvals = raster._bilinear(mask.bits.astype(np.float64), gsx, gsy) >= 0.5
    out_of_frame = (gsx < -0.5) | (gsx > w - 0.5) | (gsy < -0.5) | (gsy > h - 0.5)
    disc = (gsx - centre[0]) ** 2 + (gsy - centre[1]) ** 2 <= r * r
    keep = disc & mvals & ~out_of_frame
    vals[~keep] = 0
    return RasterImage(np.clip(np.round(vals), 0, 255).astype(np.uint8))
