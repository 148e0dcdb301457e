"""Deterministic procedural hand generator with exact ground truth.

Hands are palm discs with capsule fingers (plus an optional wrist capsule),
rendered with analytic coverage so landmark ground truth is exact: valleys
are the equidistant points between adjacent finger capsules on the palm
circle, fingertips are the capsule apexes.  The construction is calibrated
so the valley-based pose estimate of the canonical hand is exactly zero,
which makes the stored global pose directly comparable with the pipeline
estimate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import geometry, pnm
from .errors import InvalidSpec
from .raster import RasterImage

FINGER_LABELS = ("little", "ring", "middle", "index", "thumb")
VALLEY_PAIRS = {
    "ring_little": ("little", "ring"),
    "middle_ring": ("ring", "middle"),
    "index_middle": ("middle", "index"),
    "thumb_index": ("index", "thumb"),
}

# canonical right hand: fingers up, thumb on the image-left side (this is the
# orientation in which the labelled valley polygon runs clockwise, y down)
_ATTACH_BASE = {"little": 47.0, "ring": 21.5, "middle": -5.0, "index": -29.0, "thumb": -69.0}
_SPLAY_BASE = {"little": 17.0, "ring": 7.0, "middle": -3.0, "index": -13.0, "thumb": -50.0}

_MIN_GAP_CLEARANCE = 5.75  # half-gap at the valley; keeps close(r=5) from bridging
_MIN_PAIR_CLEARANCE = 11.0  # capsule edge-to-edge anywhere
_PLACEMENT_MARGIN = 10.0


@dataclass(frozen=True)
class FingerSpec:
    length: float  # visible length from palm circle to cap apex, px
    width: float  # capsule diameter, px
    splay_deg: float  # axis angle in the canonical frame, from North


@dataclass(frozen=True)
class HandSpec:
    subject_seed: int
    palm_radius: float
    fingers: tuple  # 5 FingerSpec in (little, ring, middle, index, thumb) order
    global_pose_deg: float = 0.0
    handedness: str = "right"
    skin_rgb: tuple = (208, 152, 120)
    background: str = "uniform"  # uniform | textured | clutter
    accessories: tuple = ()  # subset of {"ring", "sleeve", "watch"}
    ring_offset: float = 0.40  # fraction along the ring finger
    sleeve_height: float = 0.45  # fraction of the wrist where the sleeve starts
    image_size: tuple = (383, 526)  # (width, height)
    wrist: bool = True
    sample_seed: int = 0
    noise_sigma: float = 2.0

    def __post_init__(self):
        if len(self.fingers) != 5:
            raise InvalidSpec("exactly five fingers are required")
        for f in self.fingers:
            if not (0.8 <= f.length / self.palm_radius <= 1.6):
                raise InvalidSpec("finger length must be 0.8-1.6 palm radii")
            if not (0.18 <= f.width / self.palm_radius <= 0.32):
                raise InvalidSpec("finger width must be 0.18-0.32 palm radii")
        if self.handedness not in ("right", "left"):
            raise InvalidSpec("handedness must be right or left")


@dataclass
class SyntheticSample:
    subject_id: str
    sample_id: str
    spec: HandSpec
    image: RasterImage
    mask: np.ndarray
    truth: dict = field(repr=False, default_factory=dict)


def _seg_point_dist(px, py, a, b):
    """Vectorized distance from grid points to segment ab."""
    ax, ay = a
    bx, by = b
    abx, aby = bx - ax, by - ay
    denom = abx * abx + aby * aby
    if denom == 0:
        return np.hypot(px - ax, py - ay)
    t = np.clip(((px - ax) * abx + (py - ay) * aby) / denom, 0.0, 1.0)
    return np.hypot(px - (ax + t * abx), py - (ay + t * aby))


def _capsule_dist(p, a, b, rho):
    return geometry.point_segment_distance(p, a, b) - rho


class _Construction:
    """Canonical right-hand geometry, calibrated so the pose estimate is 0."""

    def __init__(self, spec: HandSpec):
        rng = np.random.default_rng(spec.subject_seed)
        rp = spec.palm_radius
        attach = {k: _ATTACH_BASE[k] + rng.uniform(-2.5, 2.5) for k in FINGER_LABELS}
        self.shading_gain = rng.uniform(0.05, 0.10)
        self.palm_creases = [
            {
                "center_angle": rng.uniform(-150, 150),
                "center_dist": rng.uniform(0.9, 1.6),
                "radius": rng.uniform(0.7, 1.5),
                "width": rng.uniform(1.3, 2.6),
                "depth": rng.uniform(0.10, 0.22),
            }
            for _ in range(int(rng.integers(4, 7)))
        ]
        self.finger_creases = {
            k: [(rng.uniform(0.28, 0.45), rng.uniform(0.55, 0.75)), rng.uniform(0.10, 0.18)]
            for k in FINGER_LABELS
        }
        self.rp = rp
        self.capsules = {}
        for label, f in zip(FINGER_LABELS, spec.fingers):
            beta = attach[label]
            delta = f.splay_deg
            b = 0.8 * rp * geometry.direction(beta)
            u = geometry.direction(delta)
            bu = float(b @ u)
            t_exit = -bu + np.sqrt(bu * bu - float(b @ b) + rp * rp)
            rho = f.width / 2.0
            apex = b + (t_exit + f.length) * u
            t_end = apex - rho * u
            self.capsules[label] = {
                "a": b,
                "b": t_end,
                "rho": rho,
                "apex": apex,
                "axis": u,
                "exit": b + t_exit * u,
            }
        if spec.wrist:
            wdir = geometry.direction(178.0)
            w0 = 0.3 * rp * wdir
            w1 = w0 + 2.6 * rp * wdir
            self.wrist = {"a": w0, "b": w1, "rho": 0.60 * rp}
        else:
            self.wrist = None
        self._validate_clearances()
        self.valleys = {k: self._solve_valley(*v) for k, v in VALLEY_PAIRS.items()}
        for v in self.valleys.values():
            if v is None:
                raise InvalidSpec("inter-finger gap closed: no valley on the palm circle")
        # calibrate: rotate so the pose construction of the valleys reads 0
        pose0 = geometry.angle_from_north(self.valleys["middle_ring"])
        rot = self._rot(-pose0)
        for c in self.capsules.values():
            for key in ("a", "b", "apex", "axis"):
                c[key] = rot @ c[key]
        if self.wrist is not None:
            self.wrist["a"] = rot @ self.wrist["a"]
            self.wrist["b"] = rot @ self.wrist["b"]
        self.valleys = {k: rot @ v for k, v in self.valleys.items()}
        self.tips = {k: self.capsules[k]["apex"].copy() for k in FINGER_LABELS}
        self.finger_poses = self._finger_pose_truth()

    @staticmethod
    def _rot(angle_deg):
        return np.array(
            [
                [np.cos(np.deg2rad(angle_deg)), -np.sin(np.deg2rad(angle_deg))],
                [np.sin(np.deg2rad(angle_deg)), np.cos(np.deg2rad(angle_deg))],
            ]
        )

    def _validate_clearances(self):
        # the buried capsule bases merge into the palm disc; only the visible
        # segments (palm-circle exit to cap end) shape the inter-finger gaps
        caps = self.capsules
        labels = list(FINGER_LABELS)
        for i, la in enumerate(labels):
            for lb in labels[i + 1 :]:
                d = _segment_segment_distance(
                    caps[la]["exit"], caps[la]["b"], caps[lb]["exit"], caps[lb]["b"]
                ) - caps[la]["rho"] - caps[lb]["rho"]
                adjacent = abs(labels.index(la) - labels.index(lb)) == 1
                if d <= (_MIN_PAIR_CLEARANCE if adjacent else 2.0):
                    raise InvalidSpec(f"fingers {la}/{lb} too close ({d:.1f}px)")
            if self.wrist is not None and la in ("little", "thumb"):
                wdir = self.wrist["b"] - self.wrist["a"]
                wdir = wdir / np.hypot(*wdir)
                w_exit = self.rp * wdir  # wrist axis passes near the palm centre
                d = _segment_segment_distance(
                    caps[la]["exit"], caps[la]["b"], w_exit, self.wrist["b"]
                ) - caps[la]["rho"] - self.wrist["rho"]
                if d <= _MIN_PAIR_CLEARANCE:
                    raise InvalidSpec(f"finger {la} touches the wrist ({d:.1f}px)")

    def _solve_valley(self, label_a, label_b):
        """Equidistant point between two adjacent capsules on the palm circle."""
        import math

        ca, cb = self.capsules[label_a], self.capsules[label_b]
        rp = self.rp
        segs = {}
        for lab in (label_a, label_b):
            c = self.capsules[lab]
            ax, ay = float(c["a"][0]), float(c["a"][1])
            ex, ey = float(c["b"][0]), float(c["b"][1])
            dx, dy = ex - ax, ey - ay
            segs[lab] = (ax, ay, dx, dy, dx * dx + dy * dy, float(c["rho"]))

        def d(label, phi):
            ax, ay, dx, dy, dd, rho = segs[label]
            a = math.radians(phi)
            px, py = rp * math.sin(a), -rp * math.cos(a)
            t = ((px - ax) * dx + (py - ay) * dy) / dd
            t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
            return math.hypot(px - ax - t * dx, py - ay - t * dy) - rho

        def f(phi):
            return d(label_a, phi) - d(label_b, phi)

        # bracket the sign change on the open arc between the attachments
        phi_a = geometry.angle_from_north(ca["a"])
        phi_b = geometry.angle_from_north(cb["a"])
        lo, hi = sorted((phi_a, phi_b))
        phis = np.linspace(lo, hi, 80)
        vals = [f(p) for p in phis]
        bracket = None
        for i in range(len(phis) - 1):
            if vals[i] == 0.0:
                bracket = (phis[i], phis[i])
                break
            if vals[i] * vals[i + 1] < 0:
                bracket = (phis[i], phis[i + 1])
                break
        if bracket is None:
            return None
        a, b = bracket
        fa = f(a)
        for _ in range(60):
            m = 0.5 * (a + b)
            fm = f(m)
            if fa * fm <= 0:
                b = m
            else:
                a, fa = m, fm
        phi = 0.5 * (a + b)
        clearance = min(d(label_a, phi), d(label_b, phi))
        if clearance < _MIN_GAP_CLEARANCE:
            raise InvalidSpec(f"gap {label_a}/{label_b} too narrow ({clearance:.1f}px)")
        return self.rp * geometry.direction(phi)

    def _finger_pose_truth(self):
        poses = {}
        flanks = {
            "little": ("ring_little", None),
            "ring": ("ring_little", "middle_ring"),
            "middle": ("middle_ring", "index_middle"),
            "index": ("index_middle", "thumb_index"),
            "thumb": ("thumb_index", None),
        }
        for label in FINGER_LABELS:
            a_key, b_key = flanks[label]
            a = self.valleys[a_key]
            cap = self.capsules[label]
            if b_key is None:
                b = geometry.reflect_across_line(a, cap["a"], cap["apex"])
            else:
                b = self.valleys[b_key]
            mid = (a + b) / 2.0
            poses[label] = geometry.angle_from_north(cap["apex"] - mid)
        return poses


def _segment_segment_distance(a1, b1, a2, b2) -> float:
    """Minimum distance between two 2D segments."""
    cand = [
        geometry.point_segment_distance(a1, a2, b2),
        geometry.point_segment_distance(b1, a2, b2),
        geometry.point_segment_distance(a2, a1, b1),
        geometry.point_segment_distance(b2, a1, b1),
    ]
    # crossing segments
    d1 = np.asarray(b1) - np.asarray(a1)
    d2 = np.asarray(b2) - np.asarray(a2)
    denom = d1[0] * d2[1] - d1[1] * d2[0]
    if abs(denom) > 1e-12:
        r = np.asarray(a2) - np.asarray(a1)
        t = (r[0] * d2[1] - r[1] * d2[0]) / denom
        s = (r[0] * d1[1] - r[1] * d1[0]) / denom
        if 0 <= t <= 1 and 0 <= s <= 1:
            return 0.0
    return float(min(cand))


def _layout(spec: HandSpec):
    """Construction plus frame placement; raises InvalidSpec when the hand
    core (palm and fingers) cannot fit the frame.  The wrist may clip."""
    cons = _Construction(spec)
    w, h = spec.image_size
    mirror = spec.handedness == "left"
    rot = cons._rot(spec.global_pose_deg)

    def xform(p):
        q = np.asarray(p, dtype=np.float64).copy()
        if mirror:
            q = q * np.array([-1.0, 1.0])
        return rot @ q

    parts = []
    core_pts = []
    for label in FINGER_LABELS:
        c = cons.capsules[label]
        a, b = xform(c["a"]), xform(c["b"])
        parts.append((a, b, c["rho"], label))
        core_pts += [a + c["rho"], a - c["rho"], b + c["rho"], b - c["rho"]]
    palm_c = xform([0.0, 0.0])
    parts.append((palm_c, palm_c, cons.rp, "palm"))
    core_pts += [palm_c + cons.rp, palm_c - cons.rp]
    if cons.wrist is not None:
        wa, wb = xform(cons.wrist["a"]), xform(cons.wrist["b"])
        parts.append((wa, wb, cons.wrist["rho"], "wrist"))
        core_pts += [wa + cons.wrist["rho"], wa - cons.wrist["rho"]]
    core = np.array(core_pts)
    x0, x1 = core[:, 0].min(), core[:, 0].max()
    y0, y1 = core[:, 1].min(), core[:, 1].max()
    if (x1 - x0) > w - 2 * _PLACEMENT_MARGIN or (y1 - y0) > h - 2 * _PLACEMENT_MARGIN:
        raise InvalidSpec("hand does not fit the requested image size")
    centre = np.array([(w - (x0 + x1)) / 2.0, (h - (y0 + y1)) / 2.0])
    return cons, xform, parts, centre


def generate(spec: HandSpec):
    """Render a hand image with its exact mask and landmark ground truth.

    Returns (RasterImage, mask bool array, truth dict).  Fully deterministic
    per spec.
    """
    cons, xform, parts, centre = _layout(spec)
    w, h = spec.image_size

    gx, gy = np.meshgrid(np.arange(w, dtype=np.float64), np.arange(h, dtype=np.float64))
    sdf = np.full((h, w), 1e9)
    for a, b, rho, _label in parts:
        pa, pb = a + centre, b + centre
        sdf = np.minimum(sdf, _seg_point_dist(gx, gy, pa, pb) - rho)
    gt_mask = sdf <= 0.0
    alpha = np.clip(0.5 - sdf, 0.0, 1.0)

    # skin shading: radial falloff, palm creases, finger crease bands
    shade = np.ones((h, w))
    pc = centre
    rr = np.hypot(gx - pc[0], gy - pc[1]) / cons.rp
    shade -= cons.shading_gain * np.clip(rr, 0, 1.4) ** 2
    palm_interior = (_seg_point_dist(gx, gy, pc, pc) - cons.rp) <= -2.0
    for crease in cons.palm_creases:
        cdir = geometry.direction(crease["center_angle"])
        cc = xform(cdir * crease["center_dist"] * cons.rp) + centre
        crad = crease["radius"] * cons.rp
        dist = np.abs(np.hypot(gx - cc[0], gy - cc[1]) - crad)
        band = crease["depth"] * np.exp(-((dist / crease["width"]) ** 2))
        shade -= np.where(palm_interior, band, 0.0)
    for label in FINGER_LABELS:
        c = cons.capsules[label]
        a_t = xform(c["a"]) + centre
        b_t = xform(c["apex"]) + centre
        axis = b_t - a_t
        alen = float(np.hypot(*axis))
        axis /= alen
        proj = (gx - a_t[0]) * axis[0] + (gy - a_t[1]) * axis[1]
        inside = (_seg_point_dist(gx, gy, a_t, b_t) - c["rho"]) <= -1.5
        (f1, f2), depth = cons.finger_creases[label]
        for frac in (f1, f2):
            dist = np.abs(proj - frac * alen)
            band = depth * np.exp(-((dist / 1.6) ** 2))
            shade -= np.where(inside, band, 0.0)
    shade = np.clip(shade, 0.55, 1.0)

    rng = np.random.default_rng(spec.sample_seed)
    base = _render_background(spec, rng, w, h, gt_mask)
    skin = np.array(spec.skin_rgb, dtype=np.float64)
    img = base * (1 - alpha[..., None]) + (shade[..., None] * skin) * alpha[..., None]

    # accessories
    if "ring" in spec.accessories:
        c = cons.capsules["ring"]
        a_t = xform(c["a"]) + centre
        b_t = xform(c["apex"]) + centre
        axis = b_t - a_t
        alen = float(np.hypot(*axis))
        axis /= alen
        proj = (gx - a_t[0]) * axis[0] + (gy - a_t[1]) * axis[1]
        t_ring = (0.35 + 0.65 * spec.ring_offset) * alen
        band = (np.abs(proj - t_ring) <= 3.0) & (sdf <= 0.5)
        img[band] = np.array([138.0, 148.0, 172.0])
    sleeve_core = np.zeros((h, w), dtype=bool)
    if cons.wrist is not None and ("sleeve" in spec.accessories or "watch" in spec.accessories):
        wa = xform(cons.wrist["a"]) + centre
        wb = xform(cons.wrist["b"]) + centre
        waxis = wb - wa
        wlen = float(np.hypot(*waxis))
        waxis /= wlen
        wproj = (gx - wa[0]) * waxis[0] + (gy - wa[1]) * waxis[1]
        if "sleeve" in spec.accessories:
            t0 = spec.sleeve_height * wlen
            sdist = _seg_point_dist(gx, gy, wa + t0 * waxis, wb) - 2.0 * cons.wrist["rho"]
            salpha = np.clip(0.5 - sdist, 0.0, 1.0)
            cloth = np.array([52.0, 66.0, 118.0])
            img = img * (1 - salpha[..., None]) + cloth * salpha[..., None]
            sleeve_core = salpha >= 0.5
        if "watch" in spec.accessories:
            t_w = 0.30 * wlen
            band = (np.abs(wproj - t_w) <= 4.0) & (sdf <= 0.5) & ~sleeve_core
            img[band] = np.array([70.0, 70.0, 74.0])

    gt_mask = gt_mask & ~sleeve_core
    if spec.noise_sigma > 0:
        img = img + rng.normal(0.0, spec.noise_sigma, img.shape)
    image = RasterImage(np.clip(np.round(img), 0, 255).astype(np.uint8))

    def place(p):
        return xform(p) + centre

    valleys = {k: place(v) for k, v in cons.valleys.items()}
    tips = {k: place(cons.tips[k]) for k in FINGER_LABELS}
    for p in list(valleys.values()) + list(tips.values()):
        xi, yi = int(round(p[0])), int(round(p[1]))
        if not (0 <= xi < w and 0 <= yi < h):
            raise InvalidSpec("ground-truth landmark fell outside the frame")
    truth = {
        "palm_center": place([0.0, 0.0]).tolist(),
        "palm_radius": cons.rp,
        "valleys": {k: v.tolist() for k, v in valleys.items()},
        "fingertips": {k: v.tolist() for k, v in tips.items()},
        "global_pose_deg": geometry.wrap_angle(spec.global_pose_deg),
        "finger_poses_deg": {k: float(v) for k, v in cons.finger_poses.items()},
        "handedness": spec.handedness,
    }
    return image, gt_mask, truth


def _render_background(spec: HandSpec, rng, w, h, hand_mask):
    kind = spec.background
    base_level = rng.uniform(38, 72)
    base = np.empty((h, w, 3))
    base[..., :] = base_level + rng.uniform(-8, 8, 3)
    if kind == "uniform":
        return base
    gx, gy = np.meshgrid(np.arange(w, dtype=np.float64), np.arange(h, dtype=np.float64))
    if kind in ("textured", "clutter"):
        tex = np.zeros((h, w))
        for _ in range(3):
            fx, fy = rng.uniform(0.5, 2.0, 2) * 2 * np.pi / max(w, h)
            phase = rng.uniform(0, 2 * np.pi, 2)
            tex += rng.uniform(4, 10) * np.sin(fx * gx + phase[0]) * np.sin(fy * gy + phase[1])
        base += tex[..., None]
    if kind == "clutter":
        ys, xs = np.nonzero(hand_mask)
        bx0, bx1 = xs.min(), xs.max()
        by0, by1 = ys.min(), ys.max()
        hand_area = hand_mask.sum()
        corners = [(0, 0), (0, w - 1), (h - 1, 0), (h - 1, w - 1)]
        rng.shuffle(corners)
        placed = 0
        for cy, cx in corners:
            if placed >= 2:
                break
            side = int(np.sqrt(rng.uniform(0.04, 0.11) * hand_area))
            yy0 = 0 if cy == 0 else h - side
            xx0 = 0 if cx == 0 else w - side
            yy1, xx1 = yy0 + side, xx0 + side
            # keep the blob clear of the hand bounding box
            if not (xx1 < bx0 - 25 or xx0 > bx1 + 25 or yy1 < by0 - 25 or yy0 > by1 + 25):
                continue
            r = rng.uniform(150, 230)
            g = r * rng.uniform(0.60, 0.85)
            b = g * rng.uniform(0.60, 0.90)
            base[yy0:yy1, xx0:xx1] = (r, g, b)
            placed += 1
    return base


def _draw_subject_spec(rng: np.random.Generator, image_size=(383, 526)) -> HandSpec:
    rp = rng.uniform(66, 82)
    ratios = {
        "little": (rng.uniform(1.05, 1.25), rng.uniform(0.19, 0.24)),
        "ring": (rng.uniform(1.30, 1.50), rng.uniform(0.20, 0.255)),
        "middle": (rng.uniform(1.40, 1.58), rng.uniform(0.20, 0.26)),
        "index": (rng.uniform(1.25, 1.45), rng.uniform(0.20, 0.255)),
        "thumb": (rng.uniform(0.85, 0.98), rng.uniform(0.23, 0.28)),
    }
    fingers = tuple(
        FingerSpec(
            length=ratios[k][0] * rp,
            width=ratios[k][1] * rp,
            splay_deg=_SPLAY_BASE[k] + rng.uniform(-2.5, 2.5),
        )
        for k in FINGER_LABELS
    )
    r = rng.uniform(170, 235)
    g = r * rng.uniform(0.66, 0.80)
    b = g * rng.uniform(0.70, 0.88)
    return HandSpec(
        subject_seed=int(rng.integers(0, 2**31 - 1)),
        palm_radius=rp,
        fingers=fingers,
        skin_rgb=(float(r), float(g), float(b)),
        handedness="right" if rng.random() < 0.7 else "left",
        image_size=image_size,
    )


def _param_vector(spec: HandSpec) -> np.ndarray:
    rp = spec.palm_radius
    vec = []
    for f in spec.fingers:
        vec += [f.length / rp, f.width / rp, f.splay_deg / 90.0]
    return np.array(vec)


def _perturb_sample(base: HandSpec, rng: np.random.Generator, sample_seed: int) -> HandSpec:
    scale = rng.uniform(0.85, 1.15)
    pose = rng.uniform(-60.0, 60.0)
    fingers = tuple(
        FingerSpec(
            length=f.length * scale,
            width=f.width * scale,
            splay_deg=f.splay_deg + rng.uniform(-4.0, 4.0),
        )
        for f in base.fingers
    )
    return replace(
        base,
        palm_radius=base.palm_radius * scale,
        fingers=fingers,
        global_pose_deg=pose,
        sample_seed=sample_seed,
    )


def generate_population(
    n_subjects: int,
    samples_per_subject: int,
    seed: int,
    image_size=(383, 526),
    min_separation: float = 0.05,
) -> list[SyntheticSample]:
    """Deterministic population with enforced inter-subject separation.

    Each subject gets one base spec; samples perturb pose (+-60 deg), scale
    (+-15%), per-finger splay (+-4 deg) and add sensor noise.  Draws whose
    geometry self-intersects or whose parameters sit within min_separation
    (L-inf, normalized) of an existing subject are regenerated.
    """
    if n_subjects < 1 or samples_per_subject < 1:
        raise ValueError("population sizes must be >= 1")
    if samples_per_subject > 26:
        raise ValueError("at most 26 samples per subject (A..Z ids)")
    rng = np.random.default_rng(seed)
    samples = []
    vectors = []
    for s in range(n_subjects):
        subject_id = f"S{s:03d}"
        while True:
            base = _draw_subject_spec(rng, image_size=image_size)
            vec = _param_vector(base)
            if vectors and min(np.abs(vec - v).max() for v in vectors) < min_separation:
                continue
            specs = []
            try:
                for k in range(samples_per_subject):
                    sample_seed = int(rng.integers(0, 2**31 - 1))
                    spec = _perturb_sample(base, rng, sample_seed)
                    _layout(spec)  # cheap geometry + placement validation
                    specs.append(spec)
            except InvalidSpec:
                continue
            for k, spec in enumerate(specs):
                img, mask, truth = generate(spec)
                truth["subject_id"] = subject_id
                sid = chr(ord("A") + k)
                truth["sample_id"] = sid
                samples.append(SyntheticSample(subject_id, sid, spec, img, mask, truth))
            vectors.append(vec)
            break
    return samples


def write_dataset(samples: list, out_dir) -> None:
    """PPM images plus `<name>.gt.json` sidecars and mask PGMs."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for s in samples:
        stem = f"{s.subject_id}_{s.sample_id}"
        pnm.write_pnm(s.image, out / f"{stem}.ppm")
        pnm.write_mask_pgm(s.mask, out / f"{stem}.mask.pgm")
        truth = dict(s.truth)
        truth["mask"] = f"{stem}.mask.pgm"
        truth["image"] = f"{stem}.ppm"
        with open(out / f"{stem}.gt.json", "w") as f:
            json.dump(truth, f, indent=1)


def load_dataset(path) -> list:
    """Read back a dataset directory written by write_dataset."""
    out = []
    for gt_path in sorted(Path(path).glob("*.gt.json")):
        with open(gt_path) as f:
            truth = json.load(f)
        img = pnm.read_pnm(Path(path) / truth["image"])
        mask = pnm.read_mask_pgm(Path(path) / truth["mask"])
        out.append(
            SyntheticSample(
                subject_id=truth["subject_id"],
                sample_id=truth["sample_id"],
                spec=None,
                image=img,
                mask=mask,
                truth=truth,
            )
        )
    return out
